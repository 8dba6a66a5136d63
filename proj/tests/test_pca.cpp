#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wimd/pca.hpp"

using namespace wimd;

namespace {

SignatureDataset make_dataset(const Eigen::MatrixXd& columns) {
    SignatureDataset ds;
    for (Eigen::Index i = 0; i < columns.cols(); ++i)
        ds.add(columns.col(i), MotionClass::M1, 1);
    return ds;
}

}  // namespace

TEST_CASE("rank-1 data recovers the line direction") {
    Eigen::Vector3d dir(1.0, -2.0, 0.5);
    dir.normalize();
    Eigen::MatrixXd cols(3, 40);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) cols.col(i) = Eigen::Vector3d(5.0, 1.0, -2.0) + u(rng) * dir;

    const PcaModel model = fit_pca(make_dataset(cols), 1);
    const double cosine = std::abs(model.basis.col(0).dot(dir));
    CHECK(cosine > 0.999);
}

TEST_CASE("known 2D covariance: eigenvalues within 5%") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g1(0.0, 2.0), g2(0.0, 1.0);
    Eigen::MatrixXd cols(2, 10'000);
    for (int i = 0; i < cols.cols(); ++i) cols.col(i) = Eigen::Vector2d(g1(rng), g2(rng));

    const PcaModel model = fit_pca(make_dataset(cols), 2);
    CHECK(model.eigenvalues(0) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(model.eigenvalues(1) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(model.basis(0, 0)) > 0.99);  // first axis along e1
}

TEST_CASE("full-rank reconstruction is exact") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 12, p = 30;
    Eigen::MatrixXd cols(p, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) cols(j, i) = g(rng);

    const SignatureDataset ds = make_dataset(cols);
    const PcaModel model = fit_pca(ds, n - 1);

    double total_var = 0.0, residual = 0.0;
    const Eigen::VectorXd mean = cols.rowwise().mean();
    for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd centered = cols.col(i) - mean;
        total_var += centered.squaredNorm();
        const Eigen::VectorXd z = project(model, cols.col(i));
        residual += (centered - model.basis * z).squaredNorm();
    }
    CHECK(residual < 1e-6 * total_var);
}

TEST_CASE("projection identities") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXd cols(10, 25);
    for (int i = 0; i < cols.size(); ++i) cols(i % 10, i / 10) = g(rng);
    const PcaModel model = fit_pca(make_dataset(cols), 6);

    CHECK(project(model, model.mean).norm() < 1e-10);

    for (int k : {0, 3, 5}) {
        const Eigen::VectorXd z = project(model, model.mean + model.basis.col(k));
        Eigen::VectorXd ek = Eigen::VectorXd::Zero(6);
        ek(k) = 1.0;
        CHECK((z - ek).norm() < 1e-10);
    }

    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd d(10);
        for (int j = 0; j < 10; ++j) d(j) = g(rng);
        CHECK(project(model, d).norm() <= (d - model.mean).norm() + 1e-12);
    }

    CHECK_THROWS_AS(project(model, Eigen::VectorXd::Zero(9)), std::invalid_argument);
}

TEST_CASE("model invariants: orthonormal basis, descending spectrum, variance match") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    const int p = 80, n = 30;
    Eigen::MatrixXd cols(p, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) cols(j, i) = g(rng) * (1.0 + 0.1 * j);

    const SignatureDataset ds = make_dataset(cols);
    const PcaModel model = fit_pca(ds, 20);

    const Eigen::MatrixXd gram = model.basis.transpose() * model.basis;
    CHECK((gram - Eigen::MatrixXd::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-8);

    for (int k = 1; k < 20; ++k) {
        CHECK(model.eigenvalues(k) <= model.eigenvalues(k - 1) + 1e-12);
        CHECK(model.eigenvalues(k) >= 0.0);
    }

    // Per-component variance of the projected training set equals the spectrum.
    Eigen::MatrixXd z(20, n);
    for (int i = 0; i < n; ++i) z.col(i) = project(model, cols.col(i));
    for (int k = 0; k < 20; ++k) {
        const double var = z.row(k).squaredNorm() / (n - 1);
        CHECK(var == doctest::Approx(model.eigenvalues(k)).epsilon(1e-6));
    }

    // Reconstruction error is non-increasing in the component count.
    double prev = std::numeric_limits<double>::infinity();
    for (int k : {2, 5, 10, 20}) {
        const PcaModel mk = fit_pca(ds, k);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd centered = cols.col(i) - mk.mean;
            err += (centered - mk.basis * (mk.basis.transpose() * centered)).squaredNorm();
        }
        CHECK(err <= prev + 1e-9);
        prev = err;
    }

    CHECK_THROWS_AS(fit_pca(ds, 0), std::invalid_argument);
    CHECK_THROWS_AS(fit_pca(ds, n + 1), std::invalid_argument);
}

TEST_CASE("auto component selection respects the variance target and cap") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 1.0);
    const int p = 40, n = 25;
    Eigen::MatrixXd cols(p, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) cols(j, i) = g(rng) * std::exp(-0.3 * j);

    const SignatureDataset ds = make_dataset(cols);
    const PcaModel full = fit_pca(ds, n);
    const PcaModel model = fit_pca_auto(ds, 0.95, 60);
    CHECK(model.components() <= 60);
    CHECK(model.eigenvalues.sum() >= 0.95 * full.eigenvalues.sum());

    const PcaModel capped = fit_pca_auto(ds, 0.9999999, 3);
    CHECK(capped.components() == 3);
}
