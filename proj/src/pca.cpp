#include "wimd/pca.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace wimd {

void SignatureDataset::add(Eigen::VectorXd sample, MotionClass label, int channel) {
    if (!samples.empty() && sample.size() != samples.front().size())
        throw std::invalid_argument("SignatureDataset: inconsistent sample length");
    samples.push_back(std::move(sample));
    labels.push_back(label);
    channels.push_back(channel);
}

Eigen::MatrixXd SignatureDataset::data_matrix() const {
    if (samples.empty()) throw std::invalid_argument("SignatureDataset: empty");
    Eigen::MatrixXd m(dim(), size());
    for (int i = 0; i < size(); ++i) m.col(i) = samples[static_cast<std::size_t>(i)];
    return m;
}

PcaModel fit_pca(const SignatureDataset& train, int n_components) {
    const int n = train.size();
    if (n < 1) throw std::invalid_argument("fit_pca: empty training set");
    const int p = train.dim();
    if (n_components < 1 || n_components > std::min(p, n))
        throw std::invalid_argument("fit_pca: component count out of range");

    Eigen::MatrixXd data = train.data_matrix();
    const Eigen::VectorXd mean = data.rowwise().mean();
    data.colwise() -= mean;

    // Thin SVD of the centered P x N matrix; never forms the P x P covariance.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(data, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();

    PcaModel model;
    model.mean = mean;
    model.basis = svd.matrixU().leftCols(n_components);
    model.eigenvalues.resize(n_components);
    const double denom = n > 1 ? static_cast<double>(n - 1) : 1.0;
    for (int k = 0; k < n_components; ++k) model.eigenvalues(k) = sv(k) * sv(k) / denom;

    // Deterministic sign: largest-magnitude entry of each eigenvector positive.
    for (int k = 0; k < n_components; ++k) {
        int idx = 0;
        model.basis.col(k).cwiseAbs().maxCoeff(&idx);
        if (model.basis(idx, k) < 0.0) model.basis.col(k) = -model.basis.col(k);
    }
    return model;
}

PcaModel fit_pca_auto(const SignatureDataset& train, double var_fraction, int max_components) {
    const int full = std::min(train.dim(), train.size());
    PcaModel all = fit_pca(train, full);
    const double total = all.eigenvalues.sum();
    int n = full;
    if (total > 0.0) {
        double acc = 0.0;
        for (int k = 0; k < full; ++k) {
            acc += all.eigenvalues(k);
            if (acc >= var_fraction * total) {
                n = k + 1;
                break;
            }
        }
    }
    n = std::min(n, max_components);
    all.basis.conservativeResize(Eigen::NoChange, n);
    all.eigenvalues.conservativeResize(n);
    return all;
}

Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& d) {
    if (d.size() != model.mean.size())
        throw std::invalid_argument("project: dimension mismatch");
    return model.basis.transpose() * (d - model.mean);
}

SignatureDataset project_dataset(const PcaModel& model, const SignatureDataset& ds) {
    SignatureDataset out;
    for (int i = 0; i < ds.size(); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        out.add(project(model, ds.samples[idx]), ds.labels[idx], ds.channels[idx]);
    }
    return out;
}

}  // namespace wimd
