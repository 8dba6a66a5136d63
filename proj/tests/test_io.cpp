#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "wimd/io.hpp"

using namespace wimd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("wimd_io_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("IQ round trip") {
    TempDir tmp;
    const IqWaveform wf = gen_wifi_baseband(0.01, 50e3, 5);
    write_iq(tmp.path / "a.iq", wf);
    const IqWaveform back = read_iq(tmp.path / "a.iq", 50e3);
    REQUIRE(back.samples.size() == wf.samples.size());
    CHECK(std::equal(wf.samples.begin(), wf.samples.end(), back.samples.begin()));
    CHECK(fs::file_size(tmp.path / "a.iq") == wf.samples.size() * 8);
}

TEST_CASE("float32 blob round trip") {
    TempDir tmp;
    Eigen::VectorXd v(2550);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < v.size(); ++i) v(i) = u(rng);
    write_f32(tmp.path / "sig.f32", v);
    CHECK(fs::file_size(tmp.path / "sig.f32") == 2550 * 4);
    const Eigen::VectorXd back = read_f32(tmp.path / "sig.f32");
    REQUIRE(back.size() == v.size());
    for (int i = 0; i < v.size(); ++i)
        CHECK(back(i) == doctest::Approx(v(i)).epsilon(1e-7));
}

TEST_CASE("CSV matrix round trip at float32 precision") {
    TempDir tmp;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    Eigen::MatrixXd m(51, 20);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) = u(rng);
    write_csv_matrix(tmp.path / "m.csv", m);
    const Eigen::MatrixXd back = read_csv_matrix(tmp.path / "m.csv");
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            CHECK(static_cast<float>(back(r, c)) == static_cast<float>(m(r, c)));
}

TEST_CASE("PGM header and payload") {
    TempDir tmp;
    const Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(51, 50);
    write_pgm(tmp.path / "sig.pgm", sig, 0.0, 1.0);

    std::ifstream in(tmp.path / "sig.pgm", std::ios::binary);
    std::string header;
    std::getline(in, header);
    CHECK(header == "P5 50 51 255");
    std::vector<char> payload((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    REQUIRE(payload.size() == 2550);
    for (char b : payload) CHECK(b == 0);
}

TEST_CASE("manifest round trip") {
    TempDir tmp;
    std::vector<ManifestEntry> entries{
        {MotionClass::M2, 1, 42, "sig_000.f32"},
        {MotionClass::M6, 2, 43, "sig_001.f32"},
    };
    write_manifest(tmp.path / "manifest.ndjson", entries);
    const auto back = read_manifest(tmp.path / "manifest.ndjson");
    REQUIRE(back.size() == 2);
    CHECK(back[0].label == MotionClass::M2);
    CHECK(back[0].channel == 1);
    CHECK(back[0].seed == 42);
    CHECK(back[0].file == "sig_000.f32");
    CHECK(back[1].label == MotionClass::M6);
}

TEST_CASE("model containers round trip") {
    TempDir tmp;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);

    PcaModel pca;
    pca.mean = Eigen::VectorXd::NullaryExpr(30, [&](Eigen::Index) { return g(rng); });
    pca.basis = Eigen::MatrixXd::NullaryExpr(30, 5, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    pca.eigenvalues = Eigen::VectorXd::NullaryExpr(5, [&](Eigen::Index) { return std::abs(g(rng)); });
    save_pca(tmp.path / "pca.bin", pca);
    const PcaModel pca_back = load_pca(tmp.path / "pca.bin");
    CHECK(pca_back.mean == pca.mean);
    CHECK(pca_back.basis == pca.basis);
    CHECK(pca_back.eigenvalues == pca.eigenvalues);

    Dictionary dict;
    dict.atoms = Eigen::MatrixXd::NullaryExpr(5, 12, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    for (int i = 0; i < 12; ++i) dict.labels.push_back(class_from_index(i % kNumClasses));
    save_dictionary(tmp.path / "dict.bin", dict);
    const Dictionary dict_back = load_dictionary(tmp.path / "dict.bin");
    CHECK(dict_back.atoms == dict.atoms);
    CHECK(dict_back.labels == dict.labels);

    SvmModel svm;
    svm.weights = Eigen::MatrixXd::NullaryExpr(5, kNumClasses, [&](Eigen::Index, Eigen::Index) { return g(rng); });
    svm.bias = Eigen::VectorXd::NullaryExpr(kNumClasses, [&](Eigen::Index) { return g(rng); });
    svm.lambda = 1e-3;
    svm.epochs = 17;
    svm.seed = 21;
    save_svm(tmp.path / "svm.bin", svm);
    const SvmModel svm_back = load_svm(tmp.path / "svm.bin");
    CHECK(svm_back.weights == svm.weights);
    CHECK(svm_back.bias == svm.bias);
    CHECK(svm_back.lambda == svm.lambda);
    CHECK(svm_back.epochs == svm.epochs);

    // Wrong kind is rejected.
    CHECK_THROWS_AS(load_pca(tmp.path / "dict.bin"), std::runtime_error);
    CHECK_THROWS_AS(load_svm(tmp.path / "missing.bin"), std::runtime_error);
}
