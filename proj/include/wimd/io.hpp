#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "wimd/align.hpp"
#include "wimd/classify.hpp"
#include "wimd/waveform.hpp"

namespace wimd {

// Raw IQ: interleaved complex32 (float32 I, float32 Q) little-endian.
void write_iq(const std::filesystem::path& path, const IqWaveform& wf);
IqWaveform read_iq(const std::filesystem::path& path, double sample_rate_hz);

// Flat float32 little-endian blobs (aligned signatures).
void write_f32(const std::filesystem::path& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_f32(const std::filesystem::path& path);

// CSV matrices: rows = frequency bins ascending, columns = time.
void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path);

// 8-bit binary PGM, values scaled 0-255 over [lo, hi] (lo == hi: matrix range).
void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& m,
               double lo = 0.0, double hi = 1.0);

// Sidecar metadata.
void write_json(const std::filesystem::path& path, const std::string& json_text);

// Newline-delimited JSON manifest of dataset signatures.
struct ManifestEntry {
    MotionClass label = MotionClass::M1;
    int channel = 1;
    std::uint64_t seed = 0;
    std::string file;
};
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// Binary model container (magic "WMDL", version byte, kind byte).
void save_pca(const std::filesystem::path& path, const PcaModel& model);
PcaModel load_pca(const std::filesystem::path& path);
void save_dictionary(const std::filesystem::path& path, const Dictionary& dict);
Dictionary load_dictionary(const std::filesystem::path& path);
void save_svm(const std::filesystem::path& path, const SvmModel& model);
SvmModel load_svm(const std::filesystem::path& path);

}  // namespace wimd
