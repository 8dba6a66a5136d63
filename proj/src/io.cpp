#include "wimd/io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <sstream>

namespace wimd {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream in(path, mode);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return in;
}

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void put_f64_block(std::ostream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void get_f64_block(std::istream& in, double* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

constexpr char kMagic[4] = {'W', 'M', 'D', 'L'};
constexpr std::uint8_t kVersion = 1;
enum ModelKind : std::uint8_t { kPca = 1, kDict = 2, kSvm = 3 };

void write_header(std::ostream& out, ModelKind kind) {
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    out.put(static_cast<char>(kind));
}

void check_header(std::istream& in, ModelKind kind, const std::filesystem::path& path) {
    char magic[4] = {};
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad model magic: " + path.string());
    const int version = in.get();
    const int got_kind = in.get();
    if (version != kVersion || got_kind != kind)
        throw std::runtime_error("unsupported model version/kind: " + path.string());
}

}  // namespace

void write_iq(const std::filesystem::path& path, const IqWaveform& wf) {
    auto out = open_out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(wf.samples.data()),
              static_cast<std::streamsize>(wf.samples.size() * sizeof(std::complex<float>)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

IqWaveform read_iq(const std::filesystem::path& path, double sample_rate_hz) {
    auto in = open_in(path, std::ios::binary);
    const auto bytes = std::filesystem::file_size(path);
    if (bytes % sizeof(std::complex<float>) != 0)
        throw std::runtime_error("truncated IQ file: " + path.string());
    IqWaveform wf;
    wf.sample_rate_hz = sample_rate_hz;
    wf.samples.resize(bytes / sizeof(std::complex<float>));
    in.read(reinterpret_cast<char*>(wf.samples.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return wf;
}

void write_f32(const std::filesystem::path& path, const Eigen::VectorXd& v) {
    auto out = open_out(path, std::ios::binary);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const float f = static_cast<float>(v(i));
        out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Eigen::VectorXd read_f32(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    const auto bytes = std::filesystem::file_size(path);
    if (bytes % sizeof(float) != 0)
        throw std::runtime_error("truncated float32 file: " + path.string());
    const auto n = static_cast<Eigen::Index>(bytes / sizeof(float));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        float f = 0.0f;
        in.read(reinterpret_cast<char*>(&f), sizeof f);
        v(i) = f;
    }
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return v;
}

void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path, std::ios::out);
    std::ostringstream line;
    line.precision(17);  // exact double round-trip
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        line.str("");
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) line << ',';
            line << m(r, c);
        }
        out << line.str() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged CSV: " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty CSV: " + path.string());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return m;
}

void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& m, double lo, double hi) {
    if (lo >= hi) {
        lo = m.minCoeff();
        hi = m.maxCoeff();
        if (hi <= lo) hi = lo + 1.0;
    }
    auto out = open_out(path, std::ios::binary);
    out << "P5 " << m.cols() << ' ' << m.rows() << " 255\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double x = (m(r, c) - lo) / (hi - lo);
            const int byte = std::clamp(static_cast<int>(std::lround(x * 255.0)), 0, 255);
            out.put(static_cast<char>(byte));
        }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const std::string& json_text) {
    auto out = open_out(path, std::ios::out);
    out << json_text;
    if (!json_text.empty() && json_text.back() != '\n') out << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    auto out = open_out(path, std::ios::out);
    for (const auto& e : entries) {
        json j{{"label", class_name(e.label)},
               {"channel", e.channel},
               {"seed", e.seed},
               {"file", e.file}};
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::in);
    std::vector<ManifestEntry> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        ManifestEntry e;
        e.label = class_from_name(j.at("label").get<std::string>());
        e.channel = j.at("channel").get<int>();
        e.seed = j.at("seed").get<std::uint64_t>();
        e.file = j.at("file").get<std::string>();
        entries.push_back(std::move(e));
    }
    return entries;
}

void save_pca(const std::filesystem::path& path, const PcaModel& model) {
    auto out = open_out(path, std::ios::binary);
    write_header(out, kPca);
    put_u32(out, static_cast<std::uint32_t>(model.input_dim()));
    put_u32(out, static_cast<std::uint32_t>(model.components()));
    put_f64_block(out, model.mean.data(), static_cast<std::size_t>(model.mean.size()));
    put_f64_block(out, model.eigenvalues.data(), static_cast<std::size_t>(model.eigenvalues.size()));
    put_f64_block(out, model.basis.data(), static_cast<std::size_t>(model.basis.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

PcaModel load_pca(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    check_header(in, kPca, path);
    const auto p = static_cast<Eigen::Index>(get_u32(in));
    const auto md = static_cast<Eigen::Index>(get_u32(in));
    PcaModel model;
    model.mean.resize(p);
    model.eigenvalues.resize(md);
    model.basis.resize(p, md);
    get_f64_block(in, model.mean.data(), static_cast<std::size_t>(p));
    get_f64_block(in, model.eigenvalues.data(), static_cast<std::size_t>(md));
    get_f64_block(in, model.basis.data(), static_cast<std::size_t>(p * md));
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return model;
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& dict) {
    auto out = open_out(path, std::ios::binary);
    write_header(out, kDict);
    put_u32(out, static_cast<std::uint32_t>(dict.atom_dim()));
    put_u32(out, static_cast<std::uint32_t>(dict.atom_count()));
    for (MotionClass c : dict.labels) put_u32(out, static_cast<std::uint32_t>(class_index(c)));
    put_f64_block(out, dict.atoms.data(), static_cast<std::size_t>(dict.atoms.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dictionary load_dictionary(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    check_header(in, kDict, path);
    const auto md = static_cast<Eigen::Index>(get_u32(in));
    const auto n = static_cast<Eigen::Index>(get_u32(in));
    Dictionary dict;
    dict.labels.resize(static_cast<std::size_t>(n));
    for (auto& c : dict.labels) c = class_from_index(static_cast<int>(get_u32(in)));
    dict.atoms.resize(md, n);
    get_f64_block(in, dict.atoms.data(), static_cast<std::size_t>(md * n));
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return dict;
}

void save_svm(const std::filesystem::path& path, const SvmModel& model) {
    auto out = open_out(path, std::ios::binary);
    write_header(out, kSvm);
    put_u32(out, static_cast<std::uint32_t>(model.weights.rows()));
    put_u32(out, static_cast<std::uint32_t>(model.weights.cols()));
    put_f64_block(out, model.weights.data(), static_cast<std::size_t>(model.weights.size()));
    put_f64_block(out, model.bias.data(), static_cast<std::size_t>(model.bias.size()));
    put_f64_block(out, &model.lambda, 1);
    put_u32(out, static_cast<std::uint32_t>(model.epochs));
    put_u32(out, static_cast<std::uint32_t>(model.seed));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

SvmModel load_svm(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    check_header(in, kSvm, path);
    const auto dim = static_cast<Eigen::Index>(get_u32(in));
    const auto classes = static_cast<Eigen::Index>(get_u32(in));
    SvmModel model;
    model.weights.resize(dim, classes);
    model.bias.resize(classes);
    get_f64_block(in, model.weights.data(), static_cast<std::size_t>(dim * classes));
    get_f64_block(in, model.bias.data(), static_cast<std::size_t>(classes));
    get_f64_block(in, &model.lambda, 1);
    model.epochs = static_cast<int>(get_u32(in));
    model.seed = get_u32(in);
    if (!in) throw std::runtime_error("read failed: " + path.string());
    return model;
}

}  // namespace wimd
