// Command-line front end: simulate recordings, extract spectrograms, align
// signatures, build datasets, train models and run the full evaluation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "wimd/align.hpp"
#include "wimd/experiment.hpp"
#include "wimd/io.hpp"

using namespace wimd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    if (j.contains("per_class_counts")) {
        const auto counts = j.at("per_class_counts").get<std::vector<int>>();
        if (counts.size() != kNumClasses)
            throw std::invalid_argument("config: per_class_counts must have 6 entries");
        std::copy(counts.begin(), counts.end(), cfg.per_class_counts.begin());
    }
    cfg.train_fraction = j.value("train_fraction", cfg.train_fraction);
    if (j.contains("channels")) cfg.channels = j.at("channels").get<std::vector<int>>();
    if (j.contains("noise_levels"))
        cfg.noise_levels = j.at("noise_levels").get<std::vector<double>>();
    cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
    cfg.sim_sample_rate_hz = j.value("sim_sample_rate_hz", cfg.sim_sample_rate_hz);
    cfg.recording_s = j.value("recording_s", cfg.recording_s);

    if (j.contains("scene")) {
        const auto& s = j.at("scene");
        cfg.scene.carrier_hz = s.value("carrier_hz", cfg.scene.carrier_hz);
        cfg.scene.dsi_power = s.value("dsi_power", cfg.scene.dsi_power);
        cfg.scene.echo_power = s.value("echo_power", cfg.scene.echo_power);
        cfg.scene.noise_power = s.value("noise_power", cfg.scene.noise_power);
        cfg.scene.echo_delay_samples = s.value("echo_delay_samples", cfg.scene.echo_delay_samples);
    }
    if (j.contains("caf")) {
        const auto& c = j.at("caf");
        cfg.caf.sample_rate_hz = c.value("sample_rate_hz", cfg.caf.sample_rate_hz);
        cfg.caf.integration_s = c.value("integration_s", cfg.caf.integration_s);
        cfg.caf.hop_s = c.value("hop_s", cfg.caf.hop_s);
        cfg.caf.batch_count = c.value("batch_count", cfg.caf.batch_count);
        cfg.caf.zero_pad_to = c.value("zero_pad_to", cfg.caf.zero_pad_to);
        cfg.caf.delay_bins = c.value("delay_bins", cfg.caf.delay_bins);
    }
    const std::string selector = j.value("delay_selector", std::string("argmax"));
    if (selector == "argmax")
        cfg.delay_selector = DelaySelect::Argmax;
    else if (selector == "fixed")
        cfg.delay_selector = DelaySelect::Fixed;
    else
        throw std::invalid_argument("config: delay_selector must be argmax or fixed");
    cfg.fixed_delay_bin = j.value("fixed_delay_bin", cfg.fixed_delay_bin);

    cfg.sparsity_k = j.value("sparsity_k", cfg.sparsity_k);
    cfg.pca_components = j.value("pca_components", cfg.pca_components);
    cfg.pca_var_fraction = j.value("pca_var_fraction", cfg.pca_var_fraction);
    cfg.pca_max_components = j.value("pca_max_components", cfg.pca_max_components);
    cfg.svm_lambda = j.value("svm_lambda", cfg.svm_lambda);
    cfg.svm_epochs = j.value("svm_epochs", cfg.svm_epochs);
    cfg.svm_seed = j.value("svm_seed", cfg.svm_seed);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

std::string sidecar_json(const ExperimentConfig& cfg, MotionClass label, int channel,
                         std::uint64_t seed) {
    json j{{"sample_rate_hz", cfg.sim_sample_rate_hz},
           {"carrier_hz", cfg.scene.carrier_hz},
           {"label", class_name(label)},
           {"channel", channel},
           {"seed", seed}};
    return j.dump(2);
}

DopplerSpectrogram spectrogram_from_files(const ExperimentConfig& cfg, const std::string& ref_path,
                                          const std::string& sur_path, int channel) {
    ChannelPair pair;
    pair.reference = read_iq(ref_path, cfg.sim_sample_rate_hz);
    pair.surveillance = read_iq(sur_path, cfg.sim_sample_rate_hz);
    DopplerSpectrogram spec =
        spectrogram(pair, cfg.effective_caf(), cfg.delay_selector, cfg.fixed_delay_bin);
    spec.source_channel = "ch" + std::to_string(channel);
    return spec;
}

int run(int argc, char** argv) {
    CLI::App app{"passive Wi-Fi micro-Doppler activity recognition pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_dir_override;
    std::optional<int> channel_override;
    app.add_option("--config", config_path, "JSON config mirroring the experiment settings");
    app.add_option("--seed", seed_override, "override the experiment seed");
    app.add_option("--out-dir", out_dir_override, "override the output directory");
    app.add_option("--channel", channel_override, "restrict to one channel (1 or 2)")
        ->check(CLI::Range(1, 2));

    auto effective_config = [&]() {
        ExperimentConfig cfg = load_config(config_path);
        if (seed_override) cfg.rng_seed = *seed_override;
        if (out_dir_override) cfg.out_dir = *out_dir_override;
        if (channel_override) cfg.channels = {*channel_override};
        if (cfg.out_dir.empty()) cfg.out_dir = "out";
        return cfg;
    };

    // simulate: one labeled recording -> raw IQ pair + sidecar metadata.
    auto* simulate_cmd = app.add_subcommand("simulate", "simulate one channel pair");
    std::string sim_label = "M1";
    std::string sim_prefix = "sim";
    simulate_cmd->add_option("--label", sim_label, "motion class M1..M6");
    simulate_cmd->add_option("--prefix", sim_prefix, "output file prefix");
    simulate_cmd->callback([&] {
        const ExperimentConfig cfg = effective_config();
        const MotionClass label = class_from_name(sim_label);
        const int channel = cfg.channels.front();
        const MotionProfile profile = motion_profile(label, cfg.rng_seed, channel);
        const IqWaveform wf = gen_wifi_baseband(cfg.recording_s, cfg.sim_sample_rate_hz,
                                                mix_seed(cfg.rng_seed, 0x11));
        SceneConfig scene = cfg.scene;
        scene.rng_seed = mix_seed(cfg.rng_seed, 0x22);
        const ChannelPair pair = simulate_channels(wf, profile, scene);

        const fs::path dir(cfg.out_dir);
        write_iq(dir / (sim_prefix + "_ref.iq"), pair.reference);
        write_iq(dir / (sim_prefix + "_sur.iq"), pair.surveillance);
        write_json(dir / (sim_prefix + "_meta.json"),
                   sidecar_json(cfg, label, channel, cfg.rng_seed));
        std::printf("wrote %s_{ref,sur}.iq + %s_meta.json under %s\n", sim_prefix.c_str(),
                    sim_prefix.c_str(), cfg.out_dir.c_str());
    });

    // extract: IQ pair -> spectrogram CSV (+ optional PGM).
    auto* extract_cmd = app.add_subcommand("extract", "compute the m-D spectrogram of an IQ pair");
    std::string ref_path, sur_path, extract_out = "spectrogram.csv", extract_pgm;
    extract_cmd->add_option("--ref", ref_path, "reference IQ file")->required();
    extract_cmd->add_option("--sur", sur_path, "surveillance IQ file")->required();
    extract_cmd->add_option("--output", extract_out, "output CSV path");
    extract_cmd->add_option("--pgm", extract_pgm, "also write an 8-bit PGM image");
    extract_cmd->callback([&] {
        const ExperimentConfig cfg = effective_config();
        const DopplerSpectrogram spec =
            spectrogram_from_files(cfg, ref_path, sur_path, cfg.channels.front());
        write_csv_matrix(extract_out, spec.values);
        json meta{{"hop_s", spec.hop_s},
                  {"freq_bins", spec.freq_bins()},
                  {"time_bins", spec.time_bins()},
                  {"prf_hz", cfg.effective_caf().prf_hz()},
                  {"channel", spec.source_channel}};
        write_json(fs::path(extract_out).replace_extension(".json"), meta.dump(2));
        if (!extract_pgm.empty()) write_pgm(extract_pgm, spec.values, 0.0, 0.0);
        std::printf("spectrogram %dx%d -> %s\n", spec.freq_bins(), spec.time_bins(),
                    extract_out.c_str());
    });

    // align: spectrogram CSV -> 2550-float signature blob.
    auto* align_cmd = app.add_subcommand("align", "detect, crop and normalize one spectrogram");
    std::string align_in, align_out = "signature.f32", align_csv;
    double align_threshold = 0.0;
    align_cmd->add_option("--input", align_in, "spectrogram CSV")->required();
    align_cmd->add_option("--output", align_out, "signature blob path");
    align_cmd->add_option("--csv", align_csv, "also export the 51x50 matrix as CSV");
    align_cmd->add_option("--threshold", align_threshold,
                          "detection threshold (default: per-recording robust estimate)");
    align_cmd->callback([&] {
        DopplerSpectrogram spec;
        spec.values = read_csv_matrix(align_in);
        spec.freq_axis_hz = doppler_axis_hz(spec.freq_bins(), 50.0);
        spec.hop_s = 0.04;
        const AlignedSignature sig = align_signature(spec, align_threshold);
        write_f32(align_out, sig.d);
        if (!align_csv.empty()) write_csv_matrix(align_csv, sig.x_inter);
        std::printf("aligned signature -> %s\n", align_out.c_str());
    });

    // dataset: synthesize the full labeled dataset + manifest.
    auto* dataset_cmd = app.add_subcommand("dataset", "synthesize the labeled signature dataset");
    dataset_cmd->callback([&] {
        const ExperimentConfig cfg = effective_config();
        const fs::path dir = fs::path(cfg.out_dir) / "signatures";
        std::vector<ManifestEntry> manifest;
        for (int channel : cfg.channels) {
            const SignatureDataset ds = build_dataset(cfg, channel);
            for (int i = 0; i < ds.size(); ++i) {
                const auto idx = static_cast<std::size_t>(i);
                char name[64];
                std::snprintf(name, sizeof name, "sig_ch%d_%04d.f32", channel, i);
                write_f32(dir / name, ds.samples[idx]);
                manifest.push_back({ds.labels[idx], channel, cfg.rng_seed, name});
            }
        }
        write_manifest(fs::path(cfg.out_dir) / "manifest.ndjson", manifest);
        std::printf("%zu signatures + manifest.ndjson under %s\n", manifest.size(),
                    cfg.out_dir.c_str());
    });

    // train: dataset manifest -> PCA + dictionary + SVM model files.
    auto* train_cmd = app.add_subcommand("train", "fit models from a dataset manifest");
    std::string manifest_path;
    train_cmd->add_option("--manifest", manifest_path, "manifest.ndjson path")->required();
    train_cmd->callback([&] {
        const ExperimentConfig cfg = effective_config();
        const fs::path base = fs::path(manifest_path).parent_path() / "signatures";
        const auto entries = read_manifest(manifest_path);
        for (int channel : cfg.channels) {
            SignatureDataset ds;
            for (const auto& e : entries)
                if (e.channel == channel) ds.add(read_f32(base / e.file), e.label, e.channel);
            if (ds.size() == 0) continue;
            auto [train, test] =
                split_dataset(ds, cfg.train_fraction, mix_seed(cfg.rng_seed, 1000 + channel));
            const PcaModel pca =
                cfg.pca_components > 0
                    ? fit_pca(train, cfg.pca_components)
                    : fit_pca_auto(train, cfg.pca_var_fraction, cfg.pca_max_components);
            const SignatureDataset train_red = project_dataset(pca, train);
            const Dictionary dict = Dictionary::build(train_red);
            const SvmModel svm =
                train_linear_svm(train_red, cfg.svm_lambda, cfg.svm_epochs, cfg.svm_seed);

            const fs::path dir(cfg.out_dir);
            const std::string suffix = "_ch" + std::to_string(channel) + ".bin";
            save_pca(dir / ("pca" + suffix), pca);
            save_dictionary(dir / ("dictionary" + suffix), dict);
            save_svm(dir / ("svm" + suffix), svm);
            std::printf("channel %d: %d train samples, %d components -> models under %s\n",
                        channel, train.size(), pca.components(), cfg.out_dir.c_str());
        }
    });

    // evaluate: the full experiment protocol with reports.
    auto* eval_cmd = app.add_subcommand("evaluate", "run the full experiment and write reports");
    eval_cmd->callback([&] {
        const ExperimentConfig cfg = effective_config();
        const auto reports = run_experiment(cfg);
        std::cout << format_report_table(reports);
        std::printf("reports written under %s\n", cfg.out_dir.c_str());
    });

    // export: signature blob or matrix CSV -> CSV/PGM.
    auto* export_cmd = app.add_subcommand("export", "convert signatures/spectrograms");
    std::string export_in, export_fmt = "pgm", export_out;
    export_cmd->add_option("--input", export_in, "signature .f32 or matrix .csv")->required();
    export_cmd->add_option("--format", export_fmt, "csv or pgm")
        ->check(CLI::IsMember({"csv", "pgm"}));
    export_cmd->add_option("--output", export_out, "output path")->required();
    export_cmd->callback([&] {
        Eigen::MatrixXd m;
        if (fs::path(export_in).extension() == ".f32")
            m = unvectorize(read_f32(export_in));
        else
            m = read_csv_matrix(export_in);
        if (export_fmt == "csv")
            write_csv_matrix(export_out, m);
        else
            write_pgm(export_out, m, 0.0, 0.0);
        std::printf("%s -> %s\n", export_in.c_str(), export_out.c_str());
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
