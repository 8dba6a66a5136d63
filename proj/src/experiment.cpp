#include "wimd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "wimd/align.hpp"
#include "wimd/io.hpp"

namespace wimd {

CafConfig ExperimentConfig::effective_caf() const {
    CafConfig c = caf;
    c.sample_rate_hz = sim_sample_rate_hz;
    return c;
}

void ExperimentConfig::validate() const {
    for (int count : per_class_counts)
        if (count < 2) throw std::invalid_argument("ExperimentConfig: counts must be >= 2");
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("ExperimentConfig: train_fraction must be in (0, 1)");
    if (channels.empty()) throw std::invalid_argument("ExperimentConfig: no channels");
    for (int ch : channels)
        if (ch != 1 && ch != 2) throw std::invalid_argument("ExperimentConfig: channel must be 1 or 2");
    if (recording_s + 1e-9 < kMotionProfileDurationS)
        throw std::invalid_argument("ExperimentConfig: recording shorter than the motion profile");
    if (sparsity_k < 1) throw std::invalid_argument("ExperimentConfig: sparsity_k must be >= 1");
    effective_caf().validate();
}

namespace {

struct SampleTask {
    MotionClass label;
    std::uint64_t seed;
};

std::optional<Eigen::VectorXd> synthesize_signature(const ExperimentConfig& cfg, int channel,
                                                    const SampleTask& task) {
    const MotionProfile profile = motion_profile(task.label, task.seed, channel);
    const IqWaveform waveform =
        gen_wifi_baseband(cfg.recording_s, cfg.sim_sample_rate_hz, mix_seed(task.seed, 0x11));
    SceneConfig scene = cfg.scene;
    scene.rng_seed = mix_seed(task.seed, 0x22);

    const ChannelPair pair = simulate_channels(waveform, profile, scene);
    const DopplerSpectrogram spec =
        spectrogram(pair, cfg.effective_caf(), cfg.delay_selector, cfg.fixed_delay_bin);
    try {
        return align_signature(spec).d;
    } catch (const NoMotionError&) {
        return std::nullopt;
    }
}

}  // namespace

SignatureDataset build_dataset(const ExperimentConfig& cfg, int channel) {
    cfg.validate();

    std::vector<SampleTask> tasks;
    for (MotionClass c : all_classes()) {
        const int count = cfg.per_class_counts[static_cast<std::size_t>(class_index(c))];
        for (int j = 0; j < count; ++j) {
            const std::uint64_t seed =
                mix_seed(cfg.rng_seed, (static_cast<std::uint64_t>(channel) << 32) |
                                           (static_cast<std::uint64_t>(class_index(c)) << 16) |
                                           static_cast<std::uint64_t>(j));
            tasks.push_back({c, seed});
        }
    }

    std::vector<std::optional<Eigen::VectorXd>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
                results[i] = synthesize_signature(cfg, channel, tasks[i]);
        });
    }
    for (auto& t : workers) t.join();

    SignatureDataset ds;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (results[i])
            ds.add(std::move(*results[i]), tasks[i].label, channel);
        else {
            ++failures;
            std::fprintf(stderr, "build_dataset: no motion detected (label %s, seed %llu)\n",
                         class_name(tasks[i].label).c_str(),
                         static_cast<unsigned long long>(tasks[i].seed));
        }
    }
    if (failures * 20 >= tasks.size())
        throw std::runtime_error("build_dataset: detection failed for >= 5% of samples");
    return ds;
}

std::pair<SignatureDataset, SignatureDataset> split_dataset(const SignatureDataset& ds,
                                                            double train_fraction,
                                                            std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split_dataset: fraction must be in (0, 1)");

    SignatureDataset train, test;
    for (MotionClass c : all_classes()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ds.labels.size(); ++i)
            if (ds.labels[i] == c) idx.push_back(i);
        if (idx.empty()) continue;
        if (idx.size() < 2)
            throw std::invalid_argument("split_dataset: class " + class_name(c) +
                                        " has fewer than 2 samples");

        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(class_index(c))));
        std::shuffle(idx.begin(), idx.end(), rng);

        const auto count = static_cast<long long>(idx.size());
        const long long n_train =
            std::clamp(std::llround(static_cast<double>(count) * train_fraction), 1LL, count - 1);
        for (long long j = 0; j < count; ++j) {
            auto& target = j < n_train ? train : test;
            target.add(ds.samples[idx[static_cast<std::size_t>(j)]], c,
                       ds.channels[idx[static_cast<std::size_t>(j)]]);
        }
    }
    return {std::move(train), std::move(test)};
}

namespace {

ClassificationReport make_report(const std::string& classifier, int channel, std::uint64_t seed,
                                 const std::vector<MotionClass>& truth,
                                 const std::vector<MotionClass>& predicted) {
    ClassificationReport rep;
    rep.classifier = classifier;
    rep.channel = channel;
    rep.seed = seed;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(kNumClasses, kNumClasses);
    for (std::size_t i = 0; i < truth.size(); ++i)
        counts(class_index(truth[i]), class_index(predicted[i])) += 1.0;

    rep.confusion = Eigen::MatrixXd::Zero(kNumClasses, kNumClasses);
    double acc_sum = 0.0;
    for (int r = 0; r < kNumClasses; ++r) {
        const double row = counts.row(r).sum();
        if (row > 0.0) rep.confusion.row(r) = counts.row(r) / row;
        rep.per_class_accuracy[static_cast<std::size_t>(r)] = rep.confusion(r, r);
        acc_sum += rep.confusion(r, r);
    }
    rep.average = acc_sum / kNumClasses;
    return rep;
}

}  // namespace

std::vector<ClassificationReport> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ClassificationReport> reports;

    for (int channel : cfg.channels) {
        const SignatureDataset ds = build_dataset(cfg, channel);
        auto [train, test] =
            split_dataset(ds, cfg.train_fraction, mix_seed(cfg.rng_seed, 1000 + channel));

        const PcaModel pca = cfg.pca_components > 0
                                 ? fit_pca(train, cfg.pca_components)
                                 : fit_pca_auto(train, cfg.pca_var_fraction, cfg.pca_max_components);
        const SignatureDataset train_red = project_dataset(pca, train);
        const SignatureDataset test_red = project_dataset(pca, test);

        const Dictionary dict = Dictionary::build(train_red);
        const int k = std::min(cfg.sparsity_k, std::min(dict.atom_dim(), dict.atom_count()));

        std::vector<MotionClass> src_pred, svm_pred;
        src_pred.reserve(test_red.samples.size());
        for (const auto& y : test_red.samples) src_pred.push_back(src_classify(dict, y, k).label);

        const SvmModel svm = train_linear_svm(train_red, cfg.svm_lambda, cfg.svm_epochs, cfg.svm_seed);
        svm_pred.reserve(test_red.samples.size());
        for (const auto& y : test_red.samples) svm_pred.push_back(svm_classify(svm, y));

        reports.push_back(make_report("SRC", channel, cfg.rng_seed, test_red.labels, src_pred));
        reports.push_back(make_report("SVM", channel, cfg.rng_seed, test_red.labels, svm_pred));

        if (!cfg.out_dir.empty()) {
            const std::filesystem::path dir(cfg.out_dir);
            std::filesystem::create_directories(dir);
            const std::string suffix = "_ch" + std::to_string(channel);
            save_pca(dir / ("pca" + suffix + ".bin"), pca);
            save_dictionary(dir / ("dictionary" + suffix + ".bin"), dict);
            save_svm(dir / ("svm" + suffix + ".bin"), svm);
        }
    }

    if (!cfg.out_dir.empty()) {
        const std::filesystem::path dir(cfg.out_dir);
        std::filesystem::create_directories(dir);
        std::ofstream tables(dir / "tables.txt");
        tables << format_report_table(reports);
        std::ofstream csv(dir / "report.csv");
        csv << report_csv(reports);
        for (const auto& rep : reports) {
            std::ofstream conf(dir / ("confusion_" + rep.classifier + "_ch" +
                                      std::to_string(rep.channel) + ".csv"));
            conf << confusion_csv(rep);
        }
    }
    return reports;
}

std::string format_report_table(const std::vector<ClassificationReport>& reports) {
    std::string out;
    char buf[64];
    std::vector<int> channels;
    for (const auto& r : reports)
        if (std::find(channels.begin(), channels.end(), r.channel) == channels.end())
            channels.push_back(r.channel);

    for (int ch : channels) {
        std::snprintf(buf, sizeof buf, "Ch.%d", ch);
        out += buf;
        for (MotionClass c : all_classes()) out += "\t" + class_name(c);
        out += "\tAVG\n";
        for (const auto& r : reports) {
            if (r.channel != ch) continue;
            out += r.classifier;
            for (double a : r.per_class_accuracy) {
                std::snprintf(buf, sizeof buf, "\t%.1f%%", 100.0 * a);
                out += buf;
            }
            std::snprintf(buf, sizeof buf, "\t%.1f%%\n", 100.0 * r.average);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string report_csv(const std::vector<ClassificationReport>& reports) {
    std::string out = "channel,classifier,M1,M2,M3,M4,M5,M6,average\n";
    char buf[64];
    for (const auto& r : reports) {
        out += std::to_string(r.channel) + "," + r.classifier;
        for (double a : r.per_class_accuracy) {
            std::snprintf(buf, sizeof buf, ",%.6f", a);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.6f\n", r.average);
        out += buf;
    }
    return out;
}

std::string confusion_csv(const ClassificationReport& report) {
    std::string out;
    char buf[64];
    for (int r = 0; r < kNumClasses; ++r) {
        for (int c = 0; c < kNumClasses; ++c) {
            std::snprintf(buf, sizeof buf, c ? ",%.6f" : "%.6f", report.confusion(r, c));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace wimd
