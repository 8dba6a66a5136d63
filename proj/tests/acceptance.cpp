// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria marked with their fixed tolerances; nothing is deferred
// to runtime calibration.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "wimd/align.hpp"
#include "wimd/experiment.hpp"
#include "wimd/io.hpp"

using namespace wimd;

namespace {

int g_failures = 0;

void criterion(int number, const char* name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %2d  %-28s  %.1fs%s%s\n", ok ? "PASS" : "FAIL", number, name,
                seconds, detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

ExperimentConfig benchmark_config() {
    return ExperimentConfig{};  // Table-1 counts, 40% stratified split, fixed seeds
}

bool caf_oracle_equivalence(std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> batch_pick(0, 2);
    std::uniform_int_distribution<int> len_pick(30, 140);
    std::uniform_int_distribution<int> start_pick(0, 20);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        CafConfig cfg;
        cfg.batch_count = std::array{10, 20, 25}[batch_pick(rng)];
        cfg.sample_rate_hz = 4000.0;
        cfg.integration_s = cfg.batch_count * len_pick(rng) / cfg.sample_rate_hz;
        cfg.hop_s = cfg.integration_s;
        cfg.delay_bins = 12;

        const std::size_t start = static_cast<std::size_t>(start_pick(rng));
        const std::size_t len = cfg.window_samples() + start;
        if (len > 4096) continue;

        ChannelPair pair;
        pair.reference =
            gen_wifi_baseband(static_cast<double>(len) / cfg.sample_rate_hz, cfg.sample_rate_hz,
                              10'000 + static_cast<std::uint64_t>(trial));
        pair.surveillance =
            gen_wifi_baseband(static_cast<double>(len) / cfg.sample_rate_hz, cfg.sample_rate_hz,
                              20'000 + static_cast<std::uint64_t>(trial));
        pair.reference.samples.resize(len);
        pair.surveillance.samples.resize(len);

        const CafSurface surf = caf_batched(pair, start, cfg);
        const Eigen::MatrixXcd ref = testing::caf_reference(pair, start, cfg);
        worst = std::max(worst, (surf.values - ref).norm() / ref.norm());
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max relative error %.2e", worst);
    detail = buf;
    return worst < 1e-9;
}

bool doppler_localization(std::string& detail) {
    const CafConfig cfg;  // §IV.A defaults: 2 MHz, 0.4 s, 20 batches, 51 bins
    const auto axis = doppler_axis_hz(cfg.zero_pad_to, cfg.prf_hz());
    if (axis.size() != 51 || axis[25] != 0.0) {
        detail = "bad frequency axis";
        return false;
    }
    const double spacing = cfg.bin_spacing_hz();
    // 51 bins tile the unambiguous +-PRF/2 = +-25 Hz span.
    if (std::abs(axis.front() + 25.0 * spacing) > 1e-9 ||
        cfg.prf_hz() / 2.0 - axis.back() >= spacing) {
        detail = "axis does not span +-25 Hz";
        return false;
    }

    double worst = 0.0;
    for (double f0 : {-20.0, -10.0, -3.0, 3.0, 10.0, 20.0}) {
        const double duration = 0.45;
        const IqWaveform wf = gen_wifi_baseband(duration, cfg.sample_rate_hz,
                                                static_cast<std::uint64_t>(900 + f0));
        SceneConfig scene;
        scene.rng_seed = static_cast<std::uint64_t>(1700 + 2 * f0 + 40);
        scene.noise_power = 0.1;  // echo SNR 10 dB
        const MotionProfile profile =
            testing::constant_velocity_profile(f0, scene.carrier_hz, duration);
        const ChannelPair pair = simulate_channels(wf, profile, scene);

        const CafSurface surf = caf_batched(pair, 16, cfg);
        const Eigen::VectorXd slice =
            doppler_slice(surf, static_cast<int>(scene.echo_delay_samples));
        Eigen::Index peak = 0;
        slice.maxCoeff(&peak);
        worst = std::max(worst, std::abs(axis[static_cast<std::size_t>(peak)] - f0));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |peak - f0| = %.3f Hz", worst);
    detail = buf;
    return worst <= 1.0;
}

bool weighted_stats_hand_case(std::string& detail) {
    Eigen::VectorXd x(3), w(3);
    x << 0, 0, 1;
    w << 1, 4, 9;
    const double mean = weighted_mean(x, w);
    const double sd = weighted_std(x, w);
    const bool ok = std::abs(mean - 3.0) < 1e-12 && std::abs(sd - std::sqrt(477.0 / 14.0)) < 1e-12;
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean %.15g, std %.15g", mean, sd);
    detail = buf;
    return ok;
}

bool detection_accuracy(std::string& detail) {
    const Eigen::VectorXd weights = dc_distance_weights(51);
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> start_pick(8, 40);
    std::uniform_int_distribution<int> len_pick(10, 30);
    int hits = 0;
    for (int i = 0; i < 100; ++i) {
        const int s = start_pick(rng);
        const int e = s + len_pick(rng);
        // Noise floor at -20 dB (amplitude 0.1) relative to the unit signature.
        const DopplerSpectrogram spec =
            testing::synthetic_spectrogram(51, 80, s, e, 0.1, 5000 + static_cast<std::uint64_t>(i));
        std::vector<double> trace(80);
        for (int t = 0; t < 80; ++t) trace[static_cast<std::size_t>(t)] = weighted_std(spec.values.col(t), weights);
        try {
            const DetectionBounds b = detect_bounds(spec, default_detection_threshold(trace), weights);
            if (std::abs(b.start_bin - s) <= 2 && std::abs(b.end_bin - e) <= 2) ++hits;
        } catch (const NoMotionError&) {
        }
    }
    detail = std::to_string(hits) + "/100 within +-2 bins";
    return hits >= 95;
}

bool alignment_chain(std::string& detail) {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> start_pick(6, 30);
    std::uniform_int_distribution<int> len_pick(8, 35);
    for (int i = 0; i < 40; ++i) {
        const int s = start_pick(rng);
        const DopplerSpectrogram spec = testing::synthetic_spectrogram(
            51, 75, s, s + len_pick(rng), 0.1, 9000 + static_cast<std::uint64_t>(i));
        const AlignedSignature sig = align_signature(spec);
        if (sig.x_inter.rows() != 51 || sig.x_inter.cols() != 50) {
            detail = "wrong shape";
            return false;
        }
        if (sig.x_inter.minCoeff() < 0.0 || sig.x_inter.maxCoeff() > 1.0) {
            detail = "values escape [0,1]";
            return false;
        }
        if (sig.d.size() != 2550) {
            detail = "wrong vector length";
            return false;
        }
        if ((unvectorize(sig.d) - sig.x_inter).cwiseAbs().maxCoeff() != 0.0) {
            detail = "vec mismatch";
            return false;
        }
    }

    // 50-column identity resample.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd m(51, 50);
    for (int r = 0; r < 51; ++r)
        for (int c = 0; c < 50; ++c) m(r, c) = u(rng);
    const double err = (bicubic_resize_time(m, 50) - m).cwiseAbs().maxCoeff();
    char buf[64];
    std::snprintf(buf, sizeof buf, "identity resample error %.2e", err);
    detail = buf;
    return err < 1e-9;
}

bool sp_oracle(std::string& detail) {
    int agree = 0;
    bool monotone = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::mt19937_64 rng(40'000 + static_cast<std::uint64_t>(trial));
        std::normal_distribution<double> g(0.0, 1.0);
        SignatureDataset ds;
        for (int i = 0; i < 12; ++i) {
            Eigen::VectorXd a(8);
            for (int j = 0; j < 8; ++j) a(j) = g(rng);
            ds.add(a, class_from_index(i % kNumClasses), 1);
        }
        const Dictionary dict = Dictionary::build(ds);

        std::uniform_int_distribution<int> pick(0, 11);
        std::uniform_real_distribution<double> amp(0.5, 1.5);
        const int i = pick(rng);
        int j = pick(rng);
        while (j == i) j = pick(rng);
        const Eigen::VectorXd y = amp(rng) * dict.atoms.col(i) + amp(rng) * dict.atoms.col(j);

        std::vector<double> trace;
        const SparseCode code = subspace_pursuit(dict, y, 2, &trace);
        for (std::size_t t = 1; t < trace.size(); ++t)
            if (trace[t] > trace[t - 1] + 1e-12) monotone = false;

        const auto oracle = testing::exhaustive_sparse_fit(dict.atoms, y, 2);
        if (code.support == oracle.support) ++agree;
    }
    detail = std::to_string(agree) + "/50 supports match exhaustive search";
    return agree >= 48 && monotone;
}

bool pca_properties(std::string& detail) {
    std::mt19937_64 rng(555);
    std::normal_distribution<double> g(0.0, 1.0);
    const int p = 2550, n = 68;
    SignatureDataset ds;
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v(p);
        for (int j = 0; j < p; ++j) v(j) = g(rng) * (1.0 + std::exp(-j / 300.0));
        ds.add(v, class_from_index(i % kNumClasses), 1);
    }
    const int md = 60;
    const PcaModel model = fit_pca(ds, md);

    const double orth = (model.basis.transpose() * model.basis -
                         Eigen::MatrixXd::Identity(md, md))
                            .cwiseAbs()
                            .maxCoeff();
    if (orth >= 1e-8) {
        detail = "basis not orthonormal";
        return false;
    }
    for (int k = 1; k < md; ++k)
        if (model.eigenvalues(k) > model.eigenvalues(k - 1) || model.eigenvalues(k) < 0.0) {
            detail = "eigenvalues not descending/nonnegative";
            return false;
        }

    double prev = std::numeric_limits<double>::infinity();
    for (int k : {5, 15, 30, 60}) {
        const PcaModel mk = fit_pca(ds, k);
        double err = 0.0;
        for (const auto& v : ds.samples) {
            const Eigen::VectorXd c = v - mk.mean;
            err += (c - mk.basis * (mk.basis.transpose() * c)).squaredNorm();
        }
        if (err > prev + 1e-9) {
            detail = "reconstruction error not monotone";
            return false;
        }
        prev = err;
    }

    double worst_rel = 0.0;
    Eigen::MatrixXd z(md, n);
    for (int i = 0; i < n; ++i) z.col(i) = project(model, ds.samples[static_cast<std::size_t>(i)]);
    for (int k = 0; k < md; ++k) {
        const double var = z.row(k).squaredNorm() / (n - 1);
        worst_rel = std::max(worst_rel,
                             std::abs(var - model.eigenvalues(k)) / model.eigenvalues(k));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "orth %.1e, var agreement %.1e", orth, worst_rel);
    detail = buf;
    return worst_rel < 1e-6;
}

bool qualitative_replication(std::string& detail) {
    const ExperimentConfig cfg = benchmark_config();
    const auto reports = run_experiment(cfg);
    double src1 = 0, svm1 = 0, src2 = 0, svm2 = 0;
    for (const auto& r : reports) {
        if (r.classifier == "SRC" && r.channel == 1) src1 = r.average;
        if (r.classifier == "SVM" && r.channel == 1) svm1 = r.average;
        if (r.classifier == "SRC" && r.channel == 2) src2 = r.average;
        if (r.classifier == "SVM" && r.channel == 2) svm2 = r.average;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "SRC %.1f%%/%.1f%% vs SVM %.1f%%/%.1f%% (ch1/ch2)",
                  100 * src1, 100 * src2, 100 * svm1, 100 * svm2);
    detail = buf;
    return src1 >= 0.85 && src2 >= 0.85 && src1 > svm1 && src2 > svm2;
}

bool noise_monotonicity(std::string& detail) {
    ExperimentConfig cfg = benchmark_config();
    cfg.channels = {1};
    std::vector<double> accuracies;
    for (double level : cfg.noise_levels) {
        ExperimentConfig c = cfg;
        c.scene.noise_power = level;
        const auto reports = run_experiment(c);
        for (const auto& r : reports)
            if (r.classifier == "SRC") accuracies.push_back(r.average);
    }
    char buf[128];
    std::string seq;
    for (double a : accuracies) {
        std::snprintf(buf, sizeof buf, "%s%.1f%%", seq.empty() ? "" : " >= ", 100 * a);
        seq += buf;
    }
    detail = seq;
    for (std::size_t i = 1; i < accuracies.size(); ++i)
        if (accuracies[i] > accuracies[i - 1] + 1e-12) return false;
    return accuracies.size() == cfg.noise_levels.size();
}

bool determinism(std::string& detail) {
    const ExperimentConfig cfg = benchmark_config();
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    const bool same_report = report_csv(a) == report_csv(b);
    bool same_confusion = a.size() == b.size();
    for (std::size_t i = 0; same_confusion && i < a.size(); ++i)
        same_confusion = confusion_csv(a[i]) == confusion_csv(b[i]);
    detail = same_report && same_confusion ? "report and confusion CSVs byte-identical"
                                           : "CSV mismatch between runs";
    return same_report && same_confusion;
}

}  // namespace

int main() {
    std::printf("acceptance suite\n----------------\n");
    criterion(1, "CAF oracle equivalence", caf_oracle_equivalence);
    criterion(2, "Doppler localization", doppler_localization);
    criterion(3, "weighted stats hand case", weighted_stats_hand_case);
    criterion(4, "detection accuracy", detection_accuracy);
    criterion(5, "alignment chain geometry", alignment_chain);
    criterion(6, "subspace pursuit oracle", sp_oracle);
    criterion(7, "PCA properties", pca_properties);
    criterion(8, "qualitative replication", qualitative_replication);
    criterion(9, "noise monotonicity", noise_monotonicity);
    criterion(10, "determinism", determinism);

    if (g_failures) {
        std::printf("----------------\n%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("----------------\nall criteria passed\n");
    return 0;
}
