#include "wimd/caf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wimd {

std::size_t CafConfig::window_samples() const {
    return static_cast<std::size_t>(std::llround(integration_s * sample_rate_hz));
}

std::size_t CafConfig::batch_samples() const { return window_samples() / batch_count; }

std::size_t CafConfig::hop_samples() const {
    return static_cast<std::size_t>(std::llround(hop_s * sample_rate_hz));
}

void CafConfig::validate() const {
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("CafConfig: sample rate must be > 0");
    if (integration_s <= 0.0) throw std::invalid_argument("CafConfig: integration must be > 0");
    if (hop_s <= 0.0 || hop_s > integration_s)
        throw std::invalid_argument("CafConfig: hop must be in (0, integration]");
    if (batch_count < 1) throw std::invalid_argument("CafConfig: batch count must be >= 1");
    if (window_samples() % static_cast<std::size_t>(batch_count) != 0)
        throw std::invalid_argument("CafConfig: batch count must divide the window length");
    if (zero_pad_to < batch_count)
        throw std::invalid_argument("CafConfig: zero_pad_to must be >= batch_count");
    if (zero_pad_to % 2 == 0)
        throw std::invalid_argument("CafConfig: zero_pad_to must be odd (exact DC bin)");
    if (delay_bins < 1) throw std::invalid_argument("CafConfig: delay_bins must be >= 1");
    if (hop_samples() == 0) throw std::invalid_argument("CafConfig: hop shorter than one sample");
}

std::vector<double> doppler_axis_hz(int n_bins, double prf_hz) {
    std::vector<double> axis(n_bins);
    const int center = n_bins / 2;
    for (int m = 0; m < n_bins; ++m) axis[m] = (m - center) * prf_hz / n_bins;
    return axis;
}

namespace {

void check_pair(const ChannelPair& pair) {
    if (pair.reference.samples.size() != pair.surveillance.samples.size())
        throw std::invalid_argument("channel pair: length mismatch");
    if (pair.reference.sample_rate_hz != pair.surveillance.sample_rate_hz)
        throw std::invalid_argument("channel pair: sample rate mismatch");
    if (pair.reference.samples.empty()) throw std::invalid_argument("channel pair: empty");
}

// Double-split copies of one contiguous region. The reference extends
// n_delay-1 samples before region_start, zero-filled where the recording
// does not reach.
struct SplitRegion {
    std::vector<double> ref_re, ref_im, sur_re, sur_im;
    int max_delay = 0;
};

SplitRegion split_region(const ChannelPair& pair, std::size_t region_start, std::size_t length,
                         int n_delay) {
    const std::size_t len = pair.reference.samples.size();
    SplitRegion r;
    r.max_delay = n_delay - 1;
    const std::size_t ref_len = length + static_cast<std::size_t>(r.max_delay);
    r.ref_re.assign(ref_len, 0.0);
    r.ref_im.assign(ref_len, 0.0);
    r.sur_re.resize(length);
    r.sur_im.resize(length);
    for (std::size_t j = 0; j < ref_len; ++j) {
        const auto abs_idx =
            static_cast<long long>(region_start) + static_cast<long long>(j) - r.max_delay;
        if (abs_idx >= 0 && abs_idx < static_cast<long long>(len)) {
            const auto& s = pair.reference.samples[static_cast<std::size_t>(abs_idx)];
            r.ref_re[j] = s.real();
            r.ref_im[j] = s.imag();
        }
    }
    for (std::size_t j = 0; j < length; ++j) {
        const auto& s = pair.surveillance.samples[region_start + j];
        r.sur_re[j] = s.real();
        r.sur_im[j] = s.imag();
    }
    return r;
}

// Per-delay, per-batch correlations conj(ref[n - tau]) * sur[n] over a run of
// equal-length batches starting at the region origin.
Eigen::MatrixXcd batch_correlations(const SplitRegion& region, int n_delay, int n_batches,
                                    std::size_t batch_len) {
    Eigen::MatrixXcd corr(n_delay, n_batches);
    for (int tau = 0; tau < n_delay; ++tau) {
        const std::size_t off = static_cast<std::size_t>(region.max_delay - tau);
        const double* rr = region.ref_re.data() + off;
        const double* ri = region.ref_im.data() + off;
        const double* sr = region.sur_re.data();
        const double* si = region.sur_im.data();
        for (int b = 0; b < n_batches; ++b) {
            const std::size_t n0 = static_cast<std::size_t>(b) * batch_len;
            double acc_re = 0.0, acc_im = 0.0;
            for (std::size_t k = n0; k < n0 + batch_len; ++k) {
                acc_re += rr[k] * sr[k] + ri[k] * si[k];
                acc_im += rr[k] * si[k] - ri[k] * sr[k];
            }
            corr(tau, b) = {acc_re, acc_im};
        }
    }
    return corr;
}

// Unitary zero-padded DFT matrix over the batch index, center-shifted so DC
// lands on the middle row. Output is n_pad x batch_count.
Eigen::MatrixXcd shifted_dft_matrix(int n_pad, int n_batch) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_pad));
    const int center = n_pad / 2;
    Eigen::MatrixXcd dft(n_pad, n_batch);
    for (int m = 0; m < n_pad; ++m) {
        const int k = ((m - center) % n_pad + n_pad) % n_pad;
        for (int b = 0; b < n_batch; ++b) {
            const double ph = -2.0 * std::numbers::pi * k * b / n_pad;
            dft(m, b) = norm * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    return dft;
}

// Zero-Doppler line template: the shifted transform of an all-ones batch
// sequence. A static return produces exactly this shape.
Eigen::VectorXcd zero_doppler_template(const Eigen::MatrixXcd& dft) {
    return dft * Eigen::VectorXcd::Ones(dft.cols());
}

int select_delay(const Eigen::MatrixXcd& surface_values, const Eigen::VectorXcd& dc_line,
                 double dc_line_energy) {
    // Cells are scored by the slice power left after the zero-Doppler line
    // shape is projected out, minus a small penalty on the static fit itself:
    // a cell holding only a parked return scores below plain noise cells, but
    // a moving line (even partially inside the static template near a zero
    // crossing) still wins.
    constexpr double kStaticPenalty = 0.02;
    int best_tau = 0;
    double best = std::numeric_limits<double>::lowest();
    for (int tau = 0; tau < surface_values.rows(); ++tau) {
        const Eigen::VectorXcd slice = surface_values.row(tau).transpose();
        const double static_fit = std::norm(dc_line.dot(slice)) / dc_line_energy;
        const double moving = slice.squaredNorm() - static_fit;
        const double score = moving - kStaticPenalty * static_fit;
        if (score > best) {
            best = score;
            best_tau = tau;
        }
    }
    return best_tau;
}

}  // namespace

CafSurface caf_batched(const ChannelPair& pair, std::size_t window_start_sample,
                       const CafConfig& cfg) {
    cfg.validate();
    check_pair(pair);
    const std::size_t len = pair.reference.samples.size();
    const std::size_t window = cfg.window_samples();
    if (window_start_sample + window > len)
        throw std::invalid_argument("caf_batched: window out of bounds");

    const SplitRegion region = split_region(pair, window_start_sample, window, cfg.delay_bins);
    const Eigen::MatrixXcd corr =
        batch_correlations(region, cfg.delay_bins, cfg.batch_count, cfg.batch_samples());
    const Eigen::MatrixXcd dft = shifted_dft_matrix(cfg.zero_pad_to, cfg.batch_count);

    CafSurface surface;
    surface.values = corr * dft.transpose();  // delay_bins x zero_pad_to
    surface.delay_axis_samples.resize(static_cast<std::size_t>(cfg.delay_bins));
    for (int tau = 0; tau < cfg.delay_bins; ++tau)
        surface.delay_axis_samples[static_cast<std::size_t>(tau)] = tau;
    surface.freq_axis_hz = doppler_axis_hz(cfg.zero_pad_to, cfg.prf_hz());
    return surface;
}

Eigen::VectorXd doppler_slice(const CafSurface& surface, int delay_bin) {
    if (delay_bin < 0 || delay_bin >= surface.values.rows())
        throw std::invalid_argument("doppler_slice: delay bin out of range");
    return surface.values.row(delay_bin).cwiseAbs().transpose();
}

DopplerSpectrogram spectrogram(const ChannelPair& pair, const CafConfig& cfg,
                               DelaySelect selector, int fixed_delay_bin) {
    cfg.validate();
    check_pair(pair);
    const std::size_t len = pair.reference.samples.size();
    const std::size_t window = cfg.window_samples();
    const std::size_t hop = cfg.hop_samples();
    if (len < window) throw std::invalid_argument("spectrogram: pair shorter than one window");
    if (selector == DelaySelect::Fixed &&
        (fixed_delay_bin < 0 || fixed_delay_bin >= cfg.delay_bins))
        throw std::invalid_argument("spectrogram: fixed delay bin out of range");

    const auto n_cols = static_cast<int>((len - window) / hop + 1);
    const std::size_t batch_len = cfg.batch_samples();

    const Eigen::MatrixXcd dft = shifted_dft_matrix(cfg.zero_pad_to, cfg.batch_count);
    const Eigen::VectorXcd dc_line = zero_doppler_template(dft);
    const double dc_line_energy = dc_line.squaredNorm();

    DopplerSpectrogram spec;
    spec.values.resize(cfg.zero_pad_to, n_cols);
    spec.freq_axis_hz = doppler_axis_hz(cfg.zero_pad_to, cfg.prf_hz());
    spec.hop_s = cfg.hop_s;

    auto emit_column = [&](int t, const Eigen::MatrixXcd& surface_values) {
        int delay = fixed_delay_bin;
        if (selector == DelaySelect::Argmax)
            delay = select_delay(surface_values, dc_line, dc_line_energy);
        spec.values.col(t) = surface_values.row(delay).cwiseAbs().transpose();
    };

    if (hop % batch_len == 0) {
        // Overlapping windows share batch boundaries: correlate each batch
        // once on the global grid, then transform each window's batch run.
        const std::size_t stride = hop / batch_len;
        const auto n_batches =
            static_cast<int>(static_cast<std::size_t>(n_cols - 1) * stride) + cfg.batch_count;
        const SplitRegion region = split_region(
            pair, 0, static_cast<std::size_t>(n_batches) * batch_len, cfg.delay_bins);
        const Eigen::MatrixXcd corr =
            batch_correlations(region, cfg.delay_bins, n_batches, batch_len);
        for (int t = 0; t < n_cols; ++t) {
            const Eigen::MatrixXcd window_corr =
                corr.middleCols(static_cast<Eigen::Index>(t) * static_cast<Eigen::Index>(stride),
                                cfg.batch_count);
            emit_column(t, window_corr * dft.transpose());
        }
    } else {
        for (int t = 0; t < n_cols; ++t) {
            const CafSurface surf = caf_batched(pair, static_cast<std::size_t>(t) * hop, cfg);
            emit_column(t, surf.values);
        }
    }
    return spec;
}

}  // namespace wimd
