#include "wimd/align.hpp"

#include <algorithm>
#include <cmath>

namespace wimd {

Eigen::VectorXd dc_distance_weights(int n_bins) {
    if (n_bins < 1) throw std::invalid_argument("dc_distance_weights: need at least one bin");
    Eigen::VectorXd w(n_bins);
    const int dc = n_bins / 2;
    for (int i = 0; i < n_bins; ++i) {
        const double d = std::abs(i - dc);
        w(i) = std::max(1.0, d * d);
    }
    return w;
}

double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& weights) {
    if (x.size() != weights.size() || x.size() == 0)
        throw std::invalid_argument("weighted_mean: length mismatch");
    return weights.dot(x) / static_cast<double>(x.size());
}

double weighted_std(const Eigen::VectorXd& x, const Eigen::VectorXd& weights) {
    if (x.size() != weights.size() || x.size() == 0)
        throw std::invalid_argument("weighted_std: length mismatch");
    const double mean = weighted_mean(x, weights);
    const Eigen::ArrayXd dev = weights.array() * (x.array() - mean).abs();
    return std::sqrt(dev.square().sum() / weights.sum());
}

double default_detection_threshold(const std::vector<double>& std_trace) {
    if (std_trace.empty())
        throw std::invalid_argument("default_detection_threshold: empty trace");
    auto median_of = [](std::vector<double> v) {
        const std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        double m = v[mid];
        if (v.size() % 2 == 0) {
            std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
            m = 0.5 * (m + v[mid - 1]);
        }
        return m;
    };
    const double med = median_of(std_trace);
    std::vector<double> dev(std_trace.size());
    for (std::size_t i = 0; i < std_trace.size(); ++i) dev[i] = std::abs(std_trace[i] - med);
    return med + 3.0 * median_of(dev);
}

DetectionBounds bounds_from_trace(std::vector<double> std_trace, double threshold) {
    const int T = static_cast<int>(std_trace.size());
    if (T < 6) throw std::invalid_argument("bounds_from_trace: need at least 6 time bins");
    if (threshold <= 0.0) throw std::invalid_argument("bounds_from_trace: threshold must be > 0");

    const auto& trace = std_trace;
    int start = -1;
    for (int t = 0; t + 2 < T; ++t) {
        if (trace[t] > threshold && trace[t + 1] > threshold && trace[t + 2] > threshold) {
            start = t;
            break;
        }
    }
    if (start < 0) throw NoMotionError("bounds_from_trace: no window crosses the threshold");

    int end = T - 1;
    for (int u = start + 1; u + 2 < T; ++u) {
        if (trace[u] < threshold && trace[u + 1] < threshold && trace[u + 2] < threshold) {
            end = u - 1;
            break;
        }
    }
    DetectionBounds bounds;
    bounds.start_bin = start;
    bounds.end_bin = end;
    bounds.std_trace = std::move(std_trace);
    return bounds;
}

DetectionBounds detect_bounds(const DopplerSpectrogram& spec, double threshold,
                              const Eigen::VectorXd& weights) {
    if (weights.size() != spec.freq_bins())
        throw std::invalid_argument("detect_bounds: weight length mismatch");
    std::vector<double> trace(static_cast<std::size_t>(spec.time_bins()));
    for (int t = 0; t < spec.time_bins(); ++t)
        trace[static_cast<std::size_t>(t)] = weighted_std(spec.values.col(t), weights);
    return bounds_from_trace(std::move(trace), threshold);
}

Eigen::MatrixXd crop(const DopplerSpectrogram& spec, const DetectionBounds& bounds) {
    if (bounds.start_bin < 0 || bounds.end_bin < bounds.start_bin ||
        bounds.end_bin >= spec.time_bins())
        throw std::invalid_argument("crop: bounds out of range");
    return spec.values.middleCols(bounds.start_bin, bounds.end_bin - bounds.start_bin + 1);
}

namespace {

// Cubic convolution kernel, a = -0.5.
double cubic_weight(double s) {
    s = std::abs(s);
    if (s <= 1.0) return (1.5 * s - 2.5) * s * s + 1.0;
    if (s < 2.0) return ((-0.5 * s + 2.5) * s - 4.0) * s + 2.0;
    return 0.0;
}

}  // namespace

Eigen::MatrixXd bicubic_resize_time(const Eigen::MatrixXd& mat, int target_cols) {
    const int w = static_cast<int>(mat.cols());
    if (w < 2) throw std::invalid_argument("bicubic_resize_time: need at least 2 columns");
    if (target_cols < 2) throw std::invalid_argument("bicubic_resize_time: bad target size");

    Eigen::MatrixXd out(mat.rows(), target_cols);
    const double scale = static_cast<double>(w - 1) / static_cast<double>(target_cols - 1);
    for (int j = 0; j < target_cols; ++j) {
        const double x = j * scale;
        const int i0 = static_cast<int>(std::floor(x));
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(mat.rows());
        for (int di = -1; di <= 2; ++di) {
            const int i = std::clamp(i0 + di, 0, w - 1);  // edge clamp
            acc += cubic_weight(x - (i0 + di)) * mat.col(i);
        }
        out.col(j) = acc;
    }
    return out;
}

Eigen::MatrixXd normalize01(const Eigen::MatrixXd& mat) {
    if (!mat.allFinite()) throw std::invalid_argument("normalize01: non-finite values");
    const double lo = mat.minCoeff();
    const double hi = mat.maxCoeff();
    if (hi == lo) return Eigen::MatrixXd::Zero(mat.rows(), mat.cols());
    return (mat.array() - lo) / (hi - lo);
}

Eigen::VectorXd vectorize(const Eigen::MatrixXd& x_inter) {
    if (x_inter.rows() != kSignatureFreqBins || x_inter.cols() != kSignatureTimeBins)
        throw std::invalid_argument("vectorize: expected 51x50 signature");
    return Eigen::Map<const Eigen::VectorXd>(x_inter.data(), kSignatureLen);
}

Eigen::MatrixXd unvectorize(const Eigen::VectorXd& d) {
    if (d.size() != kSignatureLen)
        throw std::invalid_argument("unvectorize: expected length 2550");
    return Eigen::Map<const Eigen::MatrixXd>(d.data(), kSignatureFreqBins, kSignatureTimeBins);
}

AlignedSignature align_signature(const DopplerSpectrogram& spec, double threshold,
                                 std::optional<MotionClass> label, const std::string& channel) {
    if (spec.freq_bins() != kSignatureFreqBins)
        throw std::invalid_argument("align_signature: expected 51 frequency bins");
    const Eigen::VectorXd weights = dc_distance_weights(spec.freq_bins());
    if (threshold <= 0.0) {
        std::vector<double> trace(spec.time_bins());
        for (int t = 0; t < spec.time_bins(); ++t)
            trace[t] = weighted_std(spec.values.col(t), weights);
        threshold = default_detection_threshold(trace);
    }
    const DetectionBounds bounds = detect_bounds(spec, threshold, weights);
    Eigen::MatrixXd cropped = crop(spec, bounds);
    if (cropped.cols() < 2) {
        // A one-column detection cannot be resampled; widen by one column.
        const int lo = std::max(0, bounds.start_bin - 1);
        cropped = spec.values.middleCols(lo, 2);
    }

    AlignedSignature sig;
    sig.x_inter = normalize01(bicubic_resize_time(cropped, kSignatureTimeBins));
    sig.d = vectorize(sig.x_inter);
    sig.label = label;
    sig.channel = channel;
    return sig;
}

}  // namespace wimd
