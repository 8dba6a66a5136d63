#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "wimd/caf.hpp"
#include "wimd/common.hpp"

namespace wimd {

// Fixed signature geometry: M Doppler bins x L time bins, vectorized length P.
inline constexpr int kSignatureFreqBins = 51;
inline constexpr int kSignatureTimeBins = 50;
inline constexpr int kSignatureLen = kSignatureFreqBins * kSignatureTimeBins;

/// Frequency-bin weights for the detection statistic: squared distance from
/// the DC (middle) bin, with the DC weight replaced by 1 to keep positivity.
Eigen::VectorXd dc_distance_weights(int n_bins);

/// Weighted mean, sum(I[i] * X[i]) / N.
double weighted_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& weights);

/// Weighted standard deviation,
/// sqrt( sum( (I[i] * |X[i] - mean|)^2 ) / sum(I) ).
double weighted_std(const Eigen::VectorXd& x, const Eigen::VectorXd& weights);

struct DetectionBounds {
    int start_bin = 0;
    int end_bin = 0;
    std::vector<double> std_trace;
};

/// Robust per-recording threshold: median(trace) + 3 * MAD(trace).
double default_detection_threshold(const std::vector<double>& std_trace);

/// Three-consecutive-bin rule on a std trace: start = first index whose
/// three consecutive values all exceed the threshold; end = the column before
/// the first subsequent run of three below it (last column when no such run
/// exists). Throws NoMotionError when no start is found.
DetectionBounds bounds_from_trace(std::vector<double> std_trace, double threshold);

/// bounds_from_trace applied to the per-column weighted stds of spec.
DetectionBounds detect_bounds(const DopplerSpectrogram& spec, double threshold,
                              const Eigen::VectorXd& weights);

/// Column sub-range copy [start_bin, end_bin].
Eigen::MatrixXd crop(const DopplerSpectrogram& spec, const DetectionBounds& bounds);

/// Resample the time axis to target_cols columns with cubic-convolution
/// (Catmull-Rom, a = -0.5) interpolation, edge-clamped. Frequency axis is
/// untouched. Requires at least 2 input columns.
Eigen::MatrixXd bicubic_resize_time(const Eigen::MatrixXd& mat, int target_cols);

/// (x - min) / (max - min); a constant matrix maps to all zeros.
Eigen::MatrixXd normalize01(const Eigen::MatrixXd& mat);

/// Column-major flattening of an exactly 51x50 matrix to a length-2550 vector.
Eigen::VectorXd vectorize(const Eigen::MatrixXd& x_inter);

/// Inverse of vectorize.
Eigen::MatrixXd unvectorize(const Eigen::VectorXd& d);

/// Detected, cropped, resized and normalized m-D signature.
struct AlignedSignature {
    Eigen::MatrixXd x_inter;  // 51 x 50, values in [0, 1]
    Eigen::VectorXd d;        // 2550, column-major vec(x_inter)
    std::optional<MotionClass> label;
    std::string channel;
};

/// Full alignment chain: detect (auto threshold when threshold <= 0), crop,
/// resize, normalize, vectorize.
AlignedSignature align_signature(const DopplerSpectrogram& spec, double threshold = 0.0,
                                 std::optional<MotionClass> label = std::nullopt,
                                 const std::string& channel = {});

}  // namespace wimd
