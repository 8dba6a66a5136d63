#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "wimd/waveform.hpp"

namespace wimd {

/// Batched cross-ambiguity processing parameters. The integration window is
/// split into batch_count sub-batches; one complex correlation per batch is
/// Fourier-transformed (zero-padded to zero_pad_to points) to resolve Doppler.
/// The effective PRF is batch_count / integration_s.
struct CafConfig {
    double sample_rate_hz = 2e6;
    double integration_s = 0.4;
    double hop_s = 0.04;
    int batch_count = 20;
    int zero_pad_to = 51;
    int delay_bins = 16;

    std::size_t window_samples() const;
    std::size_t batch_samples() const;
    std::size_t hop_samples() const;
    double prf_hz() const { return batch_count / integration_s; }
    double bin_spacing_hz() const { return prf_hz() / zero_pad_to; }

    /// Throws std::invalid_argument when the invariants do not hold
    /// (batch_count must divide the window, zero_pad_to >= batch_count,
    /// hop <= integration).
    void validate() const;
};

/// CAF(tau, f) over the delay/Doppler grid of one integration window.
/// Rows are delay bins, columns Doppler bins, center-shifted so DC is the
/// middle column.
struct CafSurface {
    Eigen::MatrixXcd values;  // delay_bins x zero_pad_to
    std::vector<int> delay_axis_samples;
    std::vector<double> freq_axis_hz;  // ascending, symmetric about 0
};

/// Time-Doppler magnitude history: one doppler_slice per hop.
struct DopplerSpectrogram {
    Eigen::MatrixXd values;  // F x T, linear magnitude
    std::vector<double> freq_axis_hz;
    double hop_s = 0.0;
    std::string source_channel;

    int freq_bins() const { return static_cast<int>(values.rows()); }
    int time_bins() const { return static_cast<int>(values.cols()); }
};

enum class DelaySelect { Fixed, Argmax };

/// Center-shifted frequency axis for an n-point transform at the given PRF
/// (n odd: exact DC middle bin).
std::vector<double> doppler_axis_hz(int n_bins, double prf_hz);

/// Batched CAF of one window starting at window_start_sample. For each delay,
/// the conjugated, delayed reference is correlated against the surveillance
/// signal per batch and the batch sequence is transformed with a unitary
/// (1/sqrt(N)) zero-padded DFT. Reference samples before the start of the
/// recording are taken as zero.
CafSurface caf_batched(const ChannelPair& pair, std::size_t window_start_sample,
                       const CafConfig& cfg);

/// |CAF| along Doppler at one delay bin.
Eigen::VectorXd doppler_slice(const CafSurface& surface, int delay_bin);

/// Sliding-window m-D history. Windows start at multiples of hop_s;
/// each column is the Doppler slice at the selected delay. Argmax selection
/// picks, per window, the delay whose slice carries the most power once the
/// zero-Doppler line shape is projected out -- the delay induced by moving
/// returns rather than by the static direct signal.
DopplerSpectrogram spectrogram(const ChannelPair& pair, const CafConfig& cfg,
                               DelaySelect selector, int fixed_delay_bin = 0);

}  // namespace wimd
