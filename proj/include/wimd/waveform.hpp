#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wimd/common.hpp"

namespace wimd {

/// Complex baseband sample stream. Samples are dimensionless amplitudes,
/// stored interleaved as on disk (complex32).
struct IqWaveform {
    std::vector<std::complex<float>> samples;
    double sample_rate_hz = 0.0;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// Velocity-vs-time template for one activity. velocity_samples are spaced
/// uniformly over [0, duration_s]; the active motion occupies a sub-interval
/// and the template is zero outside it.
struct MotionProfile {
    MotionClass label = MotionClass::M1;
    double duration_s = 0.0;
    std::vector<double> velocity_samples;  // m/s
    bool dsi_visible = true;
    double channel_gain = 1.0;  // amplitude scale on the echo return
};

/// Synchronized reference + surveillance waveforms.
struct ChannelPair {
    IqWaveform reference;
    IqWaveform surveillance;
};

/// Scenario parameters for the channel simulator. Powers are linear;
/// dsi_power/echo_power default to a 20 dB direct-signal-to-echo ratio.
struct SceneConfig {
    double carrier_hz = 2.462e9;
    double dsi_power = 100.0;
    double echo_power = 1.0;
    double noise_power = 1.0;
    std::size_t echo_delay_samples = 4;
    std::uint64_t rng_seed = 0;
};

/// Recording length covered by every motion profile; the active motion span
/// sits inside it with quiet margins on both sides.
inline constexpr double kMotionProfileDurationS = 4.2;

/// Unit-power circular-complex white noise stand-in for a Wi-Fi baseband
/// signal. Deterministic for a given seed.
IqWaveform gen_wifi_baseband(double duration_s, double sample_rate_hz, std::uint64_t seed);

/// Velocity template for one of the six motions, with seeded jitter on
/// amplitude, span and placement. channel selects the receiver geometry
/// (1 = quasi-monostatic, 2 = bistatic: smaller gain and Doppler).
MotionProfile motion_profile(MotionClass label, std::uint64_t seed, int channel = 1);

/// Quasi-monostatic Doppler shift: 2 v f_c / c.
double doppler_from_velocity(double velocity_mps, double carrier_hz);

/// Reference = waveform + noise. Surveillance = direct-signal copy (if
/// visible) + delayed echo with phase 2*pi*integral(f_d dt) + noise.
/// Deterministic for a given cfg.rng_seed.
ChannelPair simulate_channels(const IqWaveform& waveform, const MotionProfile& profile,
                              const SceneConfig& cfg);

}  // namespace wimd
