#include "wimd/waveform.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wimd {

namespace {

// Substream derivation for all simulator RNG: one u64 seed + stream tag.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ 0x6a09e667f3bcc909ULL ^ stream);
}

struct TemplateSpec {
    double peak_doppler_hz;  // at 2.462 GHz, before jitter/channel scaling
    double span_s;           // active motion span, before jitter
    // Biphasic templates cross zero at cross_frac of the span; single-signed
    // templates have cross_frac < 0.
    double cross_frac;
    double neg_scale;
    double pos_scale;
    bool double_hump;
};

// Per-sample shape morph: lobe sharpness exponents and second-hump emphasis.
struct ShapeMorph {
    double neg_exp = 1.0;
    double pos_exp = 1.0;
    double hump_ratio = 0.8;
};

// Qualitative features per class: M1-M3 cross negative -> positive with
// distinct crossing fractions and spans; M4 is a short negative pulse,
// M5 a positive pulse, M6 a positive double hump. Peak Doppler stays inside
// [2.5, 4.5] Hz after jitter and the channel-2 Doppler scale.
constexpr TemplateSpec kTemplates[kNumClasses] = {
    {3.80, 1.35, 0.28, 0.60, 1.00, false},  // M1 pick up from ground, stand up
    {3.50, 0.70, 0.68, 1.00, 0.55, false},  // M2 sit down on chair
    {3.65, 1.00, 0.46, 0.75, 1.00, false},  // M3 stand up from chair
    {4.00, 0.50, -1.0, 1.00, 0.00, false},  // M4 fall onto mattress
    {3.45, 0.80, -1.0, 0.00, 1.00, false},  // M5 stand up after falling
    {3.55, 1.20, -1.0, 0.00, 1.00, true},   // M6 lie on mattress, get out
};

constexpr double kProfileDurationS = kMotionProfileDurationS;
constexpr double kVelocitySampleRateHz = 200.0;
constexpr double kPlacementMarginS = 0.3;
constexpr double kTemplateCarrierHz = 2.462e9;
constexpr double kChannel2Gain = 0.75;
constexpr double kChannel2DopplerScale = 0.85;

double shape_value(const TemplateSpec& t, const ShapeMorph& m, double u) {
    // u in [0, 1] over the active span.
    if (u < 0.0 || u > 1.0) return 0.0;
    if (t.double_hump) {
        const double s = std::sin(2.0 * std::numbers::pi * u);
        return std::pow(s * s, m.pos_exp) * (u < 0.5 ? 1.0 : m.hump_ratio);
    }
    if (t.cross_frac < 0.0) {
        const double s = std::sin(std::numbers::pi * u);
        const double hump = std::pow(s * s, t.pos_scale > 0.0 ? m.pos_exp : m.neg_exp);
        return (t.pos_scale - t.neg_scale) * hump;
    }
    if (u < t.cross_frac) {
        const double s = std::sin(std::numbers::pi * u / t.cross_frac);
        return -t.neg_scale * std::pow(s, m.neg_exp);
    }
    const double s = std::sin(std::numbers::pi * (u - t.cross_frac) / (1.0 - t.cross_frac));
    return t.pos_scale * std::pow(s, m.pos_exp);
}

}  // namespace

IqWaveform gen_wifi_baseband(double duration_s, double sample_rate_hz, std::uint64_t seed) {
    if (duration_s <= 0.0) throw std::invalid_argument("gen_wifi_baseband: duration must be > 0");
    if (sample_rate_hz <= 0.0)
        throw std::invalid_argument("gen_wifi_baseband: sample rate must be > 0");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    IqWaveform wf;
    wf.sample_rate_hz = sample_rate_hz;
    wf.samples.resize(n);

    std::mt19937_64 rng(derive_seed(seed, 0x57494649ULL));
    std::normal_distribution<float> dist(0.0f, std::sqrt(0.5f));
    for (auto& s : wf.samples) s = {dist(rng), dist(rng)};
    return wf;
}

double doppler_from_velocity(double velocity_mps, double carrier_hz) {
    if (carrier_hz <= 0.0)
        throw std::invalid_argument("doppler_from_velocity: carrier must be > 0");
    return 2.0 * velocity_mps * carrier_hz / kSpeedOfLight;
}

MotionProfile motion_profile(MotionClass label, std::uint64_t seed, int channel) {
    if (channel != 1 && channel != 2)
        throw std::invalid_argument("motion_profile: channel must be 1 or 2");
    const TemplateSpec& tmpl = kTemplates[class_index(label)];

    std::mt19937_64 rng(derive_seed(seed, 0x50524F46ULL + static_cast<std::uint64_t>(channel)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double amp_jitter = 0.88 + 0.24 * unit(rng);
    const double span_jitter = 0.87 + 0.26 * unit(rng);
    const double cross_jitter = -0.12 + 0.24 * unit(rng);
    const double span = tmpl.span_s * span_jitter;
    const double start_lo = kPlacementMarginS;
    const double start_hi = kProfileDurationS - span - kPlacementMarginS;
    const double start = start_lo + (start_hi - start_lo) * unit(rng);

    TemplateSpec t = tmpl;
    if (t.cross_frac > 0.0) t.cross_frac = std::clamp(t.cross_frac + cross_jitter, 0.1, 0.9);
    ShapeMorph morph;
    morph.neg_exp = 0.75 + 0.6 * unit(rng);
    morph.pos_exp = 0.75 + 0.6 * unit(rng);
    morph.hump_ratio = 0.65 + 0.3 * unit(rng);

    const double doppler_scale = (channel == 2) ? kChannel2DopplerScale : 1.0;
    const double peak_doppler = tmpl.peak_doppler_hz * amp_jitter * doppler_scale;
    const double peak_velocity = peak_doppler * kSpeedOfLight / (2.0 * kTemplateCarrierHz);

    MotionProfile p;
    p.label = label;
    p.duration_s = kProfileDurationS;
    p.dsi_visible = !(label == MotionClass::M6 && channel == 1);
    p.channel_gain = (channel == 2) ? kChannel2Gain : 1.0;

    const auto n = static_cast<std::size_t>(std::llround(kProfileDurationS * kVelocitySampleRateHz));
    p.velocity_samples.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double time_s = kProfileDurationS * static_cast<double>(k) / static_cast<double>(n - 1);
        p.velocity_samples[k] = peak_velocity * shape_value(t, morph, (time_s - start) / span);
    }
    return p;
}

ChannelPair simulate_channels(const IqWaveform& waveform, const MotionProfile& profile,
                              const SceneConfig& cfg) {
    const std::size_t n = waveform.samples.size();
    if (n == 0) throw std::invalid_argument("simulate_channels: empty waveform");
    if (cfg.echo_delay_samples >= n)
        throw std::invalid_argument("simulate_channels: echo delay out of range");
    const double fs = waveform.sample_rate_hz;
    if (static_cast<double>(n) / fs + 0.5 / fs < profile.duration_s)
        throw std::invalid_argument("simulate_channels: waveform shorter than profile duration");
    if (cfg.noise_power <= 0.0 || cfg.dsi_power < 0.0 || cfg.echo_power < 0.0)
        throw std::invalid_argument("simulate_channels: invalid power configuration");

    ChannelPair pair;
    pair.reference.sample_rate_hz = fs;
    pair.surveillance.sample_rate_hz = fs;
    pair.reference.samples.resize(n);
    pair.surveillance.samples.resize(n);

    std::mt19937_64 rng_ref(derive_seed(cfg.rng_seed, 0x524546ULL));
    std::mt19937_64 rng_sur(derive_seed(cfg.rng_seed, 0x535552ULL));
    std::normal_distribution<float> noise(0.0f, static_cast<float>(std::sqrt(cfg.noise_power / 2.0)));

    const double dsi_amp = profile.dsi_visible ? std::sqrt(cfg.dsi_power) : 0.0;
    const double echo_amp = std::sqrt(cfg.echo_power) * profile.channel_gain;
    const std::size_t delay = cfg.echo_delay_samples;

    // Velocity held constant across each profile grid step; the echo phasor
    // advances by a fixed per-sample rotation within a step and is re-anchored
    // from the accumulated phase at every step boundary.
    const auto& vel = profile.velocity_samples;
    const double vel_step_s = profile.duration_s / static_cast<double>(vel.size() - 1);
    const auto step_samples = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(vel_step_s * fs)));

    double phase_cycles = 0.0;  // integral of f_d(t) dt, in cycles
    std::complex<double> rotator{1.0, 0.0};
    std::complex<double> step_rot{1.0, 0.0};
    double cycles_per_sample = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        if (i % step_samples == 0) {
            const std::size_t vel_idx = i / step_samples;
            const double v = vel_idx < vel.size() ? vel[vel_idx] : 0.0;
            cycles_per_sample = doppler_from_velocity(v, cfg.carrier_hz) / fs;
            const double anchor = 2.0 * std::numbers::pi * phase_cycles;
            rotator = {std::cos(anchor), std::sin(anchor)};
            const double dphi = 2.0 * std::numbers::pi * cycles_per_sample;
            step_rot = {std::cos(dphi), std::sin(dphi)};
        }
        phase_cycles += cycles_per_sample;
        rotator *= step_rot;

        const std::complex<double> w(waveform.samples[i]);
        std::complex<double> sur = dsi_amp * w;
        if (i >= delay)
            sur += echo_amp * std::complex<double>(waveform.samples[i - delay]) * rotator;
        pair.reference.samples[i] =
            waveform.samples[i] + std::complex<float>(noise(rng_ref), noise(rng_ref));
        pair.surveillance.samples[i] = std::complex<float>(sur) +
                                       std::complex<float>(noise(rng_sur), noise(rng_sur));
    }
    return pair;
}

}  // namespace wimd
