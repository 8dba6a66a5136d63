#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wimd {

/// The six motion classes of the activity benchmark.
enum class MotionClass : int { M1 = 0, M2, M3, M4, M5, M6 };

inline constexpr int kNumClasses = 6;

inline constexpr std::array<MotionClass, kNumClasses> all_classes() {
    return {MotionClass::M1, MotionClass::M2, MotionClass::M3,
            MotionClass::M4, MotionClass::M5, MotionClass::M6};
}

inline int class_index(MotionClass c) { return static_cast<int>(c); }

inline MotionClass class_from_index(int i) {
    if (i < 0 || i >= kNumClasses)
        throw std::invalid_argument("motion class index out of range: " + std::to_string(i));
    return static_cast<MotionClass>(i);
}

inline std::string class_name(MotionClass c) {
    return "M" + std::to_string(class_index(c) + 1);
}

inline MotionClass class_from_name(const std::string& name) {
    if (name.size() == 2 && name[0] == 'M' && name[1] >= '1' && name[1] <= '6')
        return static_cast<MotionClass>(name[1] - '1');
    throw std::invalid_argument("unknown motion class: " + name);
}

/// Thrown by detect_bounds when no window of the spectrogram crosses the
/// detection threshold.
class NoMotionError : public std::runtime_error {
  public:
    explicit NoMotionError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// splitmix64-based combiner for deriving independent RNG substreams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace wimd
