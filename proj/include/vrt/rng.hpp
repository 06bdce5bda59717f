#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vrt {

/// splitmix64 finalizer; used to derive independent substream seeds from a
/// scenario seed plus a channel tag, so per-link and per-source streams stay
/// reproducible regardless of generation order.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t channel,
                                    std::uint64_t index) {
  return mix64(seed ^ mix64(channel ^ mix64(index)));
}

/// Standard-normal stream over mt19937_64 with an explicit Box-Muller
/// transform. std::normal_distribution is implementation-defined, so the
/// transform is spelled out to keep traces identical across platforms.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    // Two 53-bit uniforms in (0, 1]; the cosine branch only.
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vrt
