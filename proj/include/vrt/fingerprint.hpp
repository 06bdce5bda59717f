#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace vrt {

/// FNV-1a accumulator used to fingerprint configurations, geometry, and
/// calibration data so cached operators and metrics can be tied to their
/// exact inputs.
class Fingerprint {
 public:
  Fingerprint& add_byte(unsigned char b) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
    return *this;
  }

  Fingerprint& add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) add_byte(static_cast<unsigned char>(v >> (8 * i)));
    return *this;
  }

  Fingerprint& add(std::int64_t v) { return add(static_cast<std::uint64_t>(v)); }
  Fingerprint& add(int v) { return add(static_cast<std::uint64_t>(static_cast<std::int64_t>(v))); }
  Fingerprint& add(double v) { return add(std::bit_cast<std::uint64_t>(v)); }

  Fingerprint& add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    for (unsigned char c : s) add_byte(c);
    return *this;
  }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace vrt
