#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fbosc {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Stateless: the output
/// depends only on (counter, key), so any sample can be regenerated on any
/// thread.
inline PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Standard normals addressed by (seed, stream, index): four per index.
class CounterNormals {
 public:
  CounterNormals(std::uint64_t seed, std::uint32_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

  std::array<double, 4> operator()(std::uint64_t index) const {
    const auto bits = philox4x32(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream_, 0u}, key_);
    std::array<double, 4> out;
    box_muller(bits[0], bits[1], out[0], out[1]);
    box_muller(bits[2], bits[3], out[2], out[3]);
    return out;
  }

 private:
  /// (x + 1/2) / 2^32, strictly inside (0, 1)
  static double open_unit(std::uint32_t x) { return (x + 0.5) * 0x1p-32; }

  static void box_muller(std::uint32_t a, std::uint32_t b, double& z0, double& z1) {
    const double radius = std::sqrt(-2.0 * std::log(open_unit(a)));
    const double angle = 2.0 * std::numbers::pi * open_unit(b);
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
  }

  PhiloxKey key_;
  std::uint32_t stream_;
};

}  // namespace fbosc
