// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, counter), so trials can be evaluated in any order and on
// any number of workers without changing a single bit of output.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "heis/group.hpp"

namespace heis {

/// Philox4x32 with 10 rounds.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

struct RngSpec {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  constexpr bool operator==(const RngSpec&) const = default;
};

/// Draws for one stream; `counter` indexes the draw (for Brownian paths it
/// is the dyadic node id).
class StreamRng {
 public:
  explicit constexpr StreamRng(RngSpec spec)
      : key_{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)},
        stream_lo_{static_cast<std::uint32_t>(spec.stream)},
        stream_hi_{static_cast<std::uint32_t>(spec.stream >> 32)} {}

  constexpr Philox4x32::Counter raw(std::uint64_t counter) const {
    return Philox4x32::generate({static_cast<std::uint32_t>(counter),
                                 static_cast<std::uint32_t>(counter >> 32), stream_lo_, stream_hi_},
                                key_);
  }

  /// Two independent uniforms in (0, 1], 53 bits each.
  std::array<double, 2> uniform2(std::uint64_t counter) const {
    const auto r = raw(counter);
    const std::uint64_t a = (std::uint64_t{r[0]} << 32 | r[1]) >> 11;
    const std::uint64_t b = (std::uint64_t{r[2]} << 32 | r[3]) >> 11;
    constexpr double scale = 0x1p-53;
    return {(static_cast<double>(a) + 1.0) * scale, (static_cast<double>(b) + 1.0) * scale};
  }

  /// Two independent standard normals (Box-Muller).
  Vec2 normal2(std::uint64_t counter) const {
    const auto u = uniform2(counter);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double theta = 2.0 * std::numbers::pi * u[1];
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
};

}  // namespace heis
