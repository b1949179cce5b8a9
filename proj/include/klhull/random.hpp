#pragma once

// Counter-based Gaussian sampling. Philox4x32-10 maps (counter, key) to four
// 32-bit words; the key is the 64-bit seed and the counter holds a 64-bit
// position plus a 64-bit stream id. substream(i) derives a disjoint stream,
// so draw i of a budget can be generated independently of every other draw.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

namespace klhull {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Standard normal stream: Box-Muller over Philox uniforms. A fixed
// (seed, stream) pair always yields the same sequence.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  GaussianSampler substream(std::uint64_t index) const {
    return GaussianSampler(seed_, splitmix64(stream_ ^ splitmix64(index)));
  }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    const Philox4x32Counter r = next_block();
    return to_unit(r[0], r[1]);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const Philox4x32Counter r = next_block();
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  std::vector<double> normals(std::size_t n) {
    std::vector<double> x(n);
    for (double& v : x) v = normal();
    return x;
  }

 private:
  static double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  Philox4x32Counter next_block() {
    const Philox4x32Counter ctr = {static_cast<std::uint32_t>(position_),
                                   static_cast<std::uint32_t>(position_ >> 32),
                                   static_cast<std::uint32_t>(stream_),
                                   static_cast<std::uint32_t>(stream_ >> 32)};
    const Philox4x32Key key = {static_cast<std::uint32_t>(seed_),
                               static_cast<std::uint32_t>(seed_ >> 32)};
    ++position_;
    return philox4x32_10(ctr, key);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// n independent standard normal coordinates; advances the stream.
inline std::vector<double> sample_gaussian(GaussianSampler& sampler, std::size_t n) {
  return sampler.normals(n);
}

}  // namespace klhull
