#pragma once

#include <cmath>
#include <cstdint>

#include "rellich/geometry.hpp"

namespace rellich {

/// splitmix64 step; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic per-batch generator (xoshiro256++).
///
/// Every Monte-Carlo batch derives its own generator from (seed, batch index)
/// through splitmix64, so the sample stream attached to a batch is a pure
/// function of those two integers.  Results are then bit-identical no matter
/// how batches are scheduled across worker threads.
class BatchRng {
 public:
  BatchRng(std::uint64_t seed, std::uint64_t batch) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (batch + 1));
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; fixed consumption of two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform direction on S^{N-1} (normalized Gaussian vector).
  Vec unit_direction(int N) {
    Vec g(N);
    double n2 = 0;
    do {
      for (int i = 0; i < N; ++i) g[i] = normal();
      n2 = norm2(g);
    } while (n2 == 0.0);  // probability zero, guards the normalization
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& gi : g) gi *= inv;
    return g;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4] = {};
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace rellich
