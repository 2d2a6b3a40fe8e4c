#pragma once

#include "sislab/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace sislab {

// Deterministic random source. All distribution transforms are implemented
// here rather than with std::*_distribution, whose output is
// implementation-defined; identical seeds must give identical streams on
// any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  Scalar uniform01() {
    return static_cast<Scalar>(engine_() >> 11) * 0x1.0p-53;
  }

  Scalar uniform(Scalar lo, Scalar hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller, pair cached.
  Scalar normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    Scalar u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const Scalar u2 = uniform01();
    const Scalar mag = std::sqrt(-2.0 * std::log(u1));
    const Scalar two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    has_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

  void fill_normal(Mat& out) {
    for (Index j = 0; j < out.cols(); ++j)
      for (Index i = 0; i < out.rows(); ++i) out(i, j) = normal();
  }

  void fill_normal(Vec& out) {
    for (Index i = 0; i < out.size(); ++i) out(i) = normal();
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; n here is a buffer size,
    // far below 2^53, so scaling from uniform01 is exact enough and keeps
    // the stream layout simple.
    const auto idx = static_cast<std::uint64_t>(uniform01() * static_cast<Scalar>(n));
    return idx >= n ? n - 1 : idx;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  Scalar spare_ = 0.0;
};

// Stable derivation of auxiliary stream seeds (eval episodes, workers).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL + (stream << 1));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

} // namespace sislab
