#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace denfg {

/// Seeded random stream with pinned algorithms: the integer stream is
/// std::mt19937_64 (fully specified by the standard), uniforms take the top
/// 53 bits, and normals come from Box-Muller. Identical seeds give identical
/// streams; no std::*_distribution is used because those are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  int below(int n) {
    // Rejection sampling against the largest multiple of n below 2^64.
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return static_cast<int>(x % un);
  }

  /// Standard normal via Box-Muller; draws are produced in cached pairs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex normal with unit total variance: (N + iN) / sqrt(2).
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  /// Uniform point on the complex unit circle.
  std::complex<double> unit_circle() {
    const double a = 2.0 * M_PI * uniform();
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace denfg
