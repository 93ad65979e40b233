#ifndef IJAM_RNG_HPP
#define IJAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "ijam/common.hpp"

namespace ijam {

// Seeded generator with portable distributions. std::*_distribution is
// implementation-defined, so the transforms are done by hand: identical
// seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t raw() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  uint64_t integer(uint64_t n) {
    // Rejection to avoid modulo bias.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  int bit() { return static_cast<int>(gen_() & 1u); }

  // Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * kPi * uniform();
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Cx cx_gaussian(double variance) {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-variance * std::log(u1));
    double th = 2.0 * kPi * uniform();
    return Cx(r * std::cos(th), r * std::sin(th));
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ijam

#endif
