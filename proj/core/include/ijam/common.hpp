#ifndef IJAM_COMMON_HPP
#define IJAM_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ijam {

using Cx = std::complex<double>;
using BitVec = std::vector<uint8_t>;  // one bit per element, value 0 or 1

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Thrown on contract violations (bad lengths, out-of-range parameters).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

// splitmix64, used to derive independent sub-seeds from a master seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline int hamming_distance(const BitVec& a, const BitVec& b) {
  size_t n = std::min(a.size(), b.size());
  int d = 0;
  for (size_t i = 0; i < n; ++i) d += (a[i] != b[i]);
  d += static_cast<int>(a.size() > b.size() ? a.size() - n : b.size() - n);
  return d;
}

}  // namespace ijam

#endif
