#include "ijam/phy.hpp"

#include <cmath>

namespace ijam::phy {

void OfdmConfig::validate() const {
  require(n_subcarriers > 0 && (n_subcarriers & (n_subcarriers - 1)) == 0,
          "n_subcarriers must be a positive power of two");
  require(cp_len >= 0 && cp_len < n_subcarriers, "cp_len must be in [0, n_subcarriers)");
  require(symbol_rate > 0.0, "symbol_rate must be positive");
}

void fft_unitary(std::vector<Cx>& a, bool inverse) {
  const size_t n = a.size();
  require(n > 0 && (n & (n - 1)) == 0, "fft length must be a power of two");
  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / static_cast<double>(len);
    Cx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      Cx w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        Cx u = a[i + k];
        Cx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& x : a) x *= scale;
}

namespace {

// 2-bit Gray code to amplitude level: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
constexpr double kGrayLevel[4] = {-3.0, -1.0, 1.0, 3.0};

inline double axis_level(int b_hi, int b_lo) {
  static constexpr int lut[4] = {0, 1, 3, 2};  // Gray index of (b_hi b_lo)
  return kGrayLevel[lut[(b_hi << 1) | b_lo]];
}

std::array<Cx, 16> build_constellation() {
  std::array<Cx, 16> c;
  const double norm = 1.0 / std::sqrt(10.0);
  for (int label = 0; label < 16; ++label) {
    int b0 = (label >> 3) & 1, b1 = (label >> 2) & 1;
    int b2 = (label >> 1) & 1, b3 = label & 1;
    c[label] = Cx(axis_level(b0, b1) * norm, axis_level(b2, b3) * norm);
  }
  return c;
}

}  // namespace

const std::array<Cx, 16>& qam16_constellation() {
  static const std::array<Cx, 16> c = build_constellation();
  return c;
}

std::vector<Cx> qam16_modulate(const BitVec& bits) {
  require(bits.size() % 4 == 0, "bit count must be divisible by 4");
  const auto& c = qam16_constellation();
  std::vector<Cx> out(bits.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) {
    int label = (bits[4 * i] << 3) | (bits[4 * i + 1] << 2) |
                (bits[4 * i + 2] << 1) | bits[4 * i + 3];
    out[i] = c[label];
  }
  return out;
}

BitVec qam16_demodulate(const std::vector<Cx>& symbols) {
  const auto& c = qam16_constellation();
  BitVec bits(symbols.size() * 4);
  for (size_t i = 0; i < symbols.size(); ++i) {
    int best = 0;
    double best_d2 = std::norm(symbols[i] - c[0]);
    for (int label = 1; label < 16; ++label) {
      double d2 = std::norm(symbols[i] - c[label]);
      if (d2 < best_d2) {  // strict: equal distance keeps the smaller label
        best_d2 = d2;
        best = label;
      }
    }
    bits[4 * i] = (best >> 3) & 1;
    bits[4 * i + 1] = (best >> 2) & 1;
    bits[4 * i + 2] = (best >> 1) & 1;
    bits[4 * i + 3] = best & 1;
  }
  return bits;
}

std::vector<Cx> ofdm_modulate(const std::vector<Cx>& symbols, const OfdmConfig& cfg) {
  cfg.validate();
  const size_t n = cfg.n_subcarriers;
  require(symbols.size() % n == 0, "symbol count must be divisible by n_subcarriers");
  const size_t blocks = symbols.size() / n;
  std::vector<Cx> out;
  out.reserve(blocks * cfg.frame_len());
  std::vector<Cx> block(n);
  for (size_t b = 0; b < blocks; ++b) {
    std::copy(symbols.begin() + b * n, symbols.begin() + (b + 1) * n, block.begin());
    fft_unitary(block, true);
    // cyclic prefix
    out.insert(out.end(), block.end() - cfg.cp_len, block.end());
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::vector<Cx> ofdm_demodulate(const std::vector<Cx>& frame, const OfdmConfig& cfg) {
  cfg.validate();
  const size_t flen = cfg.frame_len();
  require(!frame.empty() && frame.size() % flen == 0,
          "frame length must be a nonzero multiple of n_subcarriers + cp_len");
  const size_t blocks = frame.size() / flen;
  std::vector<Cx> out;
  out.reserve(blocks * cfg.n_subcarriers);
  std::vector<Cx> block(cfg.n_subcarriers);
  for (size_t b = 0; b < blocks; ++b) {
    auto start = frame.begin() + b * flen + cfg.cp_len;
    std::copy(start, start + cfg.n_subcarriers, block.begin());
    fft_unitary(block, false);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

}  // namespace ijam::phy
