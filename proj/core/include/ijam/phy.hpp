#ifndef IJAM_PHY_HPP
#define IJAM_PHY_HPP

#include <array>
#include <vector>

#include "ijam/common.hpp"

namespace ijam::phy {

struct OfdmConfig {
  int n_subcarriers = 64;  // power of two
  int cp_len = 16;         // cyclic prefix samples, < n_subcarriers
  double symbol_rate = 3400.0;  // complex samples per second

  int frame_len() const { return n_subcarriers + cp_len; }
  void validate() const;
};

// Unitary radix-2 transforms (in-place). inverse=false applies exp(-j...),
// both directions scale by 1/sqrt(N).
void fft_unitary(std::vector<Cx>& a, bool inverse);

// Gray-coded square 16-QAM, unit average symbol energy. Index = 4-bit label
// b0 b1 b2 b3 (b0 MSB); b0b1 select the I level, b2b3 the Q level.
const std::array<Cx, 16>& qam16_constellation();

std::vector<Cx> qam16_modulate(const BitVec& bits);

// Minimum-distance hard decision; ties go to the smallest bit label.
BitVec qam16_demodulate(const std::vector<Cx>& symbols);

// Per block of n_subcarriers symbols: unitary inverse DFT, then cyclic prefix.
std::vector<Cx> ofdm_modulate(const std::vector<Cx>& symbols, const OfdmConfig& cfg);

// Per block: drop cyclic prefix, forward unitary DFT.
std::vector<Cx> ofdm_demodulate(const std::vector<Cx>& frame, const OfdmConfig& cfg);

}  // namespace ijam::phy

#endif
