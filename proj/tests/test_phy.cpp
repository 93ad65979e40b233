#include <doctest.h>

#include <cmath>

#include "ijam/phy.hpp"
#include "ijam/rng.hpp"

using namespace ijam;
using namespace ijam::phy;

namespace {

// Independent Gray-map oracle: enumerate the 2-bit binary-reflected Gray
// sequence per axis and assign ascending amplitude levels.
Cx oracle_qam16_point(int label) {
  auto axis = [](int two_bits) {
    for (int p = 0; p < 4; ++p) {
      if ((p ^ (p >> 1)) == two_bits) return -3.0 + 2.0 * p;
    }
    return 0.0;
  };
  int i_bits = (label >> 2) & 3;
  int q_bits = label & 3;
  return Cx(axis(i_bits), axis(q_bits)) / std::sqrt(10.0);
}

}  // namespace

TEST_CASE("qam16 length contract") {
  BitVec bits(16, 0);
  CHECK(qam16_modulate(bits).size() == 4);
  CHECK_THROWS_AS(qam16_modulate(BitVec(15, 0)), InvalidInput);
}

TEST_CASE("qam16 round trip over all 4-bit patterns") {
  for (int v = 0; v < 16; ++v) {
    BitVec bits = {static_cast<uint8_t>((v >> 3) & 1), static_cast<uint8_t>((v >> 2) & 1),
                   static_cast<uint8_t>((v >> 1) & 1), static_cast<uint8_t>(v & 1)};
    CHECK(qam16_demodulate(qam16_modulate(bits)) == bits);
  }
}

TEST_CASE("qam16 mapping matches independent Gray enumeration") {
  const auto& c = qam16_constellation();
  for (int label = 0; label < 16; ++label) {
    Cx expected = oracle_qam16_point(label);
    CHECK(std::abs(c[label] - expected) < 1e-12);
  }
}

TEST_CASE("qam16 unit average energy") {
  const auto& c = qam16_constellation();
  double e = 0;
  for (const auto& p : c) e += std::norm(p);
  CHECK(std::abs(e / 16.0 - 1.0) < 1e-9);
}

TEST_CASE("qam16 origin tie-break picks smallest label among nearest") {
  // The origin is equidistant to the four inner points; the smallest inner
  // label is 0101.
  auto bits = qam16_demodulate({Cx(0, 0)});
  CHECK(bits == BitVec{0, 1, 0, 1});
}

TEST_CASE("qam16 BER at 25 dB SNR is below 1e-4") {
  Rng rng(2025);
  const double noise_power = std::pow(10.0, -2.5);
  const int n_syms = 1'000'000;
  BitVec tx_bits(4 * n_syms);
  for (auto& b : tx_bits) b = static_cast<uint8_t>(rng.bit());
  auto syms = qam16_modulate(tx_bits);
  for (auto& s : syms) s += rng.cx_gaussian(noise_power);
  auto rx_bits = qam16_demodulate(syms);
  int errors = hamming_distance(tx_bits, rx_bits);
  CHECK(static_cast<double>(errors) / tx_bits.size() < 1e-4);
}

TEST_CASE("ofdm zero input gives zero output") {
  OfdmConfig cfg;
  std::vector<Cx> syms(cfg.n_subcarriers, Cx(0, 0));
  for (const auto& s : ofdm_modulate(syms, cfg)) CHECK(std::abs(s) == 0.0);
}

TEST_CASE("ofdm single dc subcarrier gives constant time sequence") {
  OfdmConfig cfg;
  cfg.cp_len = 0;
  std::vector<Cx> syms(cfg.n_subcarriers, Cx(0, 0));
  Cx s(0.7, -0.3);
  syms[0] = s;
  auto frame = ofdm_modulate(syms, cfg);
  Cx expected = s / std::sqrt(static_cast<double>(cfg.n_subcarriers));
  for (const auto& v : frame) CHECK(std::abs(v - expected) < 1e-12);
}

TEST_CASE("ofdm round trip and flat channel commutation") {
  OfdmConfig cfg;
  Rng rng(11);
  std::vector<Cx> syms(3 * cfg.n_subcarriers);
  for (auto& s : syms) s = rng.cx_gaussian(1.0);
  auto frame = ofdm_modulate(syms, cfg);
  auto back = ofdm_demodulate(frame, cfg);
  REQUIRE(back.size() == syms.size());
  for (size_t i = 0; i < syms.size(); ++i) CHECK(std::abs(back[i] - syms[i]) < 1e-12);

  Cx h(0.8, -1.2);
  auto faded = frame;
  for (auto& v : faded) v *= h;
  auto eq = ofdm_demodulate(faded, cfg);
  for (size_t i = 0; i < syms.size(); ++i) CHECK(std::abs(eq[i] - h * syms[i]) < 1e-12);
}

TEST_CASE("ofdm unitarity preserves energy") {
  OfdmConfig cfg;
  cfg.cp_len = 0;
  Rng rng(12);
  std::vector<Cx> syms(cfg.n_subcarriers);
  double e_in = 0;
  for (auto& s : syms) {
    s = rng.cx_gaussian(1.0);
    e_in += std::norm(s);
  }
  auto frame = ofdm_modulate(syms, cfg);
  double e_out = 0;
  for (const auto& v : frame) e_out += std::norm(v);
  CHECK(std::abs(e_out - e_in) < 1e-9);
}

TEST_CASE("ofdm input validation") {
  OfdmConfig cfg;
  CHECK_THROWS_AS(ofdm_modulate(std::vector<Cx>(63), cfg), InvalidInput);
  CHECK_THROWS_AS(ofdm_demodulate(std::vector<Cx>(79), cfg), InvalidInput);
  OfdmConfig bad;
  bad.cp_len = 64;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  OfdmConfig notpow2;
  notpow2.n_subcarriers = 48;
  CHECK_THROWS_AS(notpow2.validate(), InvalidInput);
}
