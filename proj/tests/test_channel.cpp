#include <doctest.h>

#include <cmath>

#include "ijam/channel.hpp"

using namespace ijam;
using namespace ijam::chan;

TEST_CASE("lpda pattern peak, half power, rotation") {
  auto p = lpda_pattern(60.0, 0.0, 360);
  CHECK(std::abs(std::abs(p.gain[0]) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(p.gain[60]) - 0.5) < 1e-9);
  CHECK(std::abs(std::abs(p.gain[300]) - 0.5) < 1e-9);

  auto shifted = lpda_pattern(60.0, 90.0, 360);
  for (int i = 0; i < 360; ++i) {
    CHECK(std::abs(shifted.gain[(i + 90) % 360] - p.gain[i]) < 1e-12);
  }
  CHECK_THROWS_AS(lpda_pattern(0.0, 0.0, 360), InvalidInput);
  CHECK_THROWS_AS(lpda_pattern(180.0, 0.0, 360), InvalidInput);
}

TEST_CASE("mode set steering angles") {
  auto base = lpda_pattern(60.0, 0.0, 360);
  auto set5 = make_mode_set(base, 5);
  REQUIRE(set5.n_modes() == 5);
  for (int m = 0; m < 5; ++m) {
    CHECK(set5.patterns[m].mode_id == m);
    int steer = m * 72;
    // peak lands on the steering bin
    CHECK(std::abs(std::abs(set5.patterns[m].gain[steer]) - 1.0) < 1e-12);
    // circular shift of the base pattern
    for (int i = 0; i < 360; i += 7) {
      CHECK(std::abs(set5.patterns[m].gain[(i + steer) % 360] - base.gain[i]) < 1e-12);
    }
  }
  auto set2 = make_mode_set(base, 2);
  CHECK(std::abs(std::abs(set2.patterns[1].gain[180]) - 1.0) < 1e-12);
  CHECK_THROWS_AS(make_mode_set(base, 1), InvalidInput);
}

TEST_CASE("csi from aod basic cases") {
  AntennaPattern uniform;
  uniform.gain.assign(360, Cx(1, 0));
  AodProfile single;
  single.gains = {{42, Cx(1, 0)}};
  CHECK(std::abs(csi_from_aod(single, uniform) - Cx(1, 0)) < 1e-15);

  AodProfile empty;
  CHECK(std::abs(csi_from_aod(empty, uniform)) == 0.0);

  AodProfile mismatch;
  mismatch.n_bins = 180;
  CHECK_THROWS_AS(csi_from_aod(mismatch, uniform), InvalidInput);
}

TEST_CASE("csi matches direct summation oracle") {
  auto pattern = lpda_pattern(60.0, 30.0, 360, 0.05, 0.02);
  AodProfile profile;
  profile.gains = {{10, 0.8 * std::exp(Cx(0, 0.3))}, {200, 0.4 * std::exp(Cx(0, -1.1))}};
  Cx expected = 0.8 * std::exp(Cx(0, 0.3)) * pattern.gain[10] +
                0.4 * std::exp(Cx(0, -1.1)) * pattern.gain[200];
  CHECK(std::abs(csi_from_aod(profile, pattern) - expected) < 1e-12);
}

TEST_CASE("csi linearity in the profile") {
  Rng rng(5);
  auto pattern = lpda_pattern(60.0, 144.0, 360);
  auto p1 = sample_multipath_profile(rng, 3, 60.0, 0.6);
  auto p2 = sample_multipath_profile(rng, 2, 60.0, 0.6);
  Cx a(1.7, -0.4);
  AodProfile combo;
  combo.gains = p1.gains;
  for (auto& [bin, g] : combo.gains) g *= a;
  for (const auto& e : p2.gains) combo.gains.push_back(e);
  Cx lhs = csi_from_aod(combo, pattern);
  Cx rhs = a * csi_from_aod(p1, pattern) + csi_from_aod(p2, pattern);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("csi rotation symmetry") {
  Rng rng(6);
  auto profile = sample_multipath_profile(rng, 3, 60.0, 0.6);
  const int shift = 77;
  AodProfile shifted = profile;
  for (auto& [bin, g] : shifted.gains) bin = (bin + shift) % 360;
  Cx h1 = csi_from_aod(profile, lpda_pattern(60.0, 25.0, 360, 0.05, 0.01));
  Cx h2 = csi_from_aod(shifted, lpda_pattern(60.0, 25.0 + shift, 360, 0.05, 0.01));
  CHECK(std::abs(h1 - h2) < 1e-12);
}

TEST_CASE("rotation schedule dwell arithmetic") {
  auto s1 = make_rotation_schedule(5.0, 5, 0.047, 100);
  CHECK(s1.dwell_seconds == doctest::Approx(2.4));
  auto s2 = make_rotation_schedule(1.0, 5, 0.047, 100);
  CHECK(s2.dwell_seconds == doctest::Approx(12.0));
  // dwell shorter than one frame clamps to one frame per mode
  auto s3 = make_rotation_schedule(5.0, 5, 10.0, 100);
  CHECK(s3.dwell_frames == 1);
  CHECK(s3.mode_of_frame(0) == 0);
  CHECK(s3.mode_of_frame(1) == 1);
  CHECK(s3.mode_of_frame(5) == 0);
  CHECK_THROWS_AS(make_rotation_schedule(5.0, 5, 0.0, 100), InvalidInput);
}

TEST_CASE("propagate identity and linearity") {
  Rng rng(7);
  std::vector<Cx> tx(64);
  for (auto& s : tx) s = rng.cx_gaussian(1.0);
  auto y = propagate(tx, Cx(1, 0), nullptr, Cx(0, 0), 0.0, rng);
  for (size_t i = 0; i < tx.size(); ++i) CHECK(y[i] == tx[i]);

  std::vector<Cx> zeros(64, Cx(0, 0));
  std::vector<Cx> jam(64);
  for (auto& s : jam) s = rng.cx_gaussian(1.0);
  Cx h_jam(0.3, 0.9);
  auto yj = propagate(zeros, Cx(1, 0), &jam, h_jam, 0.0, rng);
  for (size_t i = 0; i < jam.size(); ++i) CHECK(std::abs(yj[i] - h_jam * jam[i]) < 1e-15);

  std::vector<Cx> short_jam(32);
  CHECK_THROWS_AS(propagate(tx, Cx(1, 0), &short_jam, Cx(1, 0), 0.0, rng), InvalidInput);
}

TEST_CASE("propagate noise calibration at 20 dB") {
  Rng rng(8);
  const int n = 1'000'000;
  std::vector<Cx> tx(n, Cx(1, 0));  // unit power
  auto y = propagate(tx, Cx(1, 0), nullptr, Cx(0, 0), 0.01, rng);
  double noise_e = 0;
  for (int i = 0; i < n; ++i) noise_e += std::norm(y[i] - tx[i]);
  double snr_db = 10.0 * std::log10(static_cast<double>(n) / noise_e);
  CHECK(snr_db == doctest::Approx(20.0).epsilon(0.005));  // +-0.2 dB
}

TEST_CASE("multipath profile normalization") {
  Rng rng(9);
  auto p1 = sample_multipath_profile(rng, 1, 60.0, 0.6);
  REQUIRE(p1.gains.size() == 1);
  CHECK(std::abs(std::abs(p1.gains[0].second) - 1.0) < 1e-12);

  auto p2 = sample_multipath_profile(rng, 2, 60.0, 0.6);
  REQUIRE(p2.gains.size() == 2);
  double m0 = 0, m1 = 0;
  for (const auto& [bin, g] : p2.gains) {
    double m = std::abs(g);
    if (m > m0) { m1 = m0; m0 = m; } else if (m > m1) { m1 = m; }
  }
  const double norm = std::sqrt(1.36);
  CHECK(m0 == doctest::Approx(1.0 / norm));
  CHECK(m1 == doctest::Approx(0.6 / norm));
}

TEST_CASE("multipath profile separation holds over many draws") {
  Rng rng(10);
  const double bin_deg = 1.0;
  for (int t = 0; t < 10'000; ++t) {
    auto p = sample_multipath_profile(rng, 3, 60.0, 0.6);
    for (size_t i = 0; i < p.gains.size(); ++i) {
      for (size_t j = i + 1; j < p.gains.size(); ++j) {
        double d = circular_distance_deg(p.gains[i].first * bin_deg, p.gains[j].first * bin_deg);
        CHECK(d >= 60.0);
      }
    }
  }
  CHECK_THROWS_AS(sample_multipath_profile(rng, 6, 60.0, 0.6), InvalidInput);
}

TEST_CASE("mode rotation changes the channel for most geometries") {
  // Across-mode dispersion of |csi| exceeds 10% of its mean in at least 95%
  // of sampled environments.
  Rng rng(11);
  auto modes = make_mode_set(lpda_pattern(60.0, 0.0, 360), 5);
  int varied = 0;
  const int n_draws = 1000;
  for (int t = 0; t < n_draws; ++t) {
    auto profile = sample_multipath_profile(rng, 3, 60.0, 0.6);
    double sum = 0, sum2 = 0;
    for (const auto& pat : modes.patterns) {
      double m = std::abs(csi_from_aod(profile, pat));
      sum += m;
      sum2 += m * m;
    }
    double mean = sum / 5.0;
    double var = sum2 / 5.0 - mean * mean;
    if (std::sqrt(std::max(0.0, var)) > 0.1 * mean) ++varied;
  }
  CHECK(varied >= static_cast<int>(0.95 * n_draws));
}
