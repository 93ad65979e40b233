#include <doctest.h>

#include <cmath>

#include "ijam/harness.hpp"
#include "ijam/transcript_io.hpp"

using namespace ijam;
using namespace ijam::sim;

TEST_CASE("entropy of a constant sequence is zero") {
  std::vector<Cx> eff(500, Cx(0.7, 0.2));
  CHECK(eve_channel_entropy(eff) == 0.0);
  CHECK(eve_channel_entropy({}) == 0.0);
  CHECK(eve_channel_entropy(std::vector<Cx>(10, Cx(0, 0))) == 0.0);
}

TEST_CASE("entropy of a uniform synthetic grid is six bits") {
  // One sample in each of the 64 magnitude/phase cells with the magnitude
  // axis pinned to [0, 1].
  std::vector<Cx> eff;
  for (int mi = 0; mi < 8; ++mi) {
    double mag = (mi + 0.5) / 8.0;
    for (int pi_ = 0; pi_ < 8; ++pi_) {
      double ph = -kPi + (pi_ + 0.5) * (2.0 * kPi / 8.0);
      eff.push_back(std::polar(mag, ph));
    }
  }
  CHECK(eve_channel_entropy(eff, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("entropy never exceeds the log of the sample count") {
  Rng rng(91);
  std::vector<Cx> eff;
  for (int i = 0; i < 16; ++i) eff.push_back(rng.cx_gaussian(1.0));
  CHECK(eve_channel_entropy(eff) <= std::log2(16.0) + 1e-12);
}

TEST_CASE("trial bookkeeping and key rate") {
  ScenarioConfig cfg;
  cfg.trials = 1;
  cfg.snr_db = 250.0;
  cfg.key_bits = 128;
  auto rec = run_trial(cfg, 0);
  CHECK_FALSE(rec.failed);
  CHECK(rec.frames_sent == 1);
  // 4 pilot frames + 2 payload copies of 64 symbols
  CHECK(rec.total_qam_symbols == 384);
  CHECK(rec.key_rate_bits_per_symbol == doctest::Approx(128.0 / 384.0));
  CHECK(key_rate(rec) == rec.key_rate_bits_per_symbol);
}

TEST_CASE("runs are deterministic and the csv serialization is stable") {
  ScenarioConfig cfg;
  cfg.trials = 5;
  cfg.seed = 7;
  auto csv1 = results_csv(run_scenario(cfg));
  auto csv2 = results_csv(run_scenario(cfg));
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("trial,bob_ber,eve_ber,eve_classification_accuracy,key_agreed,", 0) == 0);

  auto sj1 = summary_json(cfg, run_scenario(cfg), false);
  auto sj2 = summary_json(cfg, run_scenario(cfg), false);
  CHECK(sj1 == sj2);
}

TEST_CASE("different seeds give different trials") {
  ScenarioConfig a, b;
  a.trials = b.trials = 3;
  a.seed = 1;
  b.seed = 2;
  CHECK(results_csv(run_scenario(a)) != results_csv(run_scenario(b)));
}

TEST_CASE("bob's ber shrinks as snr grows") {
  ScenarioConfig cfg;
  cfg.trials = 30;
  cfg.key_bits = 512;
  double prev = 1.0;
  bool monotone = true;
  for (double snr : {5.0, 15.0, 25.0}) {
    cfg.snr_db = snr;
    auto recs = run_scenario(cfg);
    double mean = 0;
    for (const auto& r : recs) mean += r.bob_ber;
    mean /= recs.size();
    if (mean > prev + 1e-9) monotone = false;
    prev = mean;
  }
  CHECK(monotone);
  CHECK(prev < 1e-2);  // 25 dB endpoint
}

TEST_CASE("defended link keeps bob ahead of eve") {
  ScenarioConfig cfg;
  cfg.trials = 30;
  cfg.snr_db = 20.0;
  cfg.key_bits = 512;
  auto recs = run_scenario(cfg);
  double bob = 0, eve = 0;
  for (const auto& r : recs) {
    bob += r.bob_ber;
    eve += r.eve_ber;
  }
  CHECK(bob / recs.size() <= eve / recs.size() + 0.02);
}

TEST_CASE("single antenna divergence request falls back cleanly") {
  ScenarioConfig cfg;
  cfg.trials = 1;
  cfg.eve_antennas = 1;
  auto rec = run_trial(cfg, 0);
  CHECK_FALSE(rec.failed);
  // fallback strategy has no copy classification
  CHECK(rec.eve_classification_accuracy == -1.0);
}

TEST_CASE("sweep produces one row per value and rejects unknown axes") {
  ScenarioConfig cfg;
  cfg.trials = 3;
  auto res = sweep(cfg, "eve_antennas", {"1", "2", "4"});
  REQUIRE(res.rows.size() == 3);
  CHECK(res.axis == "eve_antennas");
  for (const auto& row : res.rows) CHECK(row.trials == 3);
  auto csv = sweep_csv(res);
  CHECK(csv.rfind("eve_antennas,trials,", 0) == 0);
  CHECK_THROWS_AS(sweep(cfg, "bogus_axis", {"1"}), InvalidInput);
}

TEST_CASE("snr sweep shows decreasing bob ber across rows") {
  ScenarioConfig cfg;
  cfg.trials = 20;
  cfg.key_bits = 512;
  auto res = sweep(cfg, "snr_db", {"5", "25"});
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[1].mean_bob_ber <= res.rows[0].mean_bob_ber);
}

TEST_CASE("config json round trip preserves every field") {
  ScenarioConfig cfg;
  cfg.seed = 42;
  cfg.trials = 17;
  cfg.snr_db = 18.5;
  cfg.randomization_on = false;
  cfg.eve_antennas = 4;
  cfg.eve_strategy = eve::Strategy::oracle_equalization;
  cfg.key_bits = 512;
  cfg.power_clamp = 12.5;
  cfg.jam_mode = proto::JamMode::probabilistic;
  cfg.ofdm.cp_len = 8;
  auto back = config_from_json(config_json(cfg));
  CHECK(config_json(back) == config_json(cfg));
  CHECK(back.seed == 42);
  CHECK(back.eve_strategy == eve::Strategy::oracle_equalization);
  CHECK(back.jam_mode == proto::JamMode::probabilistic);
  CHECK(back.ofdm.cp_len == 8);
  CHECK_THROWS_AS(config_from_json("{\"nope\": 1}"), InvalidInput);
}

TEST_CASE("strategy names parse both ways") {
  for (auto s : {eve::Strategy::divergence, eve::Strategy::random_guess,
                 eve::Strategy::single_antenna_nearest, eve::Strategy::oracle_equalization}) {
    eve::Strategy parsed;
    REQUIRE(parse_strategy(strategy_name(s), &parsed));
    CHECK(parsed == s);
  }
  eve::Strategy out;
  CHECK_FALSE(parse_strategy("unknown", &out));
}

TEST_CASE("base64 round trip") {
  std::vector<uint8_t> data;
  for (int i = 0; i < 257; ++i) data.push_back(static_cast<uint8_t>(i * 31));
  CHECK(io::base64_decode(io::base64_encode(data)) == data);
  CHECK(io::base64_encode({}) == "");
  CHECK(io::base64_encode({'M'}) == "TQ==");
  CHECK(io::base64_encode({'M', 'a'}) == "TWE=");
  CHECK(io::base64_encode({'M', 'a', 'n'}) == "TWFu");
}

TEST_CASE("transcript json round trip preserves the exchange") {
  ScenarioConfig cfg;
  cfg.trials = 1;
  proto::Transcript tr;
  auto rec = run_trial(cfg, 0, &tr);
  REQUIRE_FALSE(rec.failed);

  auto text = io::transcript_to_json(tr);
  auto back = io::transcript_from_json(text);
  CHECK(back.true_key == tr.true_key);
  CHECK(back.bob_key == tr.bob_key);
  REQUIRE(back.frames.size() == tr.frames.size());
  for (size_t f = 0; f < tr.frames.size(); ++f) {
    CHECK(back.frames[f].mode_id == tr.frames[f].mode_id);
    CHECK(back.frames[f].precoder_w == tr.frames[f].precoder_w);
    REQUIRE(back.frames[f].copies.size() == tr.frames[f].copies.size());
    for (size_t c = 0; c < tr.frames[f].copies.size(); ++c) {
      CHECK(back.frames[f].copies[c].jam_mask == tr.frames[f].copies[c].jam_mask);
      CHECK(back.frames[f].copies[c].bob_rx == tr.frames[f].copies[c].bob_rx);
      CHECK(back.frames[f].copies[c].eve_rx == tr.frames[f].copies[c].eve_rx);
    }
  }
  CHECK(io::transcript_to_json(back) == text);
}

TEST_CASE("replaying a saved transcript reproduces the attack outcome") {
  ScenarioConfig cfg;
  cfg.trials = 1;
  cfg.seed = 13;
  proto::Transcript tr;
  auto rec = run_trial(cfg, 0, &tr);
  REQUIRE_FALSE(rec.failed);

  auto back = io::transcript_from_json(io::transcript_to_json(tr));
  auto view = eve::project_view(back, cfg.eve_antennas);
  eve::EveConfig ec{cfg.eve_antennas, cfg.eve_strategy};
  Rng erng(mix_seed(cfg.seed, 1));  // same sub-seed as trial 0's attack
  auto res = eve::attack(view, ec, erng);
  double ber = static_cast<double>(hamming_distance(res.key_guess, back.true_key)) / cfg.key_bits;
  CHECK(ber == doctest::Approx(rec.eve_ber));
}

TEST_CASE("scenario validation rejects bad values") {
  ScenarioConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = ScenarioConfig{};
  cfg.eve_antennas = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = ScenarioConfig{};
  cfg.key_bits = 6;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}
