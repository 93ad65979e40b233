#include <benchmark/benchmark.h>

#include "ijam/harness.hpp"

using namespace ijam;

static void BM_OfdmRoundTrip(benchmark::State& state) {
  phy::OfdmConfig cfg;
  Rng rng(1);
  std::vector<Cx> syms(cfg.n_subcarriers);
  for (auto& s : syms) s = rng.cx_gaussian(1.0);
  for (auto _ : state) {
    auto frame = phy::ofdm_modulate(syms, cfg);
    auto back = phy::ofdm_demodulate(frame, cfg);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_OfdmRoundTrip);

static void BM_Qam16Modulate(benchmark::State& state) {
  Rng rng(2);
  BitVec bits(4 * 4096);
  for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
  for (auto _ : state) {
    auto syms = phy::qam16_modulate(bits);
    benchmark::DoNotOptimize(syms);
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_Qam16Modulate);

static void BM_SparseRecovery(benchmark::State& state) {
  auto modes = chan::make_mode_set(chan::lpda_pattern(60.0, 0.0, 360), 5);
  auto dict = csaod::make_dictionary(modes, {0, 1, 2, 3});
  Rng rng(3);
  auto truth = chan::sample_multipath_profile(rng, 3, 60.0, 0.6);
  std::vector<csaod::CsiMeasurement> meas;
  for (int m = 0; m < 4; ++m) meas.push_back({m, chan::csi_from_aod(truth, modes.patterns[m])});
  for (auto _ : state) {
    auto est = csaod::estimate_aod(meas, dict, 4, 1e-8);
    benchmark::DoNotOptimize(est);
  }
}
BENCHMARK(BM_SparseRecovery);

static void BM_FullExchangeTrial(benchmark::State& state) {
  sim::ScenarioConfig cfg;
  cfg.trials = 1;
  for (auto _ : state) {
    auto rec = sim::run_trial(cfg, static_cast<int>(state.iterations()));
    benchmark::DoNotOptimize(rec);
  }
}
BENCHMARK(BM_FullExchangeTrial);

BENCHMARK_MAIN();
