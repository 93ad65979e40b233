// Command-line front end: run scenarios, sweep parameters, replay saved
// transcripts against attack strategies, and self-check core invariants.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ijam/harness.hpp"
#include "ijam/transcript_io.hpp"

namespace fs = std::filesystem;
using namespace ijam;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::string strategy = "divergence";
  sim::ScenarioConfig cfg;
  bool randomize = true;
};

void add_scenario_flags(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "JSON config file (flags override it)");
  app->add_option("--seed", f.cfg.seed, "master seed");
  app->add_option("--trials", f.cfg.trials, "Monte Carlo trials");
  app->add_option("--snr-db", f.cfg.snr_db, "receiver SNR in dB (>=200 means noiseless)");
  app->add_option("--jam-db", f.cfg.jam_to_signal_db, "jam-to-signal ratio at Bob, dB");
  app->add_flag("--randomize,!--no-randomize", f.randomize, "channel randomization on/off");
  app->add_option("--modes", f.cfg.n_modes, "antenna modes");
  app->add_option("--training-modes", f.cfg.k_training, "modes used for training");
  app->add_option("--rpm", f.cfg.rpm, "antenna rotation rate");
  app->add_option("--eve-antennas", f.cfg.eve_antennas, "eavesdropper antenna count");
  app->add_option("--eve-strategy", f.strategy,
                  "divergence|random-guess|single-antenna-nearest|oracle");
  app->add_option("--key-bits", f.cfg.key_bits, "key length in bits");
  app->add_option("--paths", f.cfg.n_paths, "multipath components per link");
  app->add_option("--power-clamp", f.cfg.power_clamp, "precoder magnitude clamp");
  app->add_option("--out", f.out_dir, "output directory");
}

int finalize_config(CommonFlags& f, const CLI::App* app) {
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      std::cerr << "error: cannot open config file " << f.config_path << "\n";
      return 1;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    sim::ScenarioConfig from_file = sim::config_from_json(ss.str());
    // Flags that were explicitly given win over the file.
    sim::ScenarioConfig flag_values = f.cfg;
    bool flag_randomize = f.randomize;
    f.cfg = from_file;
    f.randomize = from_file.randomization_on;
    auto given = [&](const std::string& name) { return app->count(name) > 0; };
    if (given("--seed")) f.cfg.seed = flag_values.seed;
    if (given("--trials")) f.cfg.trials = flag_values.trials;
    if (given("--snr-db")) f.cfg.snr_db = flag_values.snr_db;
    if (given("--jam-db")) f.cfg.jam_to_signal_db = flag_values.jam_to_signal_db;
    if (given("--randomize") || given("--no-randomize")) f.randomize = flag_randomize;
    if (given("--modes")) f.cfg.n_modes = flag_values.n_modes;
    if (given("--training-modes")) f.cfg.k_training = flag_values.k_training;
    if (given("--rpm")) f.cfg.rpm = flag_values.rpm;
    if (given("--eve-antennas")) f.cfg.eve_antennas = flag_values.eve_antennas;
    if (given("--key-bits")) f.cfg.key_bits = flag_values.key_bits;
    if (given("--paths")) f.cfg.n_paths = flag_values.n_paths;
    if (given("--power-clamp")) f.cfg.power_clamp = flag_values.power_clamp;
  }
  f.cfg.randomization_on = f.randomize;
  if (!sim::parse_strategy(f.strategy, &f.cfg.eve_strategy)) {
    std::cerr << "error: unknown strategy '" << f.strategy << "'\n";
    return 1;
  }
  try {
    f.cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int cmd_run(CommonFlags& f, const std::string& transcript_path) {
  auto records = sim::run_scenario(f.cfg);
  fs::create_directories(f.out_dir);
  write_file(fs::path(f.out_dir) / "results.csv", sim::results_csv(records));
  write_file(fs::path(f.out_dir) / "summary.json", sim::summary_json(f.cfg, records));
  if (!transcript_path.empty()) {
    proto::Transcript tr;
    sim::run_trial(f.cfg, 0, &tr);
    io::save_transcript(tr, transcript_path);
  }
  double bob = 0, evb = 0;
  for (const auto& r : records) {
    bob += r.bob_ber;
    evb += r.eve_ber;
  }
  bob /= records.size();
  evb /= records.size();
  std::cout << "trials=" << records.size() << " mean_bob_ber=" << bob
            << " mean_eve_ber=" << evb << "\n";
  std::cout << "wrote " << (fs::path(f.out_dir) / "results.csv").string() << ", "
            << (fs::path(f.out_dir) / "summary.json").string() << "\n";
  return 0;
}

int cmd_sweep(CommonFlags& f, const std::string& axis, const std::vector<std::string>& values) {
  auto valid = sim::field_names();
  if (std::find(valid.begin(), valid.end(), axis) == valid.end()) {
    std::cerr << "error: unknown sweep axis '" << axis << "'. Valid fields:\n  ";
    for (const auto& n : valid) std::cerr << n << " ";
    std::cerr << "\n";
    return 1;
  }
  auto result = sim::sweep(f.cfg, axis, values);
  fs::create_directories(f.out_dir);
  write_file(fs::path(f.out_dir) / "sweep.csv", sim::sweep_csv(result));
  write_file(fs::path(f.out_dir) / "sweep.json", sim::sweep_json(f.cfg, result));
  std::cout << sim::sweep_csv(result);
  return 0;
}

int cmd_replay(const std::string& transcript_path, const std::string& strategy_name,
               int n_antennas, uint64_t seed, const std::string& report_path) {
  auto tr = io::load_transcript(transcript_path);
  eve::Strategy strategy;
  if (!sim::parse_strategy(strategy_name, &strategy)) {
    std::cerr << "error: unknown strategy '" << strategy_name << "'\n";
    return 1;
  }
  int antennas = n_antennas > 0
                     ? n_antennas
                     : static_cast<int>(tr.training.empty() ? 0 : tr.training[0].eve_rx.size());
  eve::EveConfig ec{antennas, strategy};
  if (strategy == eve::Strategy::divergence && antennas < 2)
    ec.strategy = eve::Strategy::single_antenna_nearest;

  auto view = eve::project_view(tr, antennas);
  Rng rng(seed);
  std::vector<std::vector<Cx>> oracle;
  const std::vector<std::vector<Cx>>* oracle_ptr = nullptr;
  if (ec.strategy == eve::Strategy::oracle_equalization) {
    for (const auto& fr : tr.frames)
      oracle.emplace_back(fr.eve_effective.begin(), fr.eve_effective.begin() + antennas);
    oracle_ptr = &oracle;
  }
  auto result = eve::attack(view, ec, rng, oracle_ptr);

  double ber = static_cast<double>(hamming_distance(result.key_guess, tr.true_key)) /
               static_cast<double>(tr.true_key.size());
  long correct = 0, total = 0;
  for (size_t fi = 0; fi < result.copy_choice.size(); ++fi) {
    for (size_t i = 0; i < result.copy_choice[fi].size(); ++i) {
      if (!tr.frames[fi].copies[result.copy_choice[fi][i]].jam_mask[i]) ++correct;
      ++total;
    }
  }
  nlohmann::json report = {
      {"strategy", strategy_name},
      {"n_antennas", antennas},
      {"key_ber", ber},
      {"classification_accuracy", total ? static_cast<double>(correct) / total : -1.0}};
  std::cout << report.dump(2) << "\n";
  if (!report_path.empty()) write_file(report_path, report.dump(2));
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    Rng rng(7);
    auto bits = proto::generate_key(rng, 4096);
    auto round = phy::qam16_demodulate(phy::qam16_modulate(bits));
    check("qam16 round trip", round == bits);
  }
  {
    phy::OfdmConfig cfg;
    Rng rng(8);
    std::vector<Cx> syms(cfg.n_subcarriers);
    for (auto& s : syms) s = rng.cx_gaussian(1.0);
    auto back = phy::ofdm_demodulate(phy::ofdm_modulate(syms, cfg), cfg);
    double err = 0;
    for (int i = 0; i < cfg.n_subcarriers; ++i) err = std::max(err, std::abs(back[i] - syms[i]));
    check("ofdm round trip", err < 1e-12);
  }
  {
    auto p = chan::lpda_pattern(60.0, 0.0, 360);
    check("pattern peak", std::abs(std::abs(p.gain[0]) - 1.0) < 1e-12);
    check("pattern half power", std::abs(std::abs(p.gain[60]) - 0.5) < 1e-9);
  }
  {
    sim::ScenarioConfig cfg;
    cfg.trials = 2;
    cfg.seed = 42;
    auto a = sim::run_scenario(cfg);
    auto b = sim::run_scenario(cfg);
    check("scenario determinism", sim::results_csv(a) == sim::results_csv(b));
  }
  std::cout << (failures == 0 ? "selftest OK\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel-randomized friendly-jamming key generation simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags;
  std::string transcript_path;
  auto* run = app.add_subcommand("run", "run one scenario");
  add_scenario_flags(run, run_flags);
  run->add_option("--transcript", transcript_path, "save trial 0 transcript JSON here");

  std::string axis;
  std::vector<std::string> values;
  auto* sw = app.add_subcommand("sweep", "sweep one config field");
  add_scenario_flags(sw, sweep_flags);
  sw->add_option("--axis", axis, "field to sweep")->required();
  sw->add_option("--values", values, "values to sweep over (space or comma separated)")
      ->required()
      ->delimiter(',');

  std::string replay_transcript, replay_strategy = "divergence", replay_report;
  int replay_antennas = 0;
  uint64_t replay_seed = 1;
  auto* rp = app.add_subcommand("replay", "re-run an attack against a saved transcript");
  rp->add_option("transcript", replay_transcript, "transcript JSON path")->required();
  rp->add_option("--strategy", replay_strategy, "attack strategy");
  rp->add_option("--eve-antennas", replay_antennas, "antenna count (0 = all recorded)");
  rp->add_option("--seed", replay_seed, "seed for randomized strategies");
  rp->add_option("--report", replay_report, "write the attack report JSON here");

  app.add_subcommand("selftest", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // bad flags are a config error
  }

  try {
    if (run->parsed()) {
      if (int rc = finalize_config(run_flags, run)) return rc;
      return cmd_run(run_flags, transcript_path);
    }
    if (sw->parsed()) {
      if (int rc = finalize_config(sweep_flags, sw)) return rc;
      return cmd_sweep(sweep_flags, axis, values);
    }
    if (rp->parsed()) {
      return cmd_replay(replay_transcript, replay_strategy, replay_antennas, replay_seed,
                        replay_report);
    }
    return cmd_selftest();
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
}
