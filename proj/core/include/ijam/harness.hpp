#ifndef IJAM_HARNESS_HPP
#define IJAM_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ijam/adversary.hpp"
#include "ijam/protocol.hpp"

namespace ijam::sim {

struct ScenarioConfig {
  uint64_t seed = 1;
  int trials = 200;
  double snr_db = 25.0;
  double jam_to_signal_db = 0.0;
  bool randomization_on = true;
  int n_modes = 5;
  int k_training = 4;
  double rpm = 5.0;
  int eve_antennas = 2;
  eve::Strategy eve_strategy = eve::Strategy::divergence;
  int key_bits = 128;
  int n_paths = 3;
  double min_separation_deg = 60.0;
  double gain_decay = 0.6;
  int n_bins = 360;
  double beam_halfwidth_deg = 60.0;
  double sidelobe_floor = 0.05;
  double phase_slope_rad_per_deg = 0.0;
  int feedback_quant_bits = 0;
  int sparsity = 4;
  double residual_tol = 1e-2;
  double power_clamp = 10.0;
  phy::OfdmConfig ofdm;
  proto::JamMode jam_mode = proto::JamMode::deterministic_pair;

  proto::KeyExchangeConfig exchange_config() const;
  void validate() const;
};

struct ResultRecord {
  int trial = 0;
  double bob_ber = 0.0;
  double eve_ber = 0.0;
  double eve_classification_accuracy = -1.0;  // -1 when the strategy has none
  bool key_agreed = false;
  int frames_sent = 0;
  int total_qam_symbols = 0;
  double key_rate_bits_per_symbol = 0.0;
  double eve_channel_entropy_bits = 0.0;
  bool failed = false;
};

// Draw the trial's channel geometry from a derived sub-seed and run the full
// exchange plus the eavesdropper attack. `keep` optionally receives the
// transcript.
ResultRecord run_trial(const ScenarioConfig& cfg, int trial, proto::Transcript* keep = nullptr);

std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg);

// Plug-in Shannon entropy (bits) of the effective channel sequence on an
// 8x8 magnitude/phase grid. Magnitude axis spans [0, mag_ceiling]; a
// non-positive ceiling uses twice the largest observed magnitude.
double eve_channel_entropy(const std::vector<Cx>& effective, double mag_ceiling = 0.0);

double key_rate(const ResultRecord& rec);

// Attack strategies keyed by CLI names.
bool parse_strategy(const std::string& name, eve::Strategy* out);
std::string strategy_name(eve::Strategy s);

// Assign a config field by name from a string value; false if unknown.
bool set_field(ScenarioConfig& cfg, const std::string& name, const std::string& value);
std::vector<std::string> field_names();

struct SweepRow {
  std::string value;
  double mean_bob_ber = 0, std_bob_ber = 0;
  double mean_eve_ber = 0, std_eve_ber = 0;
  double mean_class_acc = 0, std_class_acc = 0;
  double mean_key_rate = 0, std_key_rate = 0;
  double mean_entropy = 0, std_entropy = 0;
  double agreement_rate = 0;
  int trials = 0;
};

struct SweepResult {
  std::string axis;
  std::vector<SweepRow> rows;
};

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<std::string>& values);

// Deterministic serializations (no timestamps in data rows).
std::string results_csv(const std::vector<ResultRecord>& records);
std::string summary_json(const ScenarioConfig& cfg, const std::vector<ResultRecord>& records,
                         bool include_timestamp = true);
std::string sweep_csv(const SweepResult& result);
std::string sweep_json(const ScenarioConfig& base, const SweepResult& result);
std::string config_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);

}  // namespace ijam::sim

#endif
