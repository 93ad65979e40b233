#include "ijam/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

namespace ijam::sim {

using nlohmann::json;

proto::KeyExchangeConfig ScenarioConfig::exchange_config() const {
  proto::KeyExchangeConfig kx;
  kx.key_bits = key_bits;
  kx.snr_db = snr_db;
  kx.jam_to_signal_db = jam_to_signal_db;
  kx.randomization_on = randomization_on;
  kx.feedback_quant_bits = feedback_quant_bits;
  kx.ofdm = ofdm;
  kx.n_modes = n_modes;
  kx.k_training = k_training;
  kx.rpm = rpm;
  kx.sparsity = sparsity;
  kx.residual_tol = residual_tol;
  kx.power_clamp = power_clamp;
  kx.jam_mode = jam_mode;
  return kx;
}

void ScenarioConfig::validate() const {
  exchange_config().validate();
  require(trials >= 1, "trials must be at least 1");
  require(eve_antennas >= 1, "eve_antennas must be at least 1");
  require(n_paths >= 1, "n_paths must be at least 1");
  require(n_bins > 0, "n_bins must be positive");
}

namespace {

proto::ChannelState draw_state(const ScenarioConfig& cfg, Rng& rng) {
  proto::ChannelState st;
  auto base = chan::lpda_pattern(cfg.beam_halfwidth_deg, 0.0, cfg.n_bins, cfg.sidelobe_floor,
                                 cfg.phase_slope_rad_per_deg);
  st.modes = chan::make_mode_set(base, cfg.n_modes);
  st.bob_profile = chan::sample_multipath_profile(rng, cfg.n_paths, cfg.min_separation_deg,
                                                  cfg.gain_decay, cfg.n_bins);
  for (int a = 0; a < cfg.eve_antennas; ++a) {
    st.eve_profiles.push_back(chan::sample_multipath_profile(
        rng, cfg.n_paths, cfg.min_separation_deg, cfg.gain_decay, cfg.n_bins));
    // Bob's jam antenna is stationary: a fixed unit-magnitude coefficient.
    double phase = 2.0 * kPi * rng.uniform();
    st.eve_jam_gain.push_back(Cx(std::cos(phase), std::sin(phase)));
  }
  return st;
}

double classification_accuracy(const proto::Transcript& tr,
                               const eve::AttackResult& result) {
  if (result.copy_choice.empty()) return -1.0;
  long correct = 0, total = 0;
  for (size_t f = 0; f < tr.frames.size(); ++f) {
    const auto& choices = result.copy_choice[f];
    for (size_t i = 0; i < choices.size(); ++i) {
      // Correct means the chosen copy was clean at this index.
      if (!tr.frames[f].copies[choices[i]].jam_mask[i]) ++correct;
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / total : -1.0;
}

}  // namespace

double eve_channel_entropy(const std::vector<Cx>& effective, double mag_ceiling) {
  if (effective.empty()) return 0.0;
  double max_mag = 0.0;
  for (const auto& h : effective) max_mag = std::max(max_mag, std::abs(h));
  double ceiling = mag_ceiling > 0.0 ? mag_ceiling : 2.0 * max_mag;
  if (ceiling <= 0.0) return 0.0;  // all-zero sequence occupies one cell
  const int kGrid = 8;
  std::map<int, int> counts;
  for (const auto& h : effective) {
    int mi = std::min(kGrid - 1, static_cast<int>(std::abs(h) / ceiling * kGrid));
    double ph = std::arg(h);  // [-pi, pi]
    int pi_ = std::min(kGrid - 1, static_cast<int>((ph + kPi) / (2.0 * kPi) * kGrid));
    counts[mi * kGrid + pi_]++;
  }
  const double n = static_cast<double>(effective.size());
  double h_bits = 0.0;
  for (const auto& [cell, c] : counts) {
    (void)cell;
    double p = c / n;
    h_bits -= p * std::log2(p);
  }
  return h_bits;
}

double key_rate(const ResultRecord& rec) {
  if (rec.failed || rec.total_qam_symbols <= 0) return 0.0;
  return rec.key_rate_bits_per_symbol;
}

ResultRecord run_trial(const ScenarioConfig& cfg, int trial, proto::Transcript* keep) {
  cfg.validate();
  ResultRecord rec;
  rec.trial = trial;

  Rng rng(mix_seed(cfg.seed, static_cast<uint64_t>(trial) * 2));
  auto st = draw_state(cfg, rng);
  auto tr = proto::run_key_exchange(cfg.exchange_config(), st, rng);
  if (keep) *keep = tr;

  if (tr.aborted) {
    rec.failed = true;
    rec.bob_ber = 1.0;
    rec.eve_ber = 1.0;
    return rec;
  }

  rec.bob_ber = static_cast<double>(hamming_distance(tr.bob_key, tr.true_key)) / cfg.key_bits;
  rec.key_agreed = rec.bob_ber == 0.0;
  rec.frames_sent = static_cast<int>(tr.frames.size());
  rec.total_qam_symbols = tr.total_qam_symbols;
  rec.key_rate_bits_per_symbol =
      static_cast<double>(cfg.key_bits) / tr.total_qam_symbols;

  // Attack.
  eve::EveConfig ec;
  ec.n_antennas = cfg.eve_antennas;
  ec.strategy = cfg.eve_strategy;
  // The divergence statistic needs two antennas; a single-antenna Eve falls
  // back to the naive baseline.
  if (ec.strategy == eve::Strategy::divergence && ec.n_antennas < 2)
    ec.strategy = eve::Strategy::single_antenna_nearest;

  auto view = eve::project_view(tr, cfg.eve_antennas);
  Rng eve_rng(mix_seed(cfg.seed, static_cast<uint64_t>(trial) * 2 + 1));

  std::vector<std::vector<Cx>> oracle;
  const std::vector<std::vector<Cx>>* oracle_ptr = nullptr;
  if (ec.strategy == eve::Strategy::oracle_equalization) {
    for (const auto& fr : tr.frames) {
      oracle.emplace_back(fr.eve_effective.begin(),
                          fr.eve_effective.begin() + cfg.eve_antennas);
    }
    oracle_ptr = &oracle;
  }

  auto attack = eve::attack(view, ec, eve_rng, oracle_ptr);
  rec.eve_ber = static_cast<double>(hamming_distance(attack.key_guess, tr.true_key)) / cfg.key_bits;
  rec.eve_classification_accuracy = classification_accuracy(tr, attack);

  std::vector<Cx> eff;
  for (const auto& fr : tr.frames) eff.push_back(fr.eve_effective[0]);
  rec.eve_channel_entropy_bits = eve_channel_entropy(eff);
  return rec;
}

std::vector<ResultRecord> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  std::vector<ResultRecord> out;
  out.reserve(cfg.trials);
  for (int t = 0; t < cfg.trials; ++t) out.push_back(run_trial(cfg, t));
  return out;
}

bool parse_strategy(const std::string& name, eve::Strategy* out) {
  if (name == "divergence") *out = eve::Strategy::divergence;
  else if (name == "random-guess") *out = eve::Strategy::random_guess;
  else if (name == "single-antenna-nearest") *out = eve::Strategy::single_antenna_nearest;
  else if (name == "oracle") *out = eve::Strategy::oracle_equalization;
  else return false;
  return true;
}

std::string strategy_name(eve::Strategy s) {
  switch (s) {
    case eve::Strategy::divergence: return "divergence";
    case eve::Strategy::random_guess: return "random-guess";
    case eve::Strategy::single_antenna_nearest: return "single-antenna-nearest";
    case eve::Strategy::oracle_equalization: return "oracle";
  }
  return "divergence";
}

bool set_field(ScenarioConfig& cfg, const std::string& name, const std::string& value) {
  try {
    if (name == "seed") cfg.seed = std::stoull(value);
    else if (name == "trials") cfg.trials = std::stoi(value);
    else if (name == "snr_db") cfg.snr_db = std::stod(value);
    else if (name == "jam_to_signal_db") cfg.jam_to_signal_db = std::stod(value);
    else if (name == "randomization_on") cfg.randomization_on = (value == "true" || value == "1");
    else if (name == "n_modes") cfg.n_modes = std::stoi(value);
    else if (name == "k_training") cfg.k_training = std::stoi(value);
    else if (name == "rpm") cfg.rpm = std::stod(value);
    else if (name == "eve_antennas") cfg.eve_antennas = std::stoi(value);
    else if (name == "eve_strategy") return parse_strategy(value, &cfg.eve_strategy);
    else if (name == "key_bits") cfg.key_bits = std::stoi(value);
    else if (name == "n_paths") cfg.n_paths = std::stoi(value);
    else if (name == "min_separation_deg") cfg.min_separation_deg = std::stod(value);
    else if (name == "gain_decay") cfg.gain_decay = std::stod(value);
    else if (name == "n_bins") cfg.n_bins = std::stoi(value);
    else if (name == "beam_halfwidth_deg") cfg.beam_halfwidth_deg = std::stod(value);
    else if (name == "sidelobe_floor") cfg.sidelobe_floor = std::stod(value);
    else if (name == "phase_slope_rad_per_deg") cfg.phase_slope_rad_per_deg = std::stod(value);
    else if (name == "feedback_quant_bits") cfg.feedback_quant_bits = std::stoi(value);
    else if (name == "sparsity") cfg.sparsity = std::stoi(value);
    else if (name == "residual_tol") cfg.residual_tol = std::stod(value);
    else if (name == "power_clamp") cfg.power_clamp = std::stod(value);
    else if (name == "n_subcarriers") cfg.ofdm.n_subcarriers = std::stoi(value);
    else if (name == "cp_len") cfg.ofdm.cp_len = std::stoi(value);
    else if (name == "symbol_rate") cfg.ofdm.symbol_rate = std::stod(value);
    else if (name == "jam_mode")
      cfg.jam_mode = value == "probabilistic" ? proto::JamMode::probabilistic
                                              : proto::JamMode::deterministic_pair;
    else return false;
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::vector<std::string> field_names() {
  return {"seed", "trials", "snr_db", "jam_to_signal_db", "randomization_on", "n_modes",
          "k_training", "rpm", "eve_antennas", "eve_strategy", "key_bits", "n_paths",
          "min_separation_deg", "gain_decay", "n_bins", "beam_halfwidth_deg", "sidelobe_floor",
          "phase_slope_rad_per_deg", "feedback_quant_bits", "sparsity", "residual_tol",
          "power_clamp", "n_subcarriers", "cp_len", "symbol_rate", "jam_mode"};
}

namespace {

struct Stats {
  double mean = 0, stddev = 0;
};

template <typename Get>
Stats stats_of(const std::vector<ResultRecord>& recs, Get get) {
  Stats s;
  if (recs.empty()) return s;
  double sum = 0;
  for (const auto& r : recs) sum += get(r);
  s.mean = sum / recs.size();
  double var = 0;
  for (const auto& r : recs) {
    double d = get(r) - s.mean;
    var += d * d;
  }
  s.stddev = std::sqrt(var / recs.size());
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

SweepResult sweep(const ScenarioConfig& base, const std::string& axis,
                  const std::vector<std::string>& values) {
  SweepResult result;
  result.axis = axis;
  for (const auto& v : values) {
    ScenarioConfig cfg = base;
    if (!set_field(cfg, axis, v))
      throw InvalidInput("unknown sweep axis or bad value: " + axis + "=" + v);
    auto recs = run_scenario(cfg);
    SweepRow row;
    row.value = v;
    row.trials = static_cast<int>(recs.size());
    auto b = stats_of(recs, [](const ResultRecord& r) { return r.bob_ber; });
    auto e = stats_of(recs, [](const ResultRecord& r) { return r.eve_ber; });
    auto c = stats_of(recs, [](const ResultRecord& r) { return r.eve_classification_accuracy; });
    auto k = stats_of(recs, [](const ResultRecord& r) { return r.key_rate_bits_per_symbol; });
    auto h = stats_of(recs, [](const ResultRecord& r) { return r.eve_channel_entropy_bits; });
    row.mean_bob_ber = b.mean; row.std_bob_ber = b.stddev;
    row.mean_eve_ber = e.mean; row.std_eve_ber = e.stddev;
    row.mean_class_acc = c.mean; row.std_class_acc = c.stddev;
    row.mean_key_rate = k.mean; row.std_key_rate = k.stddev;
    row.mean_entropy = h.mean; row.std_entropy = h.stddev;
    int agreed = 0;
    for (const auto& r : recs) agreed += r.key_agreed;
    row.agreement_rate = recs.empty() ? 0.0 : static_cast<double>(agreed) / recs.size();
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string results_csv(const std::vector<ResultRecord>& records) {
  std::string out =
      "trial,bob_ber,eve_ber,eve_classification_accuracy,key_agreed,frames_sent,"
      "total_qam_symbols,key_rate_bits_per_symbol,eve_channel_entropy_bits,failed\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial) + "," + fmt(r.bob_ber) + "," + fmt(r.eve_ber) + "," +
           fmt(r.eve_classification_accuracy) + "," + (r.key_agreed ? "1" : "0") + "," +
           std::to_string(r.frames_sent) + "," + std::to_string(r.total_qam_symbols) + "," +
           fmt(r.key_rate_bits_per_symbol) + "," + fmt(r.eve_channel_entropy_bits) + "," +
           (r.failed ? "1" : "0") + "\n";
  }
  return out;
}

namespace {

json config_to_json_obj(const ScenarioConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"trials", cfg.trials},
              {"snr_db", cfg.snr_db},
              {"jam_to_signal_db", cfg.jam_to_signal_db},
              {"randomization_on", cfg.randomization_on},
              {"n_modes", cfg.n_modes},
              {"k_training", cfg.k_training},
              {"rpm", cfg.rpm},
              {"eve_antennas", cfg.eve_antennas},
              {"eve_strategy", strategy_name(cfg.eve_strategy)},
              {"key_bits", cfg.key_bits},
              {"n_paths", cfg.n_paths},
              {"min_separation_deg", cfg.min_separation_deg},
              {"gain_decay", cfg.gain_decay},
              {"n_bins", cfg.n_bins},
              {"beam_halfwidth_deg", cfg.beam_halfwidth_deg},
              {"sidelobe_floor", cfg.sidelobe_floor},
              {"phase_slope_rad_per_deg", cfg.phase_slope_rad_per_deg},
              {"feedback_quant_bits", cfg.feedback_quant_bits},
              {"sparsity", cfg.sparsity},
              {"residual_tol", cfg.residual_tol},
              {"power_clamp", cfg.power_clamp},
              {"n_subcarriers", cfg.ofdm.n_subcarriers},
              {"cp_len", cfg.ofdm.cp_len},
              {"symbol_rate", cfg.ofdm.symbol_rate},
              {"jam_mode", cfg.jam_mode == proto::JamMode::probabilistic
                               ? "probabilistic"
                               : "deterministic_pair"}};
}

}  // namespace

std::string config_json(const ScenarioConfig& cfg) { return config_to_json_obj(cfg).dump(2); }

ScenarioConfig config_from_json(const std::string& text) {
  ScenarioConfig cfg;
  json j = json::parse(text);
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string value;
    if (it.value().is_string()) value = it.value().get<std::string>();
    else if (it.value().is_boolean()) value = it.value().get<bool>() ? "true" : "false";
    else value = it.value().dump();
    if (!set_field(cfg, it.key(), value))
      throw InvalidInput("unknown config field: " + it.key());
  }
  return cfg;
}

std::string summary_json(const ScenarioConfig& cfg, const std::vector<ResultRecord>& records,
                         bool include_timestamp) {
  json j;
  j["config"] = config_to_json_obj(cfg);
  auto b = stats_of(records, [](const ResultRecord& r) { return r.bob_ber; });
  auto e = stats_of(records, [](const ResultRecord& r) { return r.eve_ber; });
  auto c = stats_of(records, [](const ResultRecord& r) { return r.eve_classification_accuracy; });
  auto k = stats_of(records, [](const ResultRecord& r) { return r.key_rate_bits_per_symbol; });
  auto h = stats_of(records, [](const ResultRecord& r) { return r.eve_channel_entropy_bits; });
  int agreed = 0, failed = 0;
  for (const auto& r : records) {
    agreed += r.key_agreed;
    failed += r.failed;
  }
  j["aggregates"] = {
      {"trials", records.size()},
      {"bob_ber", {{"mean", b.mean}, {"stddev", b.stddev}}},
      {"eve_ber", {{"mean", e.mean}, {"stddev", e.stddev}}},
      {"eve_classification_accuracy", {{"mean", c.mean}, {"stddev", c.stddev}}},
      {"key_rate_bits_per_symbol", {{"mean", k.mean}, {"stddev", k.stddev}}},
      {"eve_channel_entropy_bits", {{"mean", h.mean}, {"stddev", h.stddev}}},
      {"key_agreement_rate",
       records.empty() ? 0.0 : static_cast<double>(agreed) / records.size()},
      {"failed_trials", failed}};
  if (include_timestamp) {
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  return j.dump(2);
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = result.axis +
                    ",trials,mean_bob_ber,std_bob_ber,mean_eve_ber,std_eve_ber,"
                    "mean_class_acc,std_class_acc,mean_key_rate,std_key_rate,"
                    "mean_entropy,std_entropy,agreement_rate\n";
  for (const auto& r : result.rows) {
    out += r.value + "," + std::to_string(r.trials) + "," + fmt(r.mean_bob_ber) + "," +
           fmt(r.std_bob_ber) + "," + fmt(r.mean_eve_ber) + "," + fmt(r.std_eve_ber) + "," +
           fmt(r.mean_class_acc) + "," + fmt(r.std_class_acc) + "," + fmt(r.mean_key_rate) +
           "," + fmt(r.std_key_rate) + "," + fmt(r.mean_entropy) + "," + fmt(r.std_entropy) +
           "," + fmt(r.agreement_rate) + "\n";
  }
  return out;
}

std::string sweep_json(const ScenarioConfig& base, const SweepResult& result) {
  json j;
  j["config"] = config_to_json_obj(base);
  j["axis"] = result.axis;
  json rows = json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"value", r.value},
                    {"trials", r.trials},
                    {"bob_ber", {{"mean", r.mean_bob_ber}, {"stddev", r.std_bob_ber}}},
                    {"eve_ber", {{"mean", r.mean_eve_ber}, {"stddev", r.std_eve_ber}}},
                    {"eve_classification_accuracy",
                     {{"mean", r.mean_class_acc}, {"stddev", r.std_class_acc}}},
                    {"key_rate_bits_per_symbol",
                     {{"mean", r.mean_key_rate}, {"stddev", r.std_key_rate}}},
                    {"eve_channel_entropy_bits",
                     {{"mean", r.mean_entropy}, {"stddev", r.std_entropy}}},
                    {"agreement_rate", r.agreement_rate}});
  }
  j["rows"] = rows;
  return j.dump(2);
}

}  // namespace ijam::sim
