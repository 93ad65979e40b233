#include "ijam/transcript_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ijam::io {

using nlohmann::json;

namespace {

const char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

}  // namespace

std::string base64_encode(const std::vector<uint8_t>& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out += kB64Chars[(v >> 18) & 63];
    out += kB64Chars[(v >> 12) & 63];
    out += kB64Chars[(v >> 6) & 63];
    out += kB64Chars[v & 63];
  }
  size_t rem = data.size() - i;
  if (rem == 1) {
    uint32_t v = data[i] << 16;
    out += kB64Chars[(v >> 18) & 63];
    out += kB64Chars[(v >> 12) & 63];
    out += "==";
  } else if (rem == 2) {
    uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out += kB64Chars[(v >> 18) & 63];
    out += kB64Chars[(v >> 12) & 63];
    out += kB64Chars[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<uint8_t> base64_decode(const std::string& text) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<uint8_t> out;
  uint32_t buf = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    int v = val(c);
    require(v >= 0, "invalid base64 character");
    buf = (buf << 6) | static_cast<uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<uint8_t>((buf >> bits) & 0xFF));
    }
  }
  return out;
}

namespace {

std::string cx_blob(const std::vector<Cx>& v) {
  std::vector<uint8_t> bytes(v.size() * 16);
  for (size_t i = 0; i < v.size(); ++i) {
    double re = v[i].real(), im = v[i].imag();
    std::memcpy(bytes.data() + 16 * i, &re, 8);
    std::memcpy(bytes.data() + 16 * i + 8, &im, 8);
  }
  return base64_encode(bytes);
}

std::vector<Cx> cx_unblob(const std::string& s) {
  auto bytes = base64_decode(s);
  require(bytes.size() % 16 == 0, "complex blob size not a multiple of 16");
  std::vector<Cx> v(bytes.size() / 16);
  for (size_t i = 0; i < v.size(); ++i) {
    double re, im;
    std::memcpy(&re, bytes.data() + 16 * i, 8);
    std::memcpy(&im, bytes.data() + 16 * i + 8, 8);
    v[i] = Cx(re, im);
  }
  return v;
}

std::string bits_string(const BitVec& bits) {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

BitVec bits_from_string(const std::string& s) {
  BitVec b(s.size());
  for (size_t i = 0; i < s.size(); ++i) b[i] = s[i] == '1';
  return b;
}

json cx_pair(Cx v) { return json::array({v.real(), v.imag()}); }

Cx cx_from(const json& j) { return Cx(j.at(0).get<double>(), j.at(1).get<double>()); }

json profile_to_json(const chan::AodProfile& p) {
  json gains = json::array();
  for (const auto& [bin, g] : p.gains) gains.push_back(json::array({bin, g.real(), g.imag()}));
  return json{{"n_bins", p.n_bins}, {"gains", gains}};
}

chan::AodProfile profile_from_json(const json& j) {
  chan::AodProfile p;
  p.n_bins = j.at("n_bins").get<int>();
  for (const auto& e : j.at("gains")) {
    p.gains.emplace_back(e.at(0).get<int>(),
                         Cx(e.at(1).get<double>(), e.at(2).get<double>()));
  }
  return p;
}

json kx_config_to_json(const proto::KeyExchangeConfig& c) {
  return json{{"key_bits", c.key_bits},
              {"snr_db", c.snr_db},
              {"jam_to_signal_db", c.jam_to_signal_db},
              {"randomization_on", c.randomization_on},
              {"feedback_quant_bits", c.feedback_quant_bits},
              {"n_subcarriers", c.ofdm.n_subcarriers},
              {"cp_len", c.ofdm.cp_len},
              {"symbol_rate", c.ofdm.symbol_rate},
              {"n_modes", c.n_modes},
              {"k_training", c.k_training},
              {"rpm", c.rpm},
              {"sparsity", c.sparsity},
              {"residual_tol", c.residual_tol},
              {"power_clamp", c.power_clamp},
              {"jam_mode", c.jam_mode == proto::JamMode::probabilistic ? "probabilistic"
                                                                        : "deterministic_pair"},
              {"jam_rate", c.jam_rate},
              {"max_repetitions", c.max_repetitions}};
}

proto::KeyExchangeConfig kx_config_from_json(const json& j) {
  proto::KeyExchangeConfig c;
  c.key_bits = j.at("key_bits").get<int>();
  c.snr_db = j.at("snr_db").get<double>();
  c.jam_to_signal_db = j.at("jam_to_signal_db").get<double>();
  c.randomization_on = j.at("randomization_on").get<bool>();
  c.feedback_quant_bits = j.at("feedback_quant_bits").get<int>();
  c.ofdm.n_subcarriers = j.at("n_subcarriers").get<int>();
  c.ofdm.cp_len = j.at("cp_len").get<int>();
  c.ofdm.symbol_rate = j.at("symbol_rate").get<double>();
  c.n_modes = j.at("n_modes").get<int>();
  c.k_training = j.at("k_training").get<int>();
  c.rpm = j.at("rpm").get<double>();
  c.sparsity = j.at("sparsity").get<int>();
  c.residual_tol = j.at("residual_tol").get<double>();
  c.power_clamp = j.at("power_clamp").get<double>();
  c.jam_mode = j.at("jam_mode").get<std::string>() == "probabilistic"
                   ? proto::JamMode::probabilistic
                   : proto::JamMode::deterministic_pair;
  c.jam_rate = j.at("jam_rate").get<double>();
  c.max_repetitions = j.at("max_repetitions").get<int>();
  return c;
}

}  // namespace

std::string transcript_to_json(const proto::Transcript& tr) {
  json j;
  j["version"] = 1;
  j["config"] = kx_config_to_json(tr.cfg);
  j["true_key"] = bits_string(tr.true_key);
  j["bob_key"] = bits_string(tr.bob_key);
  j["aborted"] = tr.aborted;
  j["abort_reason"] = tr.abort_reason;
  j["total_qam_symbols"] = tr.total_qam_symbols;
  j["estimated_profile"] = profile_to_json(tr.estimated_profile);

  json pred = json::array();
  for (const auto& h : tr.predicted_csi) pred.push_back(cx_pair(h));
  j["predicted_csi"] = pred;

  json prec = json::array();
  for (size_t m = 0; m < tr.precoder.w.size(); ++m) {
    prec.push_back({{"w", cx_pair(tr.precoder.w[m])},
                    {"unusable", static_cast<bool>(tr.precoder.unusable[m])}});
  }
  j["precoder"] = {{"modes", prec}, {"power_clamp", tr.precoder.power_clamp}};

  json training = json::array();
  for (const auto& rec : tr.training) {
    json eve = json::array();
    for (const auto& rx : rec.eve_rx) eve.push_back(cx_blob(rx));
    training.push_back({{"mode_id", rec.mode_id},
                        {"tx", cx_blob(rec.tx)},
                        {"bob_rx", cx_blob(rec.bob_rx)},
                        {"bob_estimate", cx_pair(rec.bob_estimate)},
                        {"fed_back", cx_pair(rec.fed_back)},
                        {"eve_rx", eve}});
  }
  j["training"] = training;

  json frames = json::array();
  for (const auto& fr : tr.frames) {
    json copies = json::array();
    for (const auto& cp : fr.copies) {
      std::string mask(cp.jam_mask.size(), '0');
      for (size_t i = 0; i < cp.jam_mask.size(); ++i) mask[i] = cp.jam_mask[i] ? '1' : '0';
      json eve = json::array();
      for (const auto& rx : cp.eve_rx) eve.push_back(cx_blob(rx));
      copies.push_back({{"jam_mask", mask}, {"bob_rx", cx_blob(cp.bob_rx)}, {"eve_rx", eve}});
    }
    json eff = json::array();
    for (const auto& h : fr.eve_effective) eff.push_back(cx_pair(h));
    frames.push_back({{"mode_id", fr.mode_id},
                      {"precoder_w", cx_pair(fr.precoder_w)},
                      {"tx", cx_blob(fr.tx)},
                      {"bob_effective", cx_pair(fr.bob_effective)},
                      {"eve_effective", eff},
                      {"copies", copies}});
  }
  j["frames"] = frames;
  return j.dump();
}

proto::Transcript transcript_from_json(const std::string& text) {
  json j = json::parse(text);
  require(j.at("version").get<int>() == 1, "unsupported transcript version");
  proto::Transcript tr;
  tr.cfg = kx_config_from_json(j.at("config"));
  tr.true_key = bits_from_string(j.at("true_key").get<std::string>());
  tr.bob_key = bits_from_string(j.at("bob_key").get<std::string>());
  tr.aborted = j.at("aborted").get<bool>();
  tr.abort_reason = j.at("abort_reason").get<std::string>();
  tr.total_qam_symbols = j.at("total_qam_symbols").get<int>();
  tr.estimated_profile = profile_from_json(j.at("estimated_profile"));
  for (const auto& e : j.at("predicted_csi")) tr.predicted_csi.push_back(cx_from(e));
  for (const auto& e : j.at("precoder").at("modes")) {
    tr.precoder.w.push_back(cx_from(e.at("w")));
    tr.precoder.unusable.push_back(e.at("unusable").get<bool>());
  }
  tr.precoder.power_clamp = j.at("precoder").at("power_clamp").get<double>();
  for (const auto& e : j.at("training")) {
    proto::TrainingRecord rec;
    rec.mode_id = e.at("mode_id").get<int>();
    rec.tx = cx_unblob(e.at("tx").get<std::string>());
    rec.bob_rx = cx_unblob(e.at("bob_rx").get<std::string>());
    rec.bob_estimate = cx_from(e.at("bob_estimate"));
    rec.fed_back = cx_from(e.at("fed_back"));
    for (const auto& rx : e.at("eve_rx")) rec.eve_rx.push_back(cx_unblob(rx.get<std::string>()));
    tr.training.push_back(std::move(rec));
  }
  for (const auto& e : j.at("frames")) {
    proto::FrameRecord fr;
    fr.mode_id = e.at("mode_id").get<int>();
    fr.precoder_w = cx_from(e.at("precoder_w"));
    fr.tx = cx_unblob(e.at("tx").get<std::string>());
    fr.bob_effective = cx_from(e.at("bob_effective"));
    for (const auto& h : e.at("eve_effective")) fr.eve_effective.push_back(cx_from(h));
    for (const auto& c : e.at("copies")) {
      proto::CopyRecord cp;
      std::string mask = c.at("jam_mask").get<std::string>();
      cp.jam_mask.resize(mask.size());
      for (size_t i = 0; i < mask.size(); ++i) cp.jam_mask[i] = mask[i] == '1';
      cp.bob_rx = cx_unblob(c.at("bob_rx").get<std::string>());
      for (const auto& rx : c.at("eve_rx")) cp.eve_rx.push_back(cx_unblob(rx.get<std::string>()));
      fr.copies.push_back(std::move(cp));
    }
    tr.frames.push_back(std::move(fr));
  }
  return tr;
}

void save_transcript(const proto::Transcript& tr, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << transcript_to_json(tr);
}

proto::Transcript load_transcript(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return transcript_from_json(ss.str());
}

}  // namespace ijam::io
