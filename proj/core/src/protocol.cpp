#include "ijam/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace ijam::proto {

void KeyExchangeConfig::validate() const {
  ofdm.validate();
  require(key_bits > 0 && key_bits % 4 == 0, "key_bits must be positive and divisible by 4");
  require(n_modes >= 2, "n_modes must be at least 2");
  require(k_training >= 1 && k_training <= n_modes, "k_training must be in [1, n_modes]");
  require(sparsity >= 1 && sparsity <= k_training, "sparsity must be in [1, k_training]");
  require(power_clamp > 0.0, "power_clamp must be positive");
  require(jam_rate > 0.0 && jam_rate < 1.0, "jam_rate must be in (0, 1)");
  require(max_repetitions >= 2, "max_repetitions must be at least 2");
  require(feedback_quant_bits >= 0 && feedback_quant_bits <= 32, "feedback_quant_bits out of range");
}

BitVec generate_key(Rng& rng, int n_bits) {
  require(n_bits > 0, "key length must be positive");
  BitVec bits(n_bits);
  for (auto& b : bits) b = static_cast<uint8_t>(rng.bit());
  return bits;
}

Cx bob_measure_csi(const std::vector<Cx>& rx, const std::vector<Cx>& known) {
  require(rx.size() == known.size(), "pilot length mismatch");
  Cx num(0, 0);
  double den = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    num += std::conj(known[i]) * rx[i];
    den += std::norm(known[i]);
  }
  require(den > 0.0, "pilot has zero energy");
  return num / den;
}

std::vector<Cx> pilot_symbols(const phy::OfdmConfig& cfg) {
  // Deterministic QPSK sequence; the seed is a protocol constant.
  Rng rng(0xC0FFEE5EEDULL);
  std::vector<Cx> syms(cfg.n_subcarriers);
  const double a = 1.0 / std::sqrt(2.0);
  for (auto& s : syms) {
    s = Cx(rng.bit() ? a : -a, rng.bit() ? a : -a);
  }
  return syms;
}

std::vector<Cx> pilot_frame(const phy::OfdmConfig& cfg) {
  return phy::ofdm_modulate(pilot_symbols(cfg), cfg);
}

std::vector<uint8_t> bob_make_jam_schedule(Rng& rng, int frame_len) {
  require(frame_len > 0, "frame length must be positive");
  std::vector<uint8_t> sched(frame_len);
  for (auto& s : sched) s = static_cast<uint8_t>(rng.bit());
  return sched;
}

std::vector<Cx> make_jam_frame(Rng& rng, int frame_len, double power) {
  require(frame_len > 0, "frame length must be positive");
  require(power >= 0.0, "jam power must be non-negative");
  std::vector<Cx> jam(frame_len);
  if (power > 0.0) {
    for (auto& j : jam) j = rng.cx_gaussian(power);
  }
  return jam;
}

std::vector<Cx> bob_splice(const std::vector<Cx>& rx_a, const std::vector<Cx>& rx_b,
                           const std::vector<uint8_t>& sched) {
  require(rx_a.size() == rx_b.size() && rx_a.size() == sched.size(), "splice length mismatch");
  std::vector<Cx> out(rx_a.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = sched[i] == 0 ? rx_b[i] : rx_a[i];
  }
  return out;
}

Cx quantize_feedback(Cx h, int bits) {
  if (bits <= 0) return h;
  const double levels = std::pow(2.0, bits);
  const double step = 4.0 / levels;
  auto q = [&](double x) {
    x = std::clamp(x, -2.0, 2.0 - 1e-12);
    double idx = std::floor((x + 2.0) / step);
    return -2.0 + (idx + 0.5) * step;
  };
  return Cx(q(h.real()), q(h.imag()));
}

std::vector<csaod::CsiMeasurement> training_phase(
    const KeyExchangeConfig& cfg, const ChannelState& state, const std::vector<int>& mode_ids,
    double noise_bob, const std::vector<double>& noise_eve, Rng& rng,
    std::vector<TrainingRecord>* records) {
  const std::vector<Cx> tx = pilot_frame(cfg.ofdm);
  const size_t n_eve = state.eve_profiles.size();
  std::vector<csaod::CsiMeasurement> meas;
  for (int m : mode_ids) {
    const auto& pattern = state.modes.patterns[m];
    Cx h_bob = chan::csi_from_aod(state.bob_profile, pattern);
    TrainingRecord rec;
    rec.mode_id = m;
    rec.tx = tx;
    rec.bob_rx = chan::propagate(tx, h_bob, nullptr, Cx(0, 0), noise_bob, rng);
    rec.bob_estimate = bob_measure_csi(rec.bob_rx, tx);
    rec.fed_back = quantize_feedback(rec.bob_estimate, cfg.feedback_quant_bits);
    for (size_t a = 0; a < n_eve; ++a) {
      Cx h_eve = chan::csi_from_aod(state.eve_profiles[a], pattern);
      rec.eve_rx.push_back(
          chan::propagate(tx, h_eve, nullptr, Cx(0, 0), noise_eve[a], rng));
    }
    meas.push_back({m, rec.fed_back});
    if (records) records->push_back(std::move(rec));
  }
  return meas;
}

namespace {

double snr_to_noise(double ref_power, double snr_db) {
  if (snr_db >= 200.0) return 0.0;  // noiseless convention
  return ref_power / std::pow(10.0, snr_db / 10.0);
}

// Jam samples restricted to the masked indices.
std::vector<Cx> masked_jam(const std::vector<Cx>& jam, const std::vector<uint8_t>& mask) {
  std::vector<Cx> out(jam.size(), Cx(0, 0));
  for (size_t i = 0; i < jam.size(); ++i) {
    if (mask[i]) out[i] = jam[i];
  }
  return out;
}

}  // namespace

Transcript run_key_exchange(const KeyExchangeConfig& cfg, const ChannelState& state, Rng& rng) {
  cfg.validate();
  const int n_modes = cfg.n_modes;
  require(state.modes.n_modes() == n_modes, "mode set does not match config");
  require(!state.eve_profiles.empty(), "need at least one Eve antenna profile");
  require(state.eve_jam_gain.size() == state.eve_profiles.size(),
          "eve_jam_gain must match the antenna count");

  Transcript tr;
  tr.cfg = cfg;

  // True per-mode CSIs.
  std::vector<Cx> h_bob(n_modes);
  std::vector<std::vector<Cx>> h_eve(state.eve_profiles.size(), std::vector<Cx>(n_modes));
  for (int m = 0; m < n_modes; ++m) {
    h_bob[m] = chan::csi_from_aod(state.bob_profile, state.modes.patterns[m]);
    for (size_t a = 0; a < state.eve_profiles.size(); ++a)
      h_eve[a][m] = chan::csi_from_aod(state.eve_profiles[a], state.modes.patterns[m]);
  }

  // Training covers the first K modes; with randomization off the antenna
  // never rotates, so every pilot goes out at mode 0.
  std::vector<int> training_modes;
  if (cfg.randomization_on) {
    for (int m = 0; m < cfg.k_training; ++m) training_modes.push_back(m);
  } else {
    training_modes.push_back(0);
  }

  // Receiver-referenced noise floors: the SNR is stated at each receiver
  // relative to its mean training-mode signal power.
  double ref_bob = 0.0;
  std::vector<double> ref_eve(state.eve_profiles.size(), 0.0);
  for (int m : training_modes) {
    ref_bob += std::norm(h_bob[m]);
    for (size_t a = 0; a < ref_eve.size(); ++a) ref_eve[a] += std::norm(h_eve[a][m]);
  }
  ref_bob /= training_modes.size();
  const double noise_bob = snr_to_noise(ref_bob, cfg.snr_db);
  std::vector<double> noise_eve(ref_eve.size());
  for (size_t a = 0; a < ref_eve.size(); ++a)
    noise_eve[a] = snr_to_noise(ref_eve[a] / training_modes.size(), cfg.snr_db);

  auto meas = training_phase(cfg, state, training_modes, noise_bob, noise_eve, rng, &tr.training);
  tr.total_qam_symbols = static_cast<int>(training_modes.size()) * cfg.ofdm.n_subcarriers;

  // Precoding: AoD estimate then per-mode channel inversion. Without
  // randomization Alice transmits unweighted and Bob equalizes himself.
  Cx bob_equalizer(1.0, 0.0);
  if (cfg.randomization_on) {
    auto dict = csaod::make_dictionary(state.modes, training_modes);
    auto est = csaod::estimate_aod(meas, dict, cfg.sparsity, cfg.residual_tol);
    tr.estimated_profile = est.profile;
    tr.predicted_csi.resize(n_modes);
    for (int m = 0; m < n_modes; ++m)
      tr.predicted_csi[m] = csaod::predict_csi(est.profile, state.modes.patterns[m]);
    tr.precoder = csaod::compute_precoder(tr.predicted_csi, cfg.power_clamp);
    bool any_usable = false;
    for (bool u : tr.precoder.unusable) any_usable = any_usable || !u;
    if (!any_usable) {
      tr.aborted = true;
      tr.abort_reason = "precoder unusable on every mode";
      return tr;
    }
  } else {
    tr.precoder.w.assign(n_modes, Cx(1.0, 0.0));
    tr.precoder.unusable.assign(n_modes, false);
    tr.precoder.power_clamp = cfg.power_clamp;
    bob_equalizer = tr.training.front().bob_estimate;
    if (std::abs(bob_equalizer) == 0.0) {
      tr.aborted = true;
      tr.abort_reason = "unusable channel estimate at mode 0";
      return tr;
    }
  }

  tr.true_key = generate_key(rng, cfg.key_bits);

  const int n_sub = cfg.ofdm.n_subcarriers;
  const int frame_len = cfg.ofdm.frame_len();
  const int bits_per_frame = 4 * n_sub;
  const int n_frames = (cfg.key_bits + bits_per_frame - 1) / bits_per_frame;

  chan::RotationSchedule sched{1, 1, 0.0};
  if (cfg.randomization_on) {
    const double frame_duration = 2.0 * frame_len / cfg.ofdm.symbol_rate;
    sched = chan::make_rotation_schedule(cfg.rpm, n_modes, frame_duration, n_frames);
  }

  // Assign a mode to each payload frame. Alice holds transmission while the
  // rotor points at a mode whose precoder hit the power clamp (a deep fade
  // she cannot invert), so payload only goes out on usable modes.
  std::vector<int> frame_mode(n_frames, 0);
  if (cfg.randomization_on) {
    int rotor = 0;
    for (int f = 0; f < n_frames; ++f) {
      while (tr.precoder.unusable[sched.mode_of_frame(rotor)]) ++rotor;
      frame_mode[f] = sched.mode_of_frame(rotor);
      ++rotor;
    }
  }

  // Jam power referenced to Alice's payload signal at Bob.
  double p_rx_bob = 0.0;
  for (int f = 0; f < n_frames; ++f) {
    int m = frame_mode[f];
    p_rx_bob += std::norm(h_bob[m] * tr.precoder.w[m]);
  }
  p_rx_bob /= n_frames;
  const double jam_power = p_rx_bob * std::pow(10.0, cfg.jam_to_signal_db / 10.0);

  BitVec recovered;
  recovered.reserve(n_frames * bits_per_frame);

  for (int f = 0; f < n_frames; ++f) {
    const int m = frame_mode[f];
    const Cx w = tr.precoder.w[m];

    BitVec chunk(bits_per_frame, 0);
    for (int i = 0; i < bits_per_frame; ++i) {
      int idx = f * bits_per_frame + i;
      if (idx < cfg.key_bits) chunk[i] = tr.true_key[idx];
    }
    auto syms = phy::qam16_modulate(chunk);
    auto clean = phy::ofdm_modulate(syms, cfg.ofdm);
    auto tx = csaod::apply_precoder(clean, w);

    FrameRecord fr;
    fr.mode_id = m;
    fr.precoder_w = w;
    fr.tx = tx;
    fr.bob_effective = h_bob[m] * w;
    for (size_t a = 0; a < h_eve.size(); ++a) fr.eve_effective.push_back(h_eve[a][m] * w);

    std::vector<std::vector<uint8_t>> masks;
    if (cfg.jam_mode == JamMode::deterministic_pair) {
      auto choice = bob_make_jam_schedule(rng, frame_len);
      std::vector<uint8_t> mask_a(frame_len), mask_b(frame_len);
      for (int i = 0; i < frame_len; ++i) {
        mask_a[i] = choice[i] == 0 ? 1 : 0;
        mask_b[i] = choice[i] == 0 ? 0 : 1;
      }
      masks = {mask_a, mask_b};
    } else {
      // Repeat until every index has at least one jammed and one clean copy.
      std::vector<uint8_t> seen_jam(frame_len, 0), seen_clean(frame_len, 0);
      bool covered = false;
      while (!covered) {
        if (static_cast<int>(masks.size()) >= cfg.max_repetitions) break;
        std::vector<uint8_t> mask(frame_len);
        for (int i = 0; i < frame_len; ++i) {
          mask[i] = rng.uniform() < cfg.jam_rate ? 1 : 0;
          if (mask[i]) seen_jam[i] = 1; else seen_clean[i] = 1;
        }
        masks.push_back(std::move(mask));
        covered = true;
        for (int i = 0; i < frame_len; ++i)
          covered = covered && seen_jam[i] && seen_clean[i];
      }
      if (!covered) {
        tr.aborted = true;
        tr.abort_reason = "jam coverage not reached within max_repetitions";
        return tr;
      }
    }

    for (const auto& mask : masks) {
      CopyRecord cp;
      cp.jam_mask = mask;
      auto jam = masked_jam(make_jam_frame(rng, frame_len, jam_power), mask);
      cp.bob_rx = chan::propagate(tx, h_bob[m], &jam, Cx(1.0, 0.0), noise_bob, rng);
      for (size_t a = 0; a < h_eve.size(); ++a) {
        cp.eve_rx.push_back(chan::propagate(tx, h_eve[a][m], &jam, state.eve_jam_gain[a],
                                            noise_eve[a], rng));
      }
      fr.copies.push_back(std::move(cp));
    }
    tr.total_qam_symbols += static_cast<int>(masks.size()) * n_sub;

    // Bob keeps, per index, the first copy he did not jam.
    std::vector<Cx> spliced(frame_len);
    for (int i = 0; i < frame_len; ++i) {
      for (const auto& cp : fr.copies) {
        if (!cp.jam_mask[i]) {
          spliced[i] = cp.bob_rx[i];
          break;
        }
      }
    }
    auto rx_syms = phy::ofdm_demodulate(spliced, cfg.ofdm);
    for (auto& s : rx_syms) s /= bob_equalizer;
    auto bits = phy::qam16_demodulate(rx_syms);
    recovered.insert(recovered.end(), bits.begin(), bits.end());

    tr.frames.push_back(std::move(fr));
  }

  tr.bob_key.assign(recovered.begin(), recovered.begin() + cfg.key_bits);
  return tr;
}

}  // namespace ijam::proto
