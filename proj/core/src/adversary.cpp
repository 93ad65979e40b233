#include "ijam/adversary.hpp"

#include <cmath>

namespace ijam::eve {

EveView project_view(const proto::Transcript& tr, int n_antennas) {
  require(n_antennas >= 1, "need at least one antenna");
  EveView view;
  view.ofdm = tr.cfg.ofdm;
  view.key_bits = tr.cfg.key_bits;
  view.pilot_tx = proto::pilot_frame(tr.cfg.ofdm);
  for (const auto& rec : tr.training) {
    require(static_cast<int>(rec.eve_rx.size()) >= n_antennas,
            "transcript records fewer Eve antennas than requested");
    EveView::Training t;
    t.mode_id = rec.mode_id;
    t.rx.assign(rec.eve_rx.begin(), rec.eve_rx.begin() + n_antennas);
    view.training.push_back(std::move(t));
  }
  for (const auto& fr : tr.frames) {
    EveView::Frame f;
    for (const auto& cp : fr.copies) {
      require(static_cast<int>(cp.eve_rx.size()) >= n_antennas,
              "transcript records fewer Eve antennas than requested");
      f.copies_rx.emplace_back(cp.eve_rx.begin(), cp.eve_rx.begin() + n_antennas);
    }
    view.frames.push_back(std::move(f));
  }
  return view;
}

std::vector<Cx> estimate_channels(const EveView& view) {
  require(!view.training.empty(), "no training observations");
  const auto& last = view.training.back();
  std::vector<Cx> h;
  h.reserve(last.rx.size());
  for (const auto& rx : last.rx) {
    h.push_back(proto::bob_measure_csi(rx, view.pilot_tx));
  }
  return h;
}

double divergence(const std::vector<Cx>& z) {
  require(z.size() >= 2, "divergence needs at least two antennas");
  Cx mean(0, 0);
  for (const auto& v : z) mean += v;
  mean /= static_cast<double>(z.size());
  double d = 0.0;
  for (const auto& v : z) d += std::norm(v - mean);
  return d / static_cast<double>(z.size());
}

namespace {

BitVec demodulate_key(const std::vector<std::vector<Cx>>& frames, const phy::OfdmConfig& ofdm,
                      int key_bits) {
  BitVec bits;
  for (const auto& samples : frames) {
    auto syms = phy::ofdm_demodulate(samples, ofdm);
    auto b = phy::qam16_demodulate(syms);
    bits.insert(bits.end(), b.begin(), b.end());
  }
  bits.resize(key_bits);
  return bits;
}

}  // namespace

AttackResult attack(const EveView& view, const EveConfig& cfg, Rng& rng,
                    const std::vector<std::vector<Cx>>* oracle_channels) {
  require(cfg.n_antennas >= 1, "need at least one antenna");
  AttackResult result;

  if (cfg.strategy == Strategy::random_guess) {
    result.key_guess = proto::generate_key(rng, view.key_bits);
    return result;
  }

  if (cfg.strategy == Strategy::single_antenna_nearest) {
    auto h = estimate_channels(view);
    std::vector<std::vector<Cx>> eq_frames;
    for (const auto& fr : view.frames) {
      const auto& rx = fr.copies_rx.at(0).at(0);
      std::vector<Cx> eq(rx.size());
      for (size_t i = 0; i < rx.size(); ++i) eq[i] = rx[i] / h[0];
      eq_frames.push_back(std::move(eq));
    }
    result.key_guess = demodulate_key(eq_frames, view.ofdm, view.key_bits);
    return result;
  }

  // Divergence strategies.
  const int a_count = cfg.n_antennas;
  require(a_count >= 2, "divergence strategy needs at least two antennas");
  const bool oracle = cfg.strategy == Strategy::oracle_equalization;
  if (oracle) {
    require(oracle_channels != nullptr, "oracle strategy needs the true channels");
    require(oracle_channels->size() == view.frames.size(), "oracle channel count mismatch");
  }
  std::vector<Cx> h_train;
  if (!oracle) h_train = estimate_channels(view);

  std::vector<std::vector<Cx>> spliced_frames;
  for (size_t f = 0; f < view.frames.size(); ++f) {
    const auto& fr = view.frames[f];
    const size_t n_copies = fr.copies_rx.size();
    require(n_copies >= 1, "frame has no copies");
    const size_t len = fr.copies_rx[0][0].size();

    std::vector<Cx> h(a_count);
    for (int a = 0; a < a_count; ++a) {
      h[a] = oracle ? (*oracle_channels)[f][a] : h_train[a];
      require(std::abs(h[a]) > 0.0, "zero channel estimate");
    }

    std::vector<Cx> out(len);
    std::vector<int> choice(len, 0);
    std::vector<Cx> z(a_count);
    for (size_t i = 0; i < len; ++i) {
      int best_copy = 0;
      double best_div = 0.0;
      Cx best_mean(0, 0);
      for (size_t c = 0; c < n_copies; ++c) {
        Cx mean(0, 0);
        for (int a = 0; a < a_count; ++a) {
          z[a] = fr.copies_rx[c][a][i] / h[a];
          mean += z[a];
        }
        mean /= static_cast<double>(a_count);
        double d = 0.0;
        for (int a = 0; a < a_count; ++a) d += std::norm(z[a] - mean);
        d /= static_cast<double>(a_count);
        if (c == 0 || d < best_div) {  // tie keeps the earlier copy
          best_div = d;
          best_copy = static_cast<int>(c);
          best_mean = mean;
        }
      }
      out[i] = best_mean;
      choice[i] = best_copy;
    }
    spliced_frames.push_back(std::move(out));
    result.copy_choice.push_back(std::move(choice));
  }

  result.key_guess = demodulate_key(spliced_frames, view.ofdm, view.key_bits);
  return result;
}

}  // namespace ijam::eve
