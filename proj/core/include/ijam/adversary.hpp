#ifndef IJAM_ADVERSARY_HPP
#define IJAM_ADVERSARY_HPP

#include <vector>

#include "ijam/common.hpp"
#include "ijam/phy.hpp"
#include "ijam/protocol.hpp"
#include "ijam/rng.hpp"

namespace ijam::eve {

enum class Strategy {
  divergence,              // cross-antenna divergence classification
  random_guess,            // calibration baseline
  single_antenna_nearest,  // demodulate antenna 0, copy A only
  oracle_equalization,     // diagnostic: knows the true per-frame channels
};

struct EveConfig {
  int n_antennas = 2;
  Strategy strategy = Strategy::divergence;
};

// Everything Eve can physically observe: her own receptions plus public
// protocol knowledge (pilot, frame structure, constellation, key length).
// Deliberately excludes jam schedules, precoders, profiles, and keys.
struct EveView {
  phy::OfdmConfig ofdm;
  int key_bits = 0;
  std::vector<Cx> pilot_tx;  // known pilot frame, time domain

  struct Training {
    int mode_id = 0;
    std::vector<std::vector<Cx>> rx;  // per antenna
  };
  std::vector<Training> training;

  struct Frame {
    // copy -> antenna -> samples
    std::vector<std::vector<std::vector<Cx>>> copies_rx;
  };
  std::vector<Frame> frames;
};

// Restrict a transcript to what Eve observed with her first n_antennas.
EveView project_view(const proto::Transcript& tr, int n_antennas);

// Per-antenna least-squares estimate from the last training mode's pilots.
std::vector<Cx> estimate_channels(const EveView& view);

// Population variance across antennas of equalized complex samples.
double divergence(const std::vector<Cx>& z);

struct AttackResult {
  BitVec key_guess;
  // frame -> sample index -> chosen copy (divergence strategies only).
  std::vector<std::vector<int>> copy_choice;
};

// oracle_channels: frame -> antenna -> true effective channel; required by
// the oracle strategy, ignored otherwise.
AttackResult attack(const EveView& view, const EveConfig& cfg, Rng& rng,
                    const std::vector<std::vector<Cx>>* oracle_channels = nullptr);

}  // namespace ijam::eve

#endif
