#ifndef IJAM_PROTOCOL_HPP
#define IJAM_PROTOCOL_HPP

#include <string>
#include <vector>

#include "ijam/channel.hpp"
#include "ijam/common.hpp"
#include "ijam/csaod.hpp"
#include "ijam/phy.hpp"
#include "ijam/rng.hpp"

namespace ijam::proto {

enum class JamMode {
  deterministic_pair,  // two copies, complementary per-sample jamming
  probabilistic,       // repeat copies, each sample jammed with jam_rate
};

struct KeyExchangeConfig {
  int key_bits = 128;
  double snr_db = 25.0;            // receiver-referenced; >= 200 means noiseless
  double jam_to_signal_db = 0.0;   // jam power relative to Alice's signal at Bob
  bool randomization_on = true;
  int feedback_quant_bits = 0;     // 0 = ideal feedback
  phy::OfdmConfig ofdm;
  int n_modes = 5;
  int k_training = 4;
  double rpm = 5.0;
  int sparsity = 4;
  double residual_tol = 1e-2;
  double power_clamp = 10.0;
  JamMode jam_mode = JamMode::deterministic_pair;
  double jam_rate = 0.5;           // probabilistic mode only
  int max_repetitions = 64;

  void validate() const;
};

// Ground-truth channel geometry for one exchange.
struct ChannelState {
  chan::ModeSet modes;
  chan::AodProfile bob_profile;
  std::vector<chan::AodProfile> eve_profiles;  // one per Eve antenna
  std::vector<Cx> eve_jam_gain;                // Bob's jam antenna -> Eve antenna
};

struct TrainingRecord {
  int mode_id = 0;
  std::vector<Cx> tx;                      // un-precoded pilot frame
  std::vector<Cx> bob_rx;
  Cx bob_estimate{0, 0};
  Cx fed_back{0, 0};                       // after optional quantization
  std::vector<std::vector<Cx>> eve_rx;     // per antenna
};

struct CopyRecord {
  std::vector<uint8_t> jam_mask;           // 1 = Bob jams this sample index
  std::vector<Cx> bob_rx;
  std::vector<std::vector<Cx>> eve_rx;     // per antenna
};

struct FrameRecord {
  int mode_id = 0;
  Cx precoder_w{1, 0};
  std::vector<Cx> tx;                      // precoded transmit samples
  std::vector<CopyRecord> copies;          // deterministic mode: exactly 2
  Cx bob_effective{0, 0};                  // true h_bob * w
  std::vector<Cx> eve_effective;           // true h_eve(a) * w, per antenna
};

struct Transcript {
  KeyExchangeConfig cfg;
  BitVec true_key;
  BitVec bob_key;
  bool aborted = false;
  std::string abort_reason;
  std::vector<TrainingRecord> training;
  std::vector<FrameRecord> frames;
  chan::AodProfile estimated_profile;
  std::vector<Cx> predicted_csi;           // per mode (randomization on)
  csaod::Precoder precoder;
  int total_qam_symbols = 0;               // pilots + all transmitted copies
};

BitVec generate_key(Rng& rng, int n_bits);

// Least-squares flat-channel estimate <known, rx> / <known, known>
// (conjugate-linear in the known pilot).
Cx bob_measure_csi(const std::vector<Cx>& rx, const std::vector<Cx>& known);

// Fixed QPSK pilot, known to every node.
std::vector<Cx> pilot_symbols(const phy::OfdmConfig& cfg);
std::vector<Cx> pilot_frame(const phy::OfdmConfig& cfg);

// i.i.d. fair-coin copy selection: 0 = jam copy A at this index, 1 = copy B.
std::vector<uint8_t> bob_make_jam_schedule(Rng& rng, int frame_len);

// Complex Gaussian jam samples with per-sample variance = power.
std::vector<Cx> make_jam_frame(Rng& rng, int frame_len, double power);

// Take the copy Bob did not jam at each index.
std::vector<Cx> bob_splice(const std::vector<Cx>& rx_a, const std::vector<Cx>& rx_b,
                           const std::vector<uint8_t>& sched);

// Training exchange: for each selected mode Alice sends the pilot un-precoded,
// Bob estimates the CSI and feeds it back (optionally quantized). Eve's
// receptions are recorded alongside.
std::vector<csaod::CsiMeasurement> training_phase(
    const KeyExchangeConfig& cfg, const ChannelState& state, const std::vector<int>& mode_ids,
    double noise_bob, const std::vector<double>& noise_eve, Rng& rng,
    std::vector<TrainingRecord>* records);

Transcript run_key_exchange(const KeyExchangeConfig& cfg, const ChannelState& state, Rng& rng);

// Uniform quantizer over [-2, 2] per real component; bits == 0 passes through.
Cx quantize_feedback(Cx h, int bits);

}  // namespace ijam::proto

#endif
