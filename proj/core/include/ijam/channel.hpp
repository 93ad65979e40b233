#ifndef IJAM_CHANNEL_HPP
#define IJAM_CHANNEL_HPP

#include <utility>
#include <vector>

#include "ijam/common.hpp"
#include "ijam/rng.hpp"

namespace ijam::chan {

// Sparse departure-angle profile: complex path gain per occupied angle bin.
struct AodProfile {
  int n_bins = 360;
  std::vector<std::pair<int, Cx>> gains;  // sorted by bin index

  bool empty() const { return gains.empty(); }
};

// Complex gain per departure-angle bin for one antenna mode.
struct AntennaPattern {
  int mode_id = 0;
  std::vector<Cx> gain;  // length = n_bins, peak magnitude 1
};

struct ModeSet {
  std::vector<AntennaPattern> patterns;  // mode_ids dense 0..M-1

  int n_modes() const { return static_cast<int>(patterns.size()); }
  int n_bins() const { return patterns.empty() ? 0 : static_cast<int>(patterns[0].gain.size()); }
};

struct RotationSchedule {
  int n_modes = 1;
  int dwell_frames = 1;
  double dwell_seconds = 0.0;

  int mode_of_frame(int frame) const { return (frame / dwell_frames) % n_modes; }
};

// Directional main lobe with raised-cosine magnitude: peak 1 at the steering
// angle, magnitude 0.5 at +-beam_halfwidth_deg, floor elsewhere. Phase varies
// linearly with the angular offset (phase_slope_rad_per_deg, default 0).
AntennaPattern lpda_pattern(double beam_halfwidth_deg, double steering_deg, int n_bins,
                            double sidelobe_floor = 0.05,
                            double phase_slope_rad_per_deg = 0.0);

// M copies of the base pattern steered at k*(360/M) degrees, k = 0..M-1.
ModeSet make_mode_set(const AntennaPattern& base, int m_modes);

// h = sum_theta profile[theta] * pattern[theta]  (bilinear, no conjugation).
Cx csi_from_aod(const AodProfile& profile, const AntennaPattern& pattern);

// Mode dwell = 60/(rpm*M) seconds, quantized to frames (at least one).
RotationSchedule make_rotation_schedule(double rpm, int m_modes, double frame_duration_s,
                                        int n_frames);

// y[i] = h_tx*tx[i] + h_jam*jam[i] + n[i], complex Gaussian noise of the
// given power. jam may be null.
std::vector<Cx> propagate(const std::vector<Cx>& tx, Cx h_tx, const std::vector<Cx>* jam,
                          Cx h_jam, double noise_power, Rng& rng);

// n_paths bins drawn uniformly with pairwise circular separation of at least
// min_separation_deg; path k magnitude gain_decay^k with uniform phase;
// normalized to unit total energy.
AodProfile sample_multipath_profile(Rng& rng, int n_paths, double min_separation_deg,
                                    double gain_decay, int n_bins = 360);

double circular_distance_deg(double a, double b);

}  // namespace ijam::chan

#endif
