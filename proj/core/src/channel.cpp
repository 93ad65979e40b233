#include "ijam/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ijam::chan {

double circular_distance_deg(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

AntennaPattern lpda_pattern(double beam_halfwidth_deg, double steering_deg, int n_bins,
                            double sidelobe_floor, double phase_slope_rad_per_deg) {
  require(beam_halfwidth_deg > 0.0 && beam_halfwidth_deg < 180.0,
          "beam halfwidth must be in (0, 180) degrees");
  require(n_bins > 0, "n_bins must be positive");
  require(sidelobe_floor >= 0.0 && sidelobe_floor < 1.0, "sidelobe floor must be in [0, 1)");

  AntennaPattern p;
  p.gain.resize(n_bins);
  const double bin_deg = 360.0 / n_bins;
  for (int i = 0; i < n_bins; ++i) {
    double angle = i * bin_deg;
    double off = std::fmod(angle - steering_deg, 360.0);
    if (off > 180.0) off -= 360.0;
    if (off < -180.0) off += 360.0;
    // Raised cosine: 1 at the peak, 0.5 at +-halfwidth, 0 at +-2*halfwidth.
    double mag = sidelobe_floor;
    if (std::fabs(off) < 2.0 * beam_halfwidth_deg) {
      double rc = 0.5 * (1.0 + std::cos(kPi * off / (2.0 * beam_halfwidth_deg)));
      mag = std::max(mag, rc);
    }
    double phase = phase_slope_rad_per_deg * off;
    p.gain[i] = Cx(mag * std::cos(phase), mag * std::sin(phase));
  }
  return p;
}

ModeSet make_mode_set(const AntennaPattern& base, int m_modes) {
  require(m_modes >= 2, "mode count must be at least 2");
  const int n_bins = static_cast<int>(base.gain.size());
  require(n_bins > 0, "base pattern is empty");
  ModeSet set;
  set.patterns.reserve(m_modes);
  for (int m = 0; m < m_modes; ++m) {
    AntennaPattern p;
    p.mode_id = m;
    p.gain.resize(n_bins);
    // Steering by k*(360/M) degrees = circular shift of the base pattern.
    // Non-integer bin shifts fall back to nearest-bin rotation.
    double shift_bins = static_cast<double>(m) * n_bins / m_modes;
    int s = static_cast<int>(std::llround(shift_bins)) % n_bins;
    for (int i = 0; i < n_bins; ++i) {
      p.gain[i] = base.gain[((i - s) % n_bins + n_bins) % n_bins];
    }
    set.patterns.push_back(std::move(p));
  }
  return set;
}

Cx csi_from_aod(const AodProfile& profile, const AntennaPattern& pattern) {
  require(profile.n_bins == static_cast<int>(pattern.gain.size()),
          "profile and pattern bin counts differ");
  Cx h(0.0, 0.0);
  for (const auto& [bin, g] : profile.gains) {
    require(bin >= 0 && bin < profile.n_bins, "profile bin out of range");
    h += g * pattern.gain[bin];
  }
  return h;
}

RotationSchedule make_rotation_schedule(double rpm, int m_modes, double frame_duration_s,
                                        int n_frames) {
  require(rpm > 0.0, "rpm must be positive");
  if (rpm < 1.0 || rpm > 5.0) {
    std::fprintf(stderr, "warning: rotation rate %.3g RPM is outside the motor's 1-5 RPM range\n",
                 rpm);
  }
  require(m_modes >= 1, "mode count must be at least 1");
  require(frame_duration_s > 0.0, "frame duration must be positive");
  require(n_frames >= 0, "frame count must be non-negative");
  RotationSchedule sched;
  sched.n_modes = m_modes;
  sched.dwell_seconds = 60.0 / (rpm * m_modes);
  sched.dwell_frames =
      std::max<long long>(1, std::llround(sched.dwell_seconds / frame_duration_s));
  (void)n_frames;  // cyclic assignment covers any frame count
  return sched;
}

std::vector<Cx> propagate(const std::vector<Cx>& tx, Cx h_tx, const std::vector<Cx>* jam,
                          Cx h_jam, double noise_power, Rng& rng) {
  require(noise_power >= 0.0, "noise power must be non-negative");
  if (jam) require(jam->size() == tx.size(), "jam frame length mismatch");
  std::vector<Cx> y(tx.size());
  for (size_t i = 0; i < tx.size(); ++i) {
    Cx v = h_tx * tx[i];
    if (jam) v += h_jam * (*jam)[i];
    if (noise_power > 0.0) v += rng.cx_gaussian(noise_power);
    y[i] = v;
  }
  return y;
}

AodProfile sample_multipath_profile(Rng& rng, int n_paths, double min_separation_deg,
                                    double gain_decay, int n_bins) {
  require(n_paths >= 1, "need at least one path");
  require(gain_decay > 0.0, "gain decay must be positive");
  require(n_paths * min_separation_deg < 360.0, "separation constraint infeasible");
  const double bin_deg = 360.0 / n_bins;

  std::vector<int> bins;
  const int kMaxAttempts = 100000;
  int attempts = 0;
  while (static_cast<int>(bins.size()) < n_paths) {
    if (++attempts > kMaxAttempts)
      throw std::runtime_error("multipath sampling failed to satisfy separation");
    int cand = static_cast<int>(rng.integer(n_bins));
    bool ok = true;
    for (int b : bins) {
      if (circular_distance_deg(cand * bin_deg, b * bin_deg) < min_separation_deg) {
        ok = false;
        break;
      }
    }
    if (ok) bins.push_back(cand);
  }

  AodProfile profile;
  profile.n_bins = n_bins;
  double energy = 0.0;
  std::vector<Cx> gains(n_paths);
  for (int k = 0; k < n_paths; ++k) {
    double mag = std::pow(gain_decay, k);
    double phase = 2.0 * kPi * rng.uniform();
    gains[k] = Cx(mag * std::cos(phase), mag * std::sin(phase));
    energy += mag * mag;
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (int k = 0; k < n_paths; ++k) {
    profile.gains.emplace_back(bins[k], gains[k] * scale);
  }
  std::sort(profile.gains.begin(), profile.gains.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return profile;
}

}  // namespace ijam::chan
