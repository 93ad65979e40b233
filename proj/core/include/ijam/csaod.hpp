#ifndef IJAM_CSAOD_HPP
#define IJAM_CSAOD_HPP

#include <vector>

#include "ijam/channel.hpp"
#include "ijam/common.hpp"

namespace ijam::csaod {

// Sensing matrix of the sparse-recovery problem: row k is the pattern gain
// vector of the k-th training mode. Column theta is the response of all
// training modes to a unit path at bin theta.
struct Dictionary {
  std::vector<chan::AntennaPattern> rows;

  int n_bins() const { return rows.empty() ? 0 : static_cast<int>(rows[0].gain.size()); }
  int n_rows() const { return static_cast<int>(rows.size()); }
};

Dictionary make_dictionary(const chan::ModeSet& modes, const std::vector<int>& mode_ids);

struct CsiMeasurement {
  int mode_id = 0;
  Cx h{0.0, 0.0};
};

struct AodEstimate {
  chan::AodProfile profile;
  double residual_norm = 0.0;
  bool degenerate_solve = false;  // support solve was rank deficient
  int iterations = 0;
};

// Orthogonal matching pursuit over the dictionary columns: pick the column
// most correlated with the residual (normalized, ties to the lowest bin),
// re-solve least squares on the support, stop at `sparsity` atoms or when the
// residual drops below residual_tol times the measurement norm.
AodEstimate estimate_aod(const std::vector<CsiMeasurement>& meas, const Dictionary& dict,
                         int sparsity, double residual_tol);

// Same bilinear form as chan::csi_from_aod, applied to an estimated profile.
Cx predict_csi(const chan::AodProfile& profile, const chan::AntennaPattern& pattern);

struct Precoder {
  std::vector<Cx> w;            // per mode_id
  std::vector<bool> unusable;   // clamp engaged or zero prediction
  double power_clamp = 10.0;
};

// Zero-forcing per mode: w = 1/h, magnitude clamped preserving phase.
Precoder compute_precoder(const std::vector<Cx>& predicted, double power_clamp);

std::vector<Cx> apply_precoder(const std::vector<Cx>& frame, Cx w);

// Least squares for the selected support, shared with tests that run
// exhaustive support searches. Returns coefficients for min ||A c - y||
// where A has meas.size() rows and one column per support bin.
std::vector<Cx> support_least_squares(const std::vector<Cx>& y, const Dictionary& dict,
                                      const std::vector<int>& support, bool* degenerate);

}  // namespace ijam::csaod

#endif
