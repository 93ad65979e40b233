#include "ijam/csaod.hpp"

#include <algorithm>
#include <cmath>

namespace ijam::csaod {

namespace {

// Hermitian positive (semi)definite solve via Cholesky. Falls back to a tiny
// ridge when a pivot collapses; `degenerate` reports that.
std::vector<Cx> solve_hpd(std::vector<std::vector<Cx>> g, std::vector<Cx> b, bool* degenerate) {
  const size_t n = g.size();
  double trace = 0.0;
  for (size_t i = 0; i < n; ++i) trace += g[i][i].real();
  const double eps = 1e-13 * std::max(trace, 1.0);

  auto attempt = [&](double ridge, std::vector<std::vector<Cx>> a, std::vector<Cx> rhs,
                     std::vector<Cx>* out) -> bool {
    for (size_t i = 0; i < n; ++i) a[i][i] += ridge;
    // in-place Cholesky a = L L^H
    for (size_t j = 0; j < n; ++j) {
      double d = a[j][j].real();
      for (size_t k = 0; k < j; ++k) d -= std::norm(a[j][k]);
      if (d <= eps) return false;
      double l = std::sqrt(d);
      a[j][j] = Cx(l, 0.0);
      for (size_t i = j + 1; i < n; ++i) {
        Cx s = a[i][j];
        for (size_t k = 0; k < j; ++k) s -= a[i][k] * std::conj(a[j][k]);
        a[i][j] = s / l;
      }
    }
    // forward then backward substitution
    for (size_t i = 0; i < n; ++i) {
      Cx s = rhs[i];
      for (size_t k = 0; k < i; ++k) s -= a[i][k] * rhs[k];
      rhs[i] = s / a[i][i].real();
    }
    for (size_t ii = n; ii-- > 0;) {
      Cx s = rhs[ii];
      for (size_t k = ii + 1; k < n; ++k) s -= std::conj(a[k][ii]) * rhs[k];
      rhs[ii] = s / a[ii][ii].real();
    }
    *out = std::move(rhs);
    return true;
  };

  std::vector<Cx> x;
  if (attempt(0.0, g, b, &x)) {
    if (degenerate) *degenerate = false;
    return x;
  }
  if (degenerate) *degenerate = true;
  double ridge = 1e-10 * std::max(trace, 1.0);
  while (!attempt(ridge, g, b, &x)) ridge *= 10.0;
  return x;
}

}  // namespace

Dictionary make_dictionary(const chan::ModeSet& modes, const std::vector<int>& mode_ids) {
  Dictionary d;
  for (int id : mode_ids) {
    require(id >= 0 && id < modes.n_modes(), "mode id out of range");
    d.rows.push_back(modes.patterns[id]);
  }
  return d;
}

std::vector<Cx> support_least_squares(const std::vector<Cx>& y, const Dictionary& dict,
                                      const std::vector<int>& support, bool* degenerate) {
  const size_t k = dict.rows.size();
  const size_t s = support.size();
  require(y.size() == k, "measurement count does not match dictionary rows");
  // Normal equations: G = A^H A, rhs = A^H y with A[r][j] = pattern_r[support_j].
  std::vector<std::vector<Cx>> g(s, std::vector<Cx>(s, Cx(0, 0)));
  std::vector<Cx> rhs(s, Cx(0, 0));
  for (size_t i = 0; i < s; ++i) {
    for (size_t j = 0; j < s; ++j) {
      Cx acc(0, 0);
      for (size_t r = 0; r < k; ++r)
        acc += std::conj(dict.rows[r].gain[support[i]]) * dict.rows[r].gain[support[j]];
      g[i][j] = acc;
    }
    Cx acc(0, 0);
    for (size_t r = 0; r < k; ++r) acc += std::conj(dict.rows[r].gain[support[i]]) * y[r];
    rhs[i] = acc;
  }
  return solve_hpd(std::move(g), std::move(rhs), degenerate);
}

AodEstimate estimate_aod(const std::vector<CsiMeasurement>& meas, const Dictionary& dict,
                         int sparsity, double residual_tol) {
  const int k = dict.n_rows();
  require(!meas.empty(), "no CSI measurements");
  require(static_cast<int>(meas.size()) == k, "measurements do not match dictionary rows");
  require(sparsity >= 1 && sparsity <= k, "sparsity must be in [1, measurement count]");
  const int d = dict.n_bins();

  // Order measurements to the dictionary row order.
  std::vector<Cx> y(k);
  for (int r = 0; r < k; ++r) {
    bool found = false;
    for (const auto& m : meas) {
      if (m.mode_id == dict.rows[r].mode_id) {
        y[r] = m.h;
        found = true;
        break;
      }
    }
    require(found, "measurement missing for a dictionary mode");
  }

  std::vector<double> col_norm(d, 0.0);
  for (int th = 0; th < d; ++th) {
    double e = 0.0;
    for (int r = 0; r < k; ++r) e += std::norm(dict.rows[r].gain[th]);
    col_norm[th] = std::sqrt(e);
  }

  double y_norm = 0.0;
  for (const auto& v : y) y_norm += std::norm(v);
  y_norm = std::sqrt(y_norm);

  AodEstimate est;
  est.profile.n_bins = d;
  std::vector<Cx> residual = y;
  std::vector<int> support;
  std::vector<Cx> coeffs;
  std::vector<char> used(d, 0);

  auto fit_residual_norm = [&](const std::vector<int>& sup, const std::vector<Cx>& c) {
    double e = 0.0;
    for (int r = 0; r < k; ++r) {
      Cx fit(0, 0);
      for (size_t j = 0; j < sup.size(); ++j) fit += dict.rows[r].gain[sup[j]] * c[j];
      e += std::norm(y[r] - fit);
    }
    return std::sqrt(e);
  };

  // Coordinate descent over support bin positions. The dictionary columns are
  // highly coherent (smooth, overlapping beams), so the greedy correlation
  // pick lands a few bins off the true support for multi-path channels; a
  // deterministic multi-scale hill climb on the residual walks each selected
  // bin into the local (here: global, residual-zero) optimum.
  // Exact 1-D minimization per support coordinate, cycled to convergence.
  auto coordinate_descent = [&](std::vector<int>& sup, std::vector<Cx>& c, bool* degen_any,
                                double current) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (size_t j = 0; j < sup.size(); ++j) {
        std::vector<int> trial = sup;
        for (int cand = 0; cand < d; ++cand) {
          bool clash = false;
          for (size_t o = 0; o < sup.size(); ++o) clash = clash || (o != j && sup[o] == cand);
          if (clash || cand == sup[j]) continue;
          trial[j] = cand;
          bool degen = false;
          auto tc = support_least_squares(y, dict, trial, &degen);
          double r = fit_residual_norm(trial, tc);
          if (r < current - 1e-15) {
            sup[j] = cand;
            c = std::move(tc);
            current = r;
            if (degen_any) *degen_any = *degen_any || degen;
            improved = true;
          }
          trial[j] = sup[j];
        }
      }
    }
    return current;
  };

  // Joint coarse rescan of one support pair; escapes minima that no single
  // coordinate move can leave.
  auto pair_escape = [&](std::vector<int>& sup, std::vector<Cx>& c, bool* degen_any,
                         double current) {
    const int stride = 3;
    bool moved = false;
    for (size_t j1 = 0; j1 + 1 < sup.size(); ++j1) {
      for (size_t j2 = j1 + 1; j2 < sup.size(); ++j2) {
        std::vector<int> trial = sup;
        for (int a = 0; a < d; a += stride) {
          for (int b = 0; b < d; b += stride) {
            if (a == b) continue;
            bool clash = false;
            for (size_t o = 0; o < sup.size(); ++o)
              clash = clash || (o != j1 && o != j2 && (sup[o] == a || sup[o] == b));
            if (clash) continue;
            trial[j1] = a;
            trial[j2] = b;
            bool degen = false;
            auto tc = support_least_squares(y, dict, trial, &degen);
            double r = fit_residual_norm(trial, tc);
            if (r < current - 1e-15) {
              sup[j1] = a;
              sup[j2] = b;
              c = std::move(tc);
              current = r;
              if (degen_any) *degen_any = *degen_any || degen;
              moved = true;
            }
          }
        }
        trial = sup;
      }
    }
    return std::pair<double, bool>(current, moved);
  };

  // Joint fine scan of each support pair inside a +-7 bin window; finishes
  // off near-misses the coarse escape leaves behind.
  auto pair_polish = [&](std::vector<int>& sup, std::vector<Cx>& c, bool* degen_any,
                         double current) {
    const int win = 7;
    bool moved = false;
    for (size_t j1 = 0; j1 + 1 < sup.size(); ++j1) {
      for (size_t j2 = j1 + 1; j2 < sup.size(); ++j2) {
        std::vector<int> trial = sup;
        for (int da = -win; da <= win; ++da) {
          for (int db = -win; db <= win; ++db) {
            int a = ((sup[j1] + da) % d + d) % d;
            int b = ((sup[j2] + db) % d + d) % d;
            if (a == b) continue;
            bool clash = false;
            for (size_t o = 0; o < sup.size(); ++o)
              clash = clash || (o != j1 && o != j2 && (sup[o] == a || sup[o] == b));
            if (clash) continue;
            trial[j1] = a;
            trial[j2] = b;
            bool degen = false;
            auto tc = support_least_squares(y, dict, trial, &degen);
            double r = fit_residual_norm(trial, tc);
            if (r < current - 1e-15) {
              sup[j1] = a;
              sup[j2] = b;
              c = std::move(tc);
              current = r;
              if (degen_any) *degen_any = *degen_any || degen;
              moved = true;
            }
          }
        }
        trial = sup;
      }
    }
    return std::pair<double, bool>(current, moved);
  };

  auto refine_support = [&](std::vector<int>& sup, std::vector<Cx>& c, bool* degen_any) {
    double current = fit_residual_norm(sup, c);
    for (int round = 0; round < 3; ++round) {
      current = coordinate_descent(sup, c, degen_any, current);
      if (current <= residual_tol * y_norm) break;
      auto [coarse, moved1] = pair_escape(sup, c, degen_any, current);
      auto [fine, moved2] = pair_polish(sup, c, degen_any, coarse);
      current = fine;
      if (!moved1 && !moved2) break;
    }
    return current;
  };

  double r_norm = y_norm;
  while (static_cast<int>(support.size()) < sparsity && r_norm > residual_tol * y_norm) {
    // Correlate normalized columns against the residual; ties take the
    // lowest bin because the comparison is strict.
    int best = -1;
    double best_c = 0.0;
    for (int th = 0; th < d; ++th) {
      if (used[th] || col_norm[th] <= 0.0) continue;
      Cx acc(0, 0);
      for (int r = 0; r < k; ++r) acc += std::conj(dict.rows[r].gain[th]) * residual[r];
      double c = std::abs(acc) / col_norm[th];
      if (c > best_c) {
        best_c = c;
        best = th;
      }
    }
    if (best < 0 || best_c <= 0.0) break;
    used[best] = 1;
    support.push_back(best);

    bool degen = false;
    coeffs = support_least_squares(y, dict, support, &degen);
    est.degenerate_solve = est.degenerate_solve || degen;
    r_norm = refine_support(support, coeffs, &est.degenerate_solve);

    std::fill(used.begin(), used.end(), 0);
    for (int b : support) used[b] = 1;
    for (int r = 0; r < k; ++r) {
      Cx fit(0, 0);
      for (size_t j = 0; j < support.size(); ++j)
        fit += dict.rows[r].gain[support[j]] * coeffs[j];
      residual[r] = y[r] - fit;
    }
    ++est.iterations;
  }

  std::vector<std::pair<int, Cx>> entries;
  for (size_t j = 0; j < support.size(); ++j) entries.emplace_back(support[j], coeffs[j]);
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  est.profile.gains = std::move(entries);
  est.residual_norm = r_norm;
  return est;
}

Cx predict_csi(const chan::AodProfile& profile, const chan::AntennaPattern& pattern) {
  return chan::csi_from_aod(profile, pattern);
}

Precoder compute_precoder(const std::vector<Cx>& predicted, double power_clamp) {
  require(!predicted.empty(), "need at least one predicted CSI");
  require(power_clamp > 0.0, "power clamp must be positive");
  Precoder p;
  p.power_clamp = power_clamp;
  p.w.reserve(predicted.size());
  p.unusable.reserve(predicted.size());
  for (const Cx& h : predicted) {
    if (h == Cx(0.0, 0.0)) {
      p.w.push_back(Cx(power_clamp, 0.0));
      p.unusable.push_back(true);
      continue;
    }
    Cx w = Cx(1.0, 0.0) / h;
    bool clamped = false;
    double mag = std::abs(w);
    if (mag > power_clamp) {
      w *= power_clamp / mag;
      clamped = true;
    }
    p.w.push_back(w);
    p.unusable.push_back(clamped);
  }
  return p;
}

std::vector<Cx> apply_precoder(const std::vector<Cx>& frame, Cx w) {
  std::vector<Cx> out(frame.size());
  for (size_t i = 0; i < frame.size(); ++i) out[i] = frame[i] * w;
  return out;
}

}  // namespace ijam::csaod
