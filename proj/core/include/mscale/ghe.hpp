#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mscale {

/// Raw or standardised moments of lagged absolute increments, one row per lag.
struct MomentGrid {
  std::vector<int> taus;    // strictly increasing, >= 1
  std::vector<double> qs;   // strictly increasing, > 0
  std::vector<double> xi;   // row-major, taus.size() x qs.size()

  double at(std::size_t tau_index, std::size_t q_index) const { return xi[tau_index * qs.size() + q_index]; }
  double& at(std::size_t tau_index, std::size_t q_index) { return xi[tau_index * qs.size() + q_index]; }
};

/// One point of the generalised Hurst curve.
struct HqEstimate {
  double q = 0.0;
  double hq = 0.0;
  double hq_se = 0.0;
  double r2 = 0.0;
};

/// Weighted line H(q) = A + B q.
struct MultiscalingFit {
  double A = 0.0;
  double B = 0.0;
  double B_se = 0.0;
};

struct GheResult {
  std::vector<HqEstimate> curve;
  std::optional<MultiscalingFit> fit;  // present iff curve has >= 2 points
  std::vector<int> taus;
  std::vector<double> qs;

  /// H(q) for a q on the grid; throws if q is absent.
  double hq_at(double q) const;
  double min_r2() const;
};

/// Sample moments over non-overlapping windows:
///   xi(tau, q) = mean_{i < N_tau} |X((i+1) tau) - X(i tau)|^q,  N_tau = floor(len / tau) - 1.
/// Throws DegenerateInput if any moment is zero.
MomentGrid structure_function(std::span<const double> path, std::span<const int> taus,
                              std::span<const double> qs);

/// (xi(tau, q) / xi(1, q))^{1/q}. Requires tau = 1 on the grid.
MomentGrid normalize_standardize(const MomentGrid& grid);

/// Per-q zero-intercept regression of log xi on log tau.
std::vector<HqEstimate> fit_hq(const MomentGrid& standardized);

/// Diagnostic only: intercept regression on the raw (unstandardised) grid,
/// H(q) = slope / q with n - 2 degrees of freedom. Never used by the tests.
std::vector<HqEstimate> fit_hq_with_intercept(const MomentGrid& raw);

/// Weighted least squares with w_j = 1 / hq_se^2.
MultiscalingFit fit_multiscaling_proxy(std::span<const HqEstimate> curve);

/// Full estimator: structure function, standardisation, per-q fit and line.
GheResult estimate_ghe(std::span<const double> path, std::span<const int> taus, std::span<const double> qs);

/// {1, 2, ..., tau_max}.
std::vector<int> tau_range(int tau_max);

}  // namespace mscale
