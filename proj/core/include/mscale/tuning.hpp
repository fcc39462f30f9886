#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mscale/processes.hpp"

namespace mscale {

struct TailIndexOptions {
  /// Refine the quantile estimate by maximising the symmetric stable
  /// likelihood over a coarse alpha grid around it.
  bool refine_ml = false;
};

struct TailIndexEstimate {
  double alpha = 2.0;
  double scale = 1.0;         // quantile-based scale estimate
  double nu_alpha = 0.0;      // (x95 - x05) / (x75 - x25)
  double nu_beta = 0.0;       // (x95 + x05 - 2 x50) / (x95 - x05)
  bool small_sample = false;  // fewer than 500 observations; alpha is the 1.25 fallback
  bool refined = false;
};

/// Stability index of the return distribution by McCulloch's quantile
/// method, clamped to [0.5, 2].
TailIndexEstimate estimate_tail_index(std::span<const double> returns, const TailIndexOptions& options = {});

/// Density of the symmetric alpha-stable law with unit scale
/// (characteristic function exp(-|t|^alpha)).
double symmetric_stable_pdf(double x, double alpha);

/// Linear-interpolated empirical quantile (type 7).
double empirical_quantile(std::span<const double> sorted, double p);

/// {step, 2 step, ...} up to q_max inclusive.
std::vector<double> q_grid_up_to(double q_max, double step = 0.1);

/// Moment grid for a tail index: q_max = safety * alpha. Throws if fewer than
/// 5 points would result.
std::vector<double> select_q_range(double alpha, double safety = 0.8, double step = 0.1);

struct TauSelection {
  int tau_max = 0;
  std::vector<std::pair<int, double>> candidates;  // (tau_max, min_q R^2)
  double threshold = 0.98;
  bool below_threshold = false;
};

/// Largest candidate whose worst per-q R^2 over tau = 1..candidate reaches the
/// threshold; otherwise the best candidate, flagged.
TauSelection select_tau_max(std::span<const double> path, std::span<const double> qs,
                            std::span<const int> candidates, double threshold = 0.98);

/// {5, 10, 15, 20, 30, 50, 75, 100, 150, 200, 250} restricted to [5, n / 10].
std::vector<int> default_tau_candidates(std::size_t n);

struct TuningOptions {
  double safety = 0.8;
  double threshold = 0.98;
  double q_step = 0.1;
  std::vector<int> tau_candidates;  // empty: default_tau_candidates(n)
  TailIndexOptions tail;
};

struct TuningResult {
  double alpha_stable = 2.0;
  double alpha_safe = 1.6;
  double safety = 0.8;
  double q_max = 1.6;
  std::vector<double> qs;
  int tau_max = 0;
  std::vector<int> taus;
  std::vector<std::pair<int, double>> tau_candidates;
  double threshold = 0.98;
  bool below_threshold = false;
  bool tail_small_sample = false;
  bool q1_inserted = false;  // q = 1 added because q_max < 1
};

/// Tail index, moment grid (always containing q = 1) and scale range for a path.
TuningResult tune(const PathSeries& path, const TuningOptions& options = {});

}  // namespace mscale
