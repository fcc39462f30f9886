#include "mscale/tuning.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mscale/error.hpp"
#include "mscale/ghe.hpp"

namespace mscale {
namespace {

constexpr double kPi = std::numbers::pi;

// McCulloch (1986), table III: alpha as a function of (nu_alpha, |nu_beta|).
constexpr std::array<double, 15> kNuAlpha = {2.439, 2.5, 2.6, 2.7, 2.8, 3.0, 3.2, 3.5,
                                             4.0,   5.0, 6.0, 8.0, 10.0, 15.0, 25.0};
constexpr std::array<double, 7> kNuBeta = {0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
constexpr std::array<std::array<double, 7>, 15> kAlphaTable = {{
    {2.000, 2.000, 2.000, 2.000, 2.000, 2.000, 2.000},
    {1.916, 1.924, 1.924, 1.924, 1.924, 1.924, 1.924},
    {1.808, 1.813, 1.829, 1.829, 1.829, 1.829, 1.829},
    {1.729, 1.730, 1.737, 1.745, 1.745, 1.745, 1.745},
    {1.664, 1.663, 1.663, 1.668, 1.676, 1.676, 1.676},
    {1.563, 1.560, 1.553, 1.548, 1.547, 1.547, 1.547},
    {1.484, 1.480, 1.471, 1.460, 1.448, 1.438, 1.438},
    {1.391, 1.386, 1.378, 1.364, 1.337, 1.318, 1.318},
    {1.279, 1.273, 1.266, 1.250, 1.210, 1.184, 1.150},
    {1.128, 1.121, 1.114, 1.101, 1.067, 1.027, 0.973},
    {1.029, 1.021, 1.014, 1.004, 0.974, 0.935, 0.874},
    {0.896, 0.892, 0.884, 0.883, 0.855, 0.823, 0.769},
    {0.818, 0.812, 0.806, 0.801, 0.780, 0.756, 0.691},
    {0.698, 0.695, 0.692, 0.689, 0.676, 0.656, 0.597},
    {0.593, 0.590, 0.588, 0.586, 0.579, 0.563, 0.513},
}};

// Table V, beta = 0 column: nu_c = (x75 - x25) / scale, for alpha = 0.5..2.0.
constexpr std::array<double, 16> kNuCAlpha = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2,
                                              1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
constexpr std::array<double, 16> kNuC = {2.588, 2.337, 2.189, 2.098, 2.040, 2.000, 1.980, 1.965,
                                         1.955, 1.946, 1.939, 1.933, 1.927, 1.921, 1.914, 1.908};

template <std::size_t N>
std::pair<std::size_t, double> bracket(const std::array<double, N>& axis, double value) {
  if (value <= axis.front()) return {0, 0.0};
  if (value >= axis.back()) return {N - 2, 1.0};
  const auto upper = static_cast<std::size_t>(std::upper_bound(axis.begin(), axis.end(), value) - axis.begin());
  const std::size_t lo = upper - 1;
  return {lo, (value - axis[lo]) / (axis[lo + 1] - axis[lo])};
}

double mcculloch_alpha(double nu_alpha, double nu_beta) {
  if (nu_alpha < kNuAlpha.front()) return 2.0;
  const auto [i, ta] = bracket(kNuAlpha, nu_alpha);
  const auto [j, tb] = bracket(kNuBeta, std::abs(nu_beta));
  const double a00 = kAlphaTable[i][j];
  const double a01 = kAlphaTable[i][j + 1];
  const double a10 = kAlphaTable[i + 1][j];
  const double a11 = kAlphaTable[i + 1][j + 1];
  return (1 - ta) * ((1 - tb) * a00 + tb * a01) + ta * ((1 - tb) * a10 + tb * a11);
}

double nu_c_symmetric(double alpha) {
  const auto [i, t] = bracket(kNuCAlpha, alpha);
  return (1 - t) * kNuC[i] + t * kNuC[i + 1];
}

// Log-density table of the standardised symmetric stable law on |z|, with
// the power-law tail beyond the last node.
class StableLogDensity {
 public:
  explicit StableLogDensity(double alpha) : alpha_(alpha) {
    constexpr int kNodes = 240;
    constexpr double kUMax = 7.0;  // asinh(z) up to ~550
    nodes_.resize(kNodes + 1);
    log_pdf_.resize(kNodes + 1);
    for (int k = 0; k <= kNodes; ++k) {
      const double u = kUMax * k / kNodes;
      nodes_[static_cast<std::size_t>(k)] = u;
      log_pdf_[static_cast<std::size_t>(k)] = std::log(std::max(symmetric_stable_pdf(std::sinh(u), alpha), 1e-300));
    }
    z_max_ = std::sinh(kUMax);
    if (alpha < 2.0) {
      tail_log_const_ = std::log(alpha * std::tgamma(alpha) * std::sin(kPi * alpha / 2.0) / kPi);
    }
  }

  double operator()(double z) const {
    const double az = std::abs(z);
    if (az >= z_max_) {
      if (alpha_ >= 2.0) return -0.25 * az * az - 0.5 * std::log(4.0 * kPi);
      return tail_log_const_ - (1.0 + alpha_) * std::log(az);
    }
    const double u = std::asinh(az);
    const double pos = u / nodes_[1];
    const auto k = std::min(static_cast<std::size_t>(pos), nodes_.size() - 2);
    const double t = pos - static_cast<double>(k);
    return (1 - t) * log_pdf_[k] + t * log_pdf_[k + 1];
  }

 private:
  double alpha_;
  double z_max_ = 0.0;
  double tail_log_const_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> log_pdf_;
};

double refine_alpha_ml(std::span<const double> sorted, double alpha0, double scale, double location) {
  double best_alpha = alpha0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int k = -4; k <= 4; ++k) {
    const double alpha = alpha0 + 0.05 * k;
    if (alpha < 0.5 || alpha > 2.0) continue;
    const StableLogDensity log_pdf(alpha);
    double ll = 0.0;
    for (double x : sorted) ll += log_pdf((x - location) / scale);
    if (ll > best_ll) {
      best_ll = ll;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

}  // namespace

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("empirical_quantile: empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double symmetric_stable_pdf(double x, double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("stable pdf: alpha must lie in (0, 2]");
  x = std::abs(x);
  if (alpha == 2.0) return std::exp(-x * x / 4.0) / std::sqrt(4.0 * kPi);
  if (alpha == 1.0) return 1.0 / (kPi * (1.0 + x * x));
  if (x < 1e-8) return std::tgamma(1.0 + 1.0 / alpha) / kPi;
  // Zolotarev's integral representation, beta = 0.
  const double am1 = alpha - 1.0;
  const double expo = alpha / am1;
  const double c = std::pow(x, expo);
  auto v = [&](double theta) {
    return std::pow(std::cos(theta) / std::sin(alpha * theta), expo) * std::cos(am1 * theta) / std::cos(theta);
  };
  auto integrand = [&](double theta) {
    const double vt = v(theta);
    if (!std::isfinite(vt)) return 0.0;
    const double e = c * vt;
    return e > 700.0 ? 0.0 : vt * std::exp(-e);
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, kPi / 2.0, 20, 1e-11);
  return alpha * std::pow(x, 1.0 / am1) / (kPi * std::abs(am1)) * integral;
}

TailIndexEstimate estimate_tail_index(std::span<const double> returns, const TailIndexOptions& options) {
  for (double r : returns) {
    if (!std::isfinite(r)) throw InvalidArgument("estimate_tail_index: non-finite input");
  }
  TailIndexEstimate est;
  if (returns.size() < 500) {
    est.alpha = 1.25;
    est.small_sample = true;
    return est;
  }
  std::vector<double> sorted(returns.begin(), returns.end());
  std::sort(sorted.begin(), sorted.end());
  const double x05 = empirical_quantile(sorted, 0.05);
  const double x25 = empirical_quantile(sorted, 0.25);
  const double x50 = empirical_quantile(sorted, 0.50);
  const double x75 = empirical_quantile(sorted, 0.75);
  const double x95 = empirical_quantile(sorted, 0.95);
  const double iqr = x75 - x25;
  if (!(iqr > 0.0) || !(x95 - x05 > 0.0)) throw DegenerateInput("estimate_tail_index: zero interquartile range");
  est.nu_alpha = (x95 - x05) / iqr;
  est.nu_beta = (x95 + x05 - 2.0 * x50) / (x95 - x05);
  est.alpha = std::clamp(mcculloch_alpha(est.nu_alpha, est.nu_beta), 0.5, 2.0);
  est.scale = iqr / nu_c_symmetric(est.alpha);
  if (options.refine_ml) {
    est.alpha = std::clamp(refine_alpha_ml(sorted, est.alpha, est.scale, x50), 0.5, 2.0);
    est.refined = true;
  }
  return est;
}

std::vector<double> q_grid_up_to(double q_max, double step) {
  if (!(step > 0.0)) throw InvalidArgument("q grid step must be > 0");
  const auto count = static_cast<int>(std::floor(q_max / step + 1e-9));
  const double inv = std::round(1.0 / step);
  const bool decimal = std::abs(inv - 1.0 / step) < 1e-9;
  std::vector<double> qs;
  for (int k = 1; k <= count; ++k) qs.push_back(decimal ? k / inv : k * step);
  return qs;
}

std::vector<double> select_q_range(double alpha, double safety, double step) {
  if (!(alpha >= 0.5 && alpha <= 2.0)) throw InvalidArgument("select_q_range: alpha must lie in [0.5, 2]");
  if (!(safety > 0.0)) throw InvalidArgument("select_q_range: safety must be > 0");
  auto qs = q_grid_up_to(safety * alpha, step);
  if (qs.size() < 5) throw InvalidArgument("select_q_range: fewer than 5 moment orders (q_max too small)");
  return qs;
}

std::vector<int> default_tau_candidates(std::size_t n) {
  static constexpr std::array<int, 11> kCandidates = {5, 10, 15, 20, 30, 50, 75, 100, 150, 200, 250};
  std::vector<int> out;
  for (int c : kCandidates) {
    if (static_cast<std::size_t>(c) * 10 <= n) out.push_back(c);
  }
  return out;
}

TauSelection select_tau_max(std::span<const double> path, std::span<const double> qs,
                            std::span<const int> candidates, double threshold) {
  if (candidates.empty()) throw InvalidArgument("select_tau_max: no candidates");
  if (!(threshold >= 0.0 && threshold < 1.0)) throw InvalidArgument("select_tau_max: threshold must lie in [0, 1)");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] < 5) throw InvalidArgument("select_tau_max: candidates must be >= 5");
    if (static_cast<std::size_t>(candidates[i]) * 10 > path.size()) {
      throw InvalidArgument("select_tau_max: candidate exceeds length / 10");
    }
    if (i > 0 && candidates[i] <= candidates[i - 1]) {
      throw InvalidArgument("select_tau_max: candidates must be strictly increasing");
    }
  }

  const auto all_taus = tau_range(candidates.back());
  const MomentGrid full = structure_function(path, all_taus, qs);

  TauSelection sel;
  sel.threshold = threshold;
  int best = candidates.front();
  double best_r2 = -1.0;
  int chosen = 0;
  for (int candidate : candidates) {
    MomentGrid sub;
    sub.taus.assign(all_taus.begin(), all_taus.begin() + candidate);
    sub.qs = full.qs;
    sub.xi.assign(full.xi.begin(), full.xi.begin() + static_cast<std::ptrdiff_t>(candidate * full.qs.size()));
    double r2_min = 1.0;
    for (const auto& e : fit_hq(normalize_standardize(sub))) r2_min = std::min(r2_min, e.r2);
    sel.candidates.emplace_back(candidate, r2_min);
    if (r2_min >= threshold) chosen = candidate;
    if (r2_min > best_r2) {
      best_r2 = r2_min;
      best = candidate;
    }
  }
  if (chosen > 0) {
    sel.tau_max = chosen;
  } else {
    sel.tau_max = best;
    sel.below_threshold = true;
  }
  return sel;
}

TuningResult tune(const PathSeries& path, const TuningOptions& options) {
  const auto returns = path.increments();
  const auto tail = estimate_tail_index(returns, options.tail);

  TuningResult result;
  result.alpha_stable = tail.alpha;
  result.tail_small_sample = tail.small_sample;
  result.safety = options.safety;
  result.alpha_safe = options.safety * tail.alpha;
  result.q_max = std::clamp(result.alpha_safe, 0.5, 2.0);
  result.qs = q_grid_up_to(result.q_max, options.q_step);
  if (result.qs.size() < 2) throw InvalidArgument("tune: q grid has fewer than 2 points");
  const bool has_one = std::any_of(result.qs.begin(), result.qs.end(), [](double q) { return std::abs(q - 1.0) < 1e-9; });
  if (!has_one) {
    result.qs.insert(std::upper_bound(result.qs.begin(), result.qs.end(), 1.0), 1.0);
    result.q1_inserted = true;
  }

  auto candidates = options.tau_candidates.empty() ? default_tau_candidates(path.size()) : options.tau_candidates;
  if (candidates.empty()) throw InvalidArgument("tune: path too short for any tau candidate (need n >= 50)");
  const auto sel = select_tau_max(path.values, result.qs, candidates, options.threshold);
  result.tau_max = sel.tau_max;
  result.taus = tau_range(sel.tau_max);
  result.tau_candidates = sel.candidates;
  result.threshold = sel.threshold;
  result.below_threshold = sel.below_threshold;
  return result;
}

}  // namespace mscale
