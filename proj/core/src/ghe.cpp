#include "mscale/ghe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mscale/error.hpp"

namespace mscale {
namespace {

constexpr double kSeFloor = 1e-12;

void check_axes(std::span<const int> taus, std::span<const double> qs) {
  if (taus.empty() || qs.empty()) throw InvalidArgument("moment grid needs at least one tau and one q");
  if (taus.front() < 1) throw InvalidArgument("taus must be >= 1");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (taus[i] <= taus[i - 1]) throw InvalidArgument("taus must be strictly increasing");
  }
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!(qs[i] > 0.0) || !std::isfinite(qs[i])) throw InvalidArgument("qs must be positive and finite");
    if (i > 0 && qs[i] <= qs[i - 1]) throw InvalidArgument("qs must be strictly increasing");
  }
}

// If every q is an integer multiple k_j of a common step, |d|^q can be built
// by repeated multiplication of |d|^step. Returns the multiples, or empty.
std::vector<int> ladder_multiples(std::span<const double> qs) {
  const double step = qs.front();
  std::vector<int> multiples;
  multiples.reserve(qs.size());
  for (double q : qs) {
    const double ratio = q / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || rounded > 64.0 || std::abs(ratio - rounded) > 1e-9) return {};
    multiples.push_back(static_cast<int>(rounded));
  }
  return multiples;
}

}  // namespace

double GheResult::hq_at(double q) const {
  for (const auto& e : curve) {
    if (std::abs(e.q - q) < 1e-9) return e.hq;
  }
  throw InvalidArgument("q = " + std::to_string(q) + " is not on the GHE grid");
}

double GheResult::min_r2() const {
  double r2 = 1.0;
  for (const auto& e : curve) r2 = std::min(r2, e.r2);
  return r2;
}

MomentGrid structure_function(std::span<const double> path, std::span<const int> taus,
                              std::span<const double> qs) {
  check_axes(taus, qs);
  const std::size_t len = path.size();
  if (static_cast<std::size_t>(taus.back()) * 2 > len) {
    throw InvalidArgument("structure_function: max(tau) * 2 exceeds path length");
  }
  for (double v : path) {
    if (!std::isfinite(v)) throw InvalidArgument("structure_function: non-finite path value");
  }

  MomentGrid grid{{taus.begin(), taus.end()}, {qs.begin(), qs.end()}, std::vector<double>(taus.size() * qs.size())};
  const auto multiples = ladder_multiples(qs);
  const int top = multiples.empty() ? 0 : multiples.back();
  std::vector<double> sums(qs.size());
  std::vector<double> powers(static_cast<std::size_t>(top) + 1);

  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    const auto tau = static_cast<std::size_t>(taus[ti]);
    const std::size_t count = len / tau - 1;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
      const double d = std::abs(path[(i + 1) * tau] - path[i * tau]);
      if (d == 0.0) continue;
      if (!multiples.empty()) {
        const double base = std::pow(d, qs.front());
        powers[1] = base;
        for (int k = 2; k <= top; ++k) powers[k] = powers[k - 1] * base;
        for (std::size_t qi = 0; qi < qs.size(); ++qi) sums[qi] += powers[multiples[qi]];
      } else {
        const double log_d = std::log(d);
        for (std::size_t qi = 0; qi < qs.size(); ++qi) sums[qi] += std::exp(qs[qi] * log_d);
      }
    }
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      const double value = sums[qi] / static_cast<double>(count);
      if (!(value > 0.0)) {
        throw DegenerateInput("degenerate input: zero moment at tau = " + std::to_string(tau));
      }
      grid.at(ti, qi) = value;
    }
  }
  return grid;
}

MomentGrid normalize_standardize(const MomentGrid& grid) {
  const auto it = std::find(grid.taus.begin(), grid.taus.end(), 1);
  if (it == grid.taus.end()) throw InvalidArgument("normalize_standardize: tau = 1 absent from grid");
  const auto base_row = static_cast<std::size_t>(it - grid.taus.begin());
  MomentGrid out = grid;
  for (std::size_t qi = 0; qi < grid.qs.size(); ++qi) {
    const double base = grid.at(base_row, qi);
    if (!(base > 0.0)) throw DegenerateInput("degenerate input: zero moment at tau = 1");
    const double inv_q = 1.0 / grid.qs[qi];
    for (std::size_t ti = 0; ti < grid.taus.size(); ++ti) {
      out.at(ti, qi) = ti == base_row ? 1.0 : std::pow(grid.at(ti, qi) / base, inv_q);
    }
  }
  return out;
}

std::vector<HqEstimate> fit_hq(const MomentGrid& grid) {
  const std::size_t n = grid.taus.size();
  if (n < 3) throw InvalidArgument("fit_hq: need at least 3 tau points");
  std::vector<double> x(n);
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(static_cast<double>(grid.taus[i]));
    sxx += x[i] * x[i];
  }
  std::vector<HqEstimate> out;
  out.reserve(grid.qs.size());
  std::vector<double> y(n);
  for (std::size_t qi = 0; qi < grid.qs.size(); ++qi) {
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double value = grid.at(i, qi);
      if (!(value > 0.0)) throw DegenerateInput("fit_hq: non-positive standardised moment");
      y[i] = std::log(value);
      sxy += x[i] * y[i];
      syy += y[i] * y[i];
    }
    const double h = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - h * x[i];
      ssr += r * r;
    }
    const double se = std::max(kSeFloor, std::sqrt(ssr / (static_cast<double>(n - 1) * sxx)));
    double r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    r2 = std::clamp(r2, 0.0, 1.0);
    out.push_back({grid.qs[qi], h, se, r2});
  }
  return out;
}

std::vector<HqEstimate> fit_hq_with_intercept(const MomentGrid& raw) {
  const std::size_t n = raw.taus.size();
  if (n < 3) throw InvalidArgument("fit_hq_with_intercept: need at least 3 tau points");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::log(static_cast<double>(raw.taus[i]));
  const double x_bar = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0;
  for (double xi : x) sxx += (xi - x_bar) * (xi - x_bar);

  std::vector<HqEstimate> out;
  std::vector<double> y(n);
  for (std::size_t qi = 0; qi < raw.qs.size(); ++qi) {
    const double q = raw.qs[qi];
    for (std::size_t i = 0; i < n; ++i) y[i] = std::log(raw.at(i, qi));
    const double y_bar = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (x[i] - x_bar) * (y[i] - y_bar);
      syy += (y[i] - y_bar) * (y[i] - y_bar);
    }
    const double slope = sxy / sxx;
    const double intercept = y_bar - slope * x_bar;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (slope * x[i] + intercept);
      ssr += r * r;
    }
    const double se = std::max(kSeFloor, std::sqrt(ssr / static_cast<double>(n - 2) / (q * q * sxx)));
    const double r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    out.push_back({q, slope / q, se, r2});
  }
  return out;
}

MultiscalingFit fit_multiscaling_proxy(std::span<const HqEstimate> curve) {
  if (curve.size() < 2) throw InvalidArgument("fit_multiscaling_proxy: need at least 2 points");
  double sw = 0.0;
  double swq = 0.0;
  double swh = 0.0;
  for (const auto& e : curve) {
    if (!(e.hq_se > 0.0) || !std::isfinite(e.hq_se)) {
      throw InvalidArgument("fit_multiscaling_proxy: standard errors must be positive and finite");
    }
    const double w = 1.0 / (e.hq_se * e.hq_se);
    sw += w;
    swq += w * e.q;
    swh += w * e.hq;
  }
  // Centred normal equations; S_qq - S_q^2/S equals sum w (q - q_bar)^2.
  const double q_bar = swq / sw;
  const double h_bar = swh / sw;
  double sqq = 0.0;
  double sqh = 0.0;
  for (const auto& e : curve) {
    const double w = 1.0 / (e.hq_se * e.hq_se);
    const double dq = e.q - q_bar;
    sqq += w * dq * dq;
    sqh += w * dq * (e.hq - h_bar);
  }
  double max_abs_q = 0.0;
  for (const auto& e : curve) max_abs_q = std::max(max_abs_q, std::abs(e.q));
  if (!(sqq > sw * 1e-24 * std::max(1.0, max_abs_q * max_abs_q))) {
    throw InvalidArgument("fit_multiscaling_proxy: collinear design (all q equal)");
  }
  MultiscalingFit fit;
  fit.B = sqh / sqq;
  fit.A = h_bar - fit.B * q_bar;
  fit.B_se = std::sqrt(1.0 / sqq);
  return fit;
}

GheResult estimate_ghe(std::span<const double> path, std::span<const int> taus, std::span<const double> qs) {
  const auto raw = structure_function(path, taus, qs);
  GheResult result;
  result.curve = fit_hq(normalize_standardize(raw));
  if (result.curve.size() >= 2) result.fit = fit_multiscaling_proxy(result.curve);
  result.taus.assign(taus.begin(), taus.end());
  result.qs.assign(qs.begin(), qs.end());
  return result;
}

std::vector<int> tau_range(int tau_max) {
  if (tau_max < 1) throw InvalidArgument("tau_range: tau_max must be >= 1");
  std::vector<int> taus(static_cast<std::size_t>(tau_max));
  std::iota(taus.begin(), taus.end(), 1);
  return taus;
}

}  // namespace mscale
