#include "mscale/descriptives.hpp"

#include <algorithm>
#include <cmath>

#include "mscale/error.hpp"

namespace mscale {
namespace {

// Accumulator that keeps the Neumaier correction term.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

double kurtosis(std::span<const double> returns) {
  if (returns.size() < 4) throw InvalidArgument("kurtosis: need at least 4 observations");
  const double n = static_cast<double>(returns.size());
  const double mean = compensated_sum(returns) / n;
  CompensatedSum m2;
  CompensatedSum m4;
  for (double r : returns) {
    const double d = r - mean;
    const double d2 = d * d;
    m2.add(d2);
    m4.add(d2 * d2);
  }
  const double var = m2.value() / n;
  if (!(var > 0.0)) throw DegenerateInput("kurtosis: constant input");
  return (m4.value() / n) / (var * var);
}

std::vector<double> acf_abs_returns(std::span<const double> returns, std::size_t max_lag) {
  const std::size_t n = returns.size();
  if (n <= max_lag + 1) throw InvalidArgument("acf_abs_returns: need n > max_lag + 1");
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(returns[i]);
  const double mean = compensated_sum(a) / static_cast<double>(n);
  for (double& x : a) x -= mean;
  double c0 = 0.0;
  for (double x : a) c0 += x * x;
  if (!(c0 > 0.0)) throw DegenerateInput("acf_abs_returns: constant absolute returns");
  std::vector<double> acf(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += a[i] * a[i + lag];
    acf[lag - 1] = c / c0;
  }
  return acf;
}

DiagnosticsRecord diagnostics(std::span<const double> returns, std::size_t max_lag) {
  DiagnosticsRecord rec;
  rec.n = returns.size();
  rec.kurtosis = kurtosis(returns);
  rec.acf_abs = acf_abs_returns(returns, std::max<std::size_t>(max_lag, 10));
  for (std::size_t i = 0; i < 10; ++i) rec.vol_clustering += rec.acf_abs[i];
  rec.acf_abs.resize(max_lag);
  return rec;
}

}  // namespace mscale
