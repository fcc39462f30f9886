#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mscale {

struct DiagnosticsRecord {
  double kurtosis = 0.0;
  std::vector<double> acf_abs;  // lags 1..L
  double vol_clustering = 0.0;  // sum of acf_abs over lags 1..10
  std::size_t n = 0;
};

/// Raw kurtosis m4 / m2^2 with population moments.
double kurtosis(std::span<const double> returns);

/// Biased sample autocorrelation of |r| at lags 1..max_lag.
std::vector<double> acf_abs_returns(std::span<const double> returns, std::size_t max_lag);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

DiagnosticsRecord diagnostics(std::span<const double> returns, std::size_t max_lag = 10);

}  // namespace mscale
