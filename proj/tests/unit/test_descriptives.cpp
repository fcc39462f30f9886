#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mscale/descriptives.hpp"
#include "mscale/error.hpp"
#include "mscale/processes.hpp"
#include "mscale/tuning.hpp"

using namespace mscale;
using Catch::Approx;

namespace {

double median_of(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  return empirical_quantile(x, 0.5);
}

}  // namespace

TEST_CASE("Gaussian kurtosis is three", "[kurtosis]") {
  CHECK(kurtosis(gaussian_noise({1, 0}, 1'000'000)) == Approx(3.0).margin(0.05));
}

TEST_CASE("two-point kurtosis is one", "[kurtosis]") {
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? 1.0 : -1.0;
  CHECK(kurtosis(x) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kurtosis is location and scale free", "[kurtosis]") {
  auto x = stable_noise({2, 0}, 1.7, 5000);
  const double k = kurtosis(x);
  for (double& v : x) v = 3.0 + 0.01 * v;
  CHECK(kurtosis(x) == Approx(k).epsilon(1e-9));
  CHECK(k >= 1.0);
}

TEST_CASE("kurtosis preconditions", "[kurtosis]") {
  CHECK_THROWS_AS(kurtosis(std::vector<double>{1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(kurtosis(std::vector<double>(10, 4.0)), DegenerateInput);
}

TEST_CASE("acf of white noise is small", "[acf]") {
  const auto x = gaussian_noise({3, 0}, 10000);
  const auto acf = acf_abs_returns(x, 10);
  REQUIRE(acf.size() == 10);
  double mean = 0.0;
  for (double a : acf) mean += a / 10.0;
  CHECK(std::abs(mean) < 4.0 / 100.0);
}

TEST_CASE("acf of a period-two absolute sequence alternates", "[acf]") {
  std::vector<double> x(2000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? 3.0 : -1.0;  // |x| = 1, 3, 1, 3, ...
  const auto acf = acf_abs_returns(x, 2);
  CHECK(acf[0] == Approx(-1.0).margin(1e-3));
  CHECK(acf[1] == Approx(1.0).margin(2e-3));
}

TEST_CASE("acf is reversal symmetric and bounded", "[acf]") {
  auto x = stable_noise({4, 0}, 1.5, 3000);
  const auto a = acf_abs_returns(x, 10);
  std::reverse(x.begin(), x.end());
  const auto b = acf_abs_returns(x, 10);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == Approx(b[k]).margin(1e-12));
    CHECK(std::abs(a[k]) <= 1.0);
  }
}

TEST_CASE("acf preconditions", "[acf]") {
  CHECK_THROWS_AS(acf_abs_returns(std::vector<double>(50, -2.0), 5), DegenerateInput);
  CHECK_THROWS_AS(acf_abs_returns(gaussian_noise({5, 0}, 10), 10), InvalidArgument);
}

TEST_CASE("compensated sum recovers cancelled mass", "[sum]") {
  std::vector<double> x{1e16, 1.0, -1e16, 1.0};
  CHECK(compensated_sum(x) == 2.0);
}

TEST_CASE("diagnostics record", "[diagnostics]") {
  const auto x = gaussian_noise({6, 0}, 5000);
  const auto d = diagnostics(x);
  CHECK(d.n == 5000);
  REQUIRE(d.acf_abs.size() == 10);
  double sum = 0.0;
  for (double a : d.acf_abs) sum += a;
  CHECK(d.vol_clustering == Approx(sum).epsilon(1e-12));
  CHECK(d.kurtosis == Approx(kurtosis(x)));
}

TEST_CASE("rBergomi diagnostics over a unit horizon", "[diagnostics]") {
  RBergomiParams p;
  p.n = 4096;
  p.dt = 1.0 / 4096.0;
  std::vector<double> kurt_rough, kurt_mild, vc_mild;
  for (std::uint64_t s = 0; s < 60; ++s) {
    p.hurst = 0.001;
    kurt_rough.push_back(kurtosis(simulate_rbergomi(p, {7, s}).log_price.increments()));
    p.hurst = 0.2;
    const auto d = diagnostics(simulate_rbergomi(p, {8, s}).log_price.increments());
    kurt_mild.push_back(d.kurtosis);
    vc_mild.push_back(d.vol_clustering);
  }
  const double k_rough = median_of(kurt_rough), k_mild = median_of(kurt_mild), vc = median_of(vc_mild);
  CHECK(k_rough >= 20.0);
  CHECK(k_rough <= 120.0);
  CHECK(k_mild >= 3.0);
  CHECK(k_mild <= 10.0);
  CHECK(vc >= 1.5);
  CHECK(vc <= 4.5);
}
