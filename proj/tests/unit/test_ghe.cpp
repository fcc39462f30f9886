#include <catch_amalgamated.hpp>

#include <cmath>

#include "mscale/error.hpp"
#include "mscale/ghe.hpp"
#include "mscale/processes.hpp"

using namespace mscale;
using Catch::Approx;

namespace {

MomentGrid synthetic_grid(const std::vector<int>& taus, const std::vector<double>& qs, double (*h)(double)) {
  MomentGrid g{taus, qs, std::vector<double>(taus.size() * qs.size())};
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < qs.size(); ++j) g.at(i, j) = std::pow(double(taus[i]), h(qs[j]));
  }
  return g;
}

std::vector<HqEstimate> points(const std::vector<double>& q, const std::vector<double>& h,
                               const std::vector<double>& se) {
  std::vector<HqEstimate> out;
  for (std::size_t i = 0; i < q.size(); ++i) out.push_back({q[i], h[i], se[i], 1.0});
  return out;
}

}  // namespace

TEST_CASE("linear ramp has exact moments", "[structure]") {
  std::vector<double> ramp(200);
  for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = 0.5 * double(t);
  const std::vector<int> taus{1, 2, 5, 10};
  const std::vector<double> qs{0.5, 1.0, 2.0};
  const auto g = structure_function(ramp, taus, qs);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < qs.size(); ++j) CHECK(g.at(i, j) == Approx(std::pow(0.5 * taus[i], qs[j])));
  }
  const auto s = normalize_standardize(g);
  for (std::size_t i = 0; i < taus.size(); ++i) {
    for (std::size_t j = 0; j < qs.size(); ++j) CHECK(s.at(i, j) == Approx(double(taus[i])));
  }
  for (const auto& e : fit_hq(s)) CHECK(e.hq == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alternating path has unit second moment", "[structure]") {
  std::vector<double> x(100);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = double(t % 2);
  const std::vector<int> taus{1};
  const std::vector<double> qs{2.0};
  CHECK(structure_function(x, taus, qs).at(0, 0) == 1.0);
}

TEST_CASE("window count is floor(len / tau) - 1", "[structure]") {
  // 12 samples, tau = 3: three windows with increments 3, 30, 300; samples 10 and 11 unused.
  const std::vector<double> x{0, 1, 2, 3, 10, 20, 33, 100, 200, 333, 1e6, 5e6};
  const std::vector<int> taus{1, 3};
  const std::vector<double> qs{1.0};
  const auto g = structure_function(x, taus, qs);
  CHECK(g.at(1, 0) == Approx((3.0 + 30.0 + 300.0) / 3.0));
}

TEST_CASE("constant path is degenerate", "[structure]") {
  const std::vector<double> flat(100, 2.5);
  const std::vector<int> taus{1, 2, 3};
  const std::vector<double> qs{1.0};
  CHECK_THROWS_AS(structure_function(flat, taus, qs), DegenerateInput);
}

TEST_CASE("grid preconditions", "[structure]") {
  const std::vector<double> x{0, 1, 3, 2, 5, 4, 6, 8};
  const std::vector<double> qs{1.0};
  CHECK_THROWS_AS(structure_function(x, std::vector<int>{1, 5}, qs), InvalidArgument);
  CHECK_THROWS_AS(structure_function(x, std::vector<int>{2, 1}, qs), InvalidArgument);
  CHECK_THROWS_AS(structure_function(x, std::vector<int>{1, 2}, std::vector<double>{0.0}), InvalidArgument);
  const auto g = structure_function(x, std::vector<int>{2, 3}, qs);
  CHECK_THROWS_AS(normalize_standardize(g), InvalidArgument);
}

TEST_CASE("standardisation by hand", "[standardize]") {
  MomentGrid g{{1, 2}, {0.5}, {1.0, 4.0}};
  const auto s = normalize_standardize(g);
  CHECK(s.at(0, 0) == 1.0);
  CHECK(s.at(1, 0) == Approx(16.0));
}

TEST_CASE("standardised tau = 1 row is identically one", "[standardize]") {
  const auto path = simulate_fbm({0.4, 2000, 1.0}, {2, 0});
  const auto s = normalize_standardize(structure_function(path.values, tau_range(10), std::vector<double>{0.3, 1.0, 1.7}));
  for (std::size_t j = 0; j < s.qs.size(); ++j) CHECK(s.at(0, j) == 1.0);
}

TEST_CASE("exact power laws are recovered", "[fit]") {
  const std::vector<int> taus{1, 2, 3, 5, 8, 13, 21};
  const std::vector<double> qs{0.2, 0.6, 1.0, 1.4};
  SECTION("constant exponent") {
    const auto fit = fit_hq(synthetic_grid(taus, qs, [](double) { return 0.5; }));
    for (const auto& e : fit) {
      CHECK(std::abs(e.hq - 0.5) < 1e-10);
      CHECK(e.r2 == Approx(1.0).epsilon(1e-12));
      CHECK(e.hq_se > 0.0);
    }
  }
  SECTION("nonlinear exponent") {
    auto h = [](double q) { return 0.6 - 0.1 * q * q + 0.02 * std::sin(q); };
    const auto fit = fit_hq(synthetic_grid(taus, qs, h));
    for (const auto& e : fit) CHECK(std::abs(e.hq - h(e.q)) < 1e-10);
  }
  SECTION("affine exponent gives the line") {
    const auto fit = fit_hq(synthetic_grid(taus, qs, [](double q) { return 0.5 - 0.04 * q; }));
    std::vector<HqEstimate> curve = fit;
    for (auto& e : curve) e.hq_se = 0.01;
    const auto line = fit_multiscaling_proxy(curve);
    CHECK(std::abs(line.A - 0.5) < 1e-10);
    CHECK(std::abs(line.B + 0.04) < 1e-10);
  }
}

TEST_CASE("collinear points through the origin", "[fit]") {
  MomentGrid g{{1, 2, 4}, {0.7}, {1.0, 2.0, 4.0}};
  const auto fit = fit_hq(g);
  CHECK(fit[0].hq == Approx(1.0).epsilon(1e-14));
  CHECK(fit[0].hq_se <= 1e-12);
  CHECK(fit[0].hq_se > 0.0);
}

TEST_CASE("fit needs three lags", "[fit]") {
  MomentGrid g{{1, 2}, {1.0}, {1.0, 1.5}};
  CHECK_THROWS_AS(fit_hq(g), InvalidArgument);
}

TEST_CASE("WLS line by hand", "[wls]") {
  const auto two = points({0.5, 1.5}, {0.5, 0.4}, {1.0, 1.0});
  const auto fit = fit_multiscaling_proxy(two);
  CHECK(fit.B == Approx(-0.1).epsilon(1e-12));
  CHECK(fit.A == Approx(0.55).epsilon(1e-12));
  // sigma_B^2 = sum w / (sum w * sum w q^2 - (sum w q)^2) = 2 / (2 * 2.5 - 4)
  CHECK(fit.B_se == Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("WLS line is exact on collinear inputs", "[wls]") {
  std::vector<double> q, h, se;
  for (int j = 1; j <= 15; ++j) {
    q.push_back(0.1 * j);
    h.push_back(0.5 - 0.04 * 0.1 * j);
    se.push_back(0.001 * j);
  }
  const auto fit = fit_multiscaling_proxy(points(q, h, se));
  CHECK(std::abs(fit.A - 0.5) < 1e-12);
  CHECK(std::abs(fit.B + 0.04) < 1e-12);
}

TEST_CASE("WLS argmin is invariant to weight scaling", "[wls]") {
  const std::vector<double> q{0.2, 0.5, 0.9, 1.3}, h{0.51, 0.47, 0.46, 0.40}, se{0.01, 0.02, 0.015, 0.03};
  const auto a = fit_multiscaling_proxy(points(q, h, se));
  std::vector<double> scaled = se;
  for (double& s : scaled) s /= std::sqrt(2.0);
  const auto b = fit_multiscaling_proxy(points(q, h, scaled));
  CHECK(b.A == Approx(a.A).epsilon(1e-12));
  CHECK(b.B == Approx(a.B).epsilon(1e-12));
}

TEST_CASE("WLS downweights noisy points", "[wls]") {
  const auto fit = fit_multiscaling_proxy(points({0.5, 1.0, 1.5}, {0.5, 0.45, 0.9}, {1e-4, 1e-4, 10.0}));
  CHECK(fit.B == Approx(-0.1).margin(1e-4));
}

TEST_CASE("WLS rejects a degenerate design", "[wls]") {
  CHECK_THROWS_AS(fit_multiscaling_proxy(points({1.0, 1.0}, {0.5, 0.4}, {0.1, 0.1})), InvalidArgument);
  CHECK_THROWS_AS(fit_multiscaling_proxy(points({1.0}, {0.5}, {0.1})), InvalidArgument);
}

TEST_CASE("estimate_ghe assembles the result", "[ghe]") {
  const auto path = simulate_fbm({0.5, 5000, 1.0}, {6, 0});
  const std::vector<double> qs{0.5, 1.0, 1.5};
  const auto r = estimate_ghe(path.values, tau_range(15), qs);
  REQUIRE(r.curve.size() == 3);
  REQUIRE(r.fit.has_value());
  CHECK(r.taus.size() == 15);
  CHECK(r.hq_at(1.0) == Approx(0.5).margin(0.06));
  CHECK_THROWS_AS(r.hq_at(2.0), InvalidArgument);
  for (const auto& e : r.curve) {
    CHECK(e.r2 >= 0.0);
    CHECK(e.r2 <= 1.0);
    CHECK(e.hq_se > 0.0);
  }
  const auto single = estimate_ghe(path.values, tau_range(15), std::vector<double>{1.0});
  CHECK_FALSE(single.fit.has_value());
}

TEST_CASE("Brownian second moment grows linearly in tau", "[ghe]") {
  const auto path = simulate_fbm({0.5, 100001, 1.0}, {9, 0});
  const std::vector<int> taus{1, 2, 4, 8, 16};
  const auto g = structure_function(path.values, taus, std::vector<double>{2.0});
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double windows = std::floor(100001.0 / taus[i]) - 1.0;
    const double se = std::sqrt(2.0 / windows);  // relative SE of a chi-square mean
    CHECK(g.at(i, 0) / taus[i] == Approx(1.0).margin(3.0 * se));
  }
}

TEST_CASE("intercept variant agrees on clean power laws", "[ghe]") {
  MomentGrid raw{{1, 2, 4, 8}, {1.0, 2.0}, {}};
  for (int tau : raw.taus) {
    raw.xi.push_back(3.0 * std::pow(double(tau), 0.4));
    raw.xi.push_back(9.0 * std::pow(double(tau), 0.8));
  }
  const auto fit = fit_hq_with_intercept(raw);
  CHECK(fit[0].hq == Approx(0.4));
  CHECK(fit[1].hq == Approx(0.4));
}
