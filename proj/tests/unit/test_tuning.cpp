#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mscale/error.hpp"
#include "mscale/ghe.hpp"
#include "mscale/processes.hpp"
#include "mscale/tuning.hpp"

using namespace mscale;
using Catch::Approx;

TEST_CASE("q grid from the tail index", "[qrange]") {
  const auto g = select_q_range(1.9);
  CHECK(g.front() == Approx(0.1));
  CHECK(g.back() == Approx(1.5));
  CHECK(g.size() == 15);
  CHECK(select_q_range(2.0).back() == Approx(1.6));
  CHECK(select_q_range(2.0).size() == 16);
  CHECK_THROWS_AS(select_q_range(0.6), InvalidArgument);
  CHECK_THROWS_AS(select_q_range(2.5), InvalidArgument);
  CHECK(select_q_range(0.7).size() == 5);
}

TEST_CASE("q grid points are clean decimals", "[qrange]") {
  const auto g = q_grid_up_to(1.0);
  REQUIRE(g.size() == 10);
  CHECK(g[2] == 0.3);
  CHECK(g[9] == 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("Gaussian data has alpha near 2", "[tail]") {
  const auto x = gaussian_noise({1, 0}, 100000);
  const auto est = estimate_tail_index(x);
  CHECK(est.alpha >= 1.95);
  CHECK(est.alpha <= 2.0);
  CHECK_FALSE(est.small_sample);
}

TEST_CASE("Cauchy data has alpha near 1", "[tail]") {
  const auto x = stable_noise({2, 0}, 1.0, 100000);
  const double a = estimate_tail_index(x).alpha;
  CHECK(a >= 0.93);
  CHECK(a <= 1.07);
}

TEST_CASE("alpha = 1.5 round trip", "[tail]") {
  const auto x = stable_noise({3, 0}, 1.5, 100000);
  const double a = estimate_tail_index(x).alpha;
  CHECK(a >= 1.43);
  CHECK(a <= 1.57);
}

TEST_CASE("tail index is scale invariant", "[tail]") {
  auto x = stable_noise({4, 0}, 1.4, 50000);
  const double a = estimate_tail_index(x).alpha;
  for (double& v : x) v *= 37.5;
  CHECK(estimate_tail_index(x).alpha == Approx(a).epsilon(1e-9));
}

TEST_CASE("short samples fall back", "[tail]") {
  const auto x = gaussian_noise({5, 0}, 499);
  const auto est = estimate_tail_index(x);
  CHECK(est.small_sample);
  CHECK(est.alpha == 1.25);
}

TEST_CASE("non-finite returns are rejected", "[tail]") {
  auto x = gaussian_noise({6, 0}, 1000);
  x[10] = std::nan("");
  CHECK_THROWS_AS(estimate_tail_index(x), InvalidArgument);
}

TEST_CASE("ML refinement stays near the quantile estimate", "[tail]") {
  const auto x = stable_noise({7, 0}, 1.6, 20000);
  TailIndexOptions opt;
  opt.refine_ml = true;
  const auto est = estimate_tail_index(x, opt);
  CHECK(est.refined);
  CHECK(est.alpha == Approx(1.6).margin(0.1));
}

TEST_CASE("symmetric stable density", "[tail]") {
  // Cauchy and Gaussian (variance 2) closed forms.
  for (double x : {0.0, 0.5, 2.0}) {
    CHECK(symmetric_stable_pdf(x, 1.0) == Approx(1.0 / (M_PI * (1 + x * x))).epsilon(1e-6));
    CHECK(symmetric_stable_pdf(x, 2.0) == Approx(std::exp(-x * x / 4) / std::sqrt(4 * M_PI)).epsilon(1e-6));
  }
}

TEST_CASE("empirical quantile interpolates", "[tail]") {
  const std::vector<double> s{1, 2, 3, 4, 5};
  CHECK(empirical_quantile(s, 0.0) == 1);
  CHECK(empirical_quantile(s, 1.0) == 5);
  CHECK(empirical_quantile(s, 0.5) == 3);
  CHECK(empirical_quantile(s, 0.1) == Approx(1.4));
}

TEST_CASE("default candidate set", "[tau]") {
  CHECK(default_tau_candidates(10000) == std::vector<int>{5, 10, 15, 20, 30, 50, 75, 100, 150, 200, 250});
  CHECK(default_tau_candidates(1000) == std::vector<int>{5, 10, 15, 20, 30, 50, 75, 100});
  CHECK(default_tau_candidates(60) == std::vector<int>{5});
}

TEST_CASE("exact power law selects the largest candidate", "[tau]") {
  std::vector<double> ramp(3000);
  for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = 0.01 * double(t);
  const std::vector<double> qs{0.5, 1.0, 1.5};
  const std::vector<int> cand{5, 10, 50, 100};
  const auto sel = select_tau_max(ramp, qs, cand);
  CHECK(sel.tau_max == 100);
  CHECK_FALSE(sel.below_threshold);
  for (const auto& [tau, r2] : sel.candidates) CHECK(r2 == Approx(1.0));
}

TEST_CASE("threshold zero returns the largest candidate", "[tau]") {
  const auto path = simulate_fbm({0.3, 3000, 1.0}, {3, 0});
  const std::vector<double> qs{0.5, 1.0};
  const std::vector<int> cand{5, 20, 100, 300};
  CHECK(select_tau_max(path.values, qs, cand, 0.0).tau_max == 300);
}

TEST_CASE("Brownian paths support a wide scale range", "[tau]") {
  const FbmGenerator gen({0.5, 10000, 1.0});
  const std::vector<double> qs = select_q_range(2.0);
  const std::vector<int> cand{5, 10, 20, 50, 100, 250};
  int wide = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    if (select_tau_max(gen.generate({4, s}).values, qs, cand).tau_max >= 20) ++wide;
  }
  CHECK(wide >= 90);
}

TEST_CASE("a periodic component breaks the fit and sets the flag", "[tau]") {
  auto path = integrate_increments(gaussian_noise({8, 0}, 5000));
  for (std::size_t t = 0; t < path.size(); ++t) path[t] += 20.0 * std::sin(M_PI * double(t) / 2.0);
  const std::vector<double> qs{0.5, 1.0, 1.5};
  const std::vector<int> cand{5, 10, 50, 100};
  const auto sel = select_tau_max(path, qs, cand);
  CHECK(sel.below_threshold);
  const auto best = std::max_element(sel.candidates.begin(), sel.candidates.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  CHECK(sel.tau_max == best->first);
}

TEST_CASE("candidate preconditions", "[tau]") {
  const auto path = simulate_fbm({0.5, 500, 1.0}, {3, 0});
  const std::vector<double> qs{1.0};
  CHECK_THROWS_AS(select_tau_max(path.values, qs, std::vector<int>{4, 10}), InvalidArgument);
  CHECK_THROWS_AS(select_tau_max(path.values, qs, std::vector<int>{10, 5}), InvalidArgument);
  CHECK_THROWS_AS(select_tau_max(path.values, qs, std::vector<int>{5, 60}), InvalidArgument);
}

TEST_CASE("tune bundles alpha, q grid and tau range", "[tune]") {
  const auto path = simulate_fbm({0.5, 10000, 1.0}, {9, 0});
  const auto t = tune(path);
  CHECK(t.alpha_stable >= 1.9);
  CHECK(t.alpha_safe == Approx(0.8 * t.alpha_stable));
  CHECK(t.q_max == Approx(t.alpha_safe));
  CHECK(t.q_max <= 1.6);
  CHECK(t.tau_max >= 5);
  CHECK(t.taus.size() == static_cast<std::size_t>(t.tau_max));
  CHECK(std::find(t.qs.begin(), t.qs.end(), 1.0) != t.qs.end());
  CHECK_FALSE(t.q1_inserted);
}

TEST_CASE("q = 1 is inserted for very heavy tails", "[tune]") {
  const auto x = stable_noise({10, 0}, 0.9, 20000);
  const auto t = tune(make_series(integrate_increments(x)));
  CHECK(t.q_max < 1.0);
  CHECK(t.q1_inserted);
  CHECK(t.qs.back() == 1.0);
  CHECK(t.q_max >= 0.5);
}

TEST_CASE("q_max is clamped", "[tune]") {
  for (double alpha : {0.5, 0.8, 1.2, 1.7, 2.0}) {
    const auto x = stable_noise({11, 0}, alpha, 5000);
    const auto t = tune(make_series(integrate_increments(x)));
    CHECK(t.q_max >= 0.5);
    CHECK(t.q_max <= 1.6);
    CHECK(t.qs.size() >= 5);
  }
}
