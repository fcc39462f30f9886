#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mscale/error.hpp"
#include "mscale/hypothesis.hpp"
#include "mscale/processes.hpp"

using namespace mscale;
using Catch::Approx;

TEST_CASE("stage 1 counts surrogates at or below the original", "[stage1]") {
  std::vector<double> above(1000);
  for (std::size_t i = 0; i < above.size(); ++i) above[i] = -0.019 + 1e-5 * double(i);
  auto r = stage1_presence(-0.08, above);
  CHECK(r.p_presence == 0.0);
  CHECK(r.reject);
  CHECK(r.count == 1000);

  r = stage1_presence(*std::max_element(above.begin(), above.end()), above);
  CHECK(r.p_presence == 1.0);
  CHECK_FALSE(r.reject);

  std::vector<double> odd{0.1, 0.2, 0.3, 0.4, 0.5};
  CHECK(stage1_presence(0.3, odd).p_presence == Approx(0.6));
  CHECK(stage1_presence(0.05, odd).p_presence == 0.0);
}

TEST_CASE("stage 1 rejects only below the level", "[stage1]") {
  std::vector<double> b(100);
  std::iota(b.begin(), b.end(), 0.0);
  CHECK(stage1_presence(4.0, b).p_presence == Approx(0.05));
  CHECK_FALSE(stage1_presence(4.0, b).reject);
  CHECK(stage1_presence(3.0, b).reject);
  CHECK(stage1_presence(9.0, b, 0.2).reject);
}

TEST_CASE("stage 2 by hand", "[stage2]") {
  const std::vector<double> shuf{-0.01, -0.02, -0.03, -0.04, -0.05};
  const auto r = stage2_source(-0.055, shuf);
  CHECK(r.median == Approx(-0.03));
  CHECK(r.d_orig == Approx(0.025));
  CHECK(r.p_source == 0.0);
  CHECK(r.reject);
  CHECK(r.direction == Direction::enhancing);
  CHECK(r.count == 5);
}

TEST_CASE("stage 2 centre and extremes", "[stage2]") {
  const std::vector<double> shuf{-0.01, -0.02, -0.03, -0.04, -0.05};
  auto r = stage2_source(-0.03, shuf);
  CHECK(r.d_orig == 0.0);
  CHECK(r.p_source == 1.0);
  CHECK_FALSE(r.reject);
  r = stage2_source(0.5, shuf);
  CHECK(r.p_source == 0.0);
  CHECK(r.direction == Direction::reducing);
}

TEST_CASE("stage 2 p is non-increasing in the distance", "[stage2]") {
  auto shuf = gaussian_noise({3, 0}, 301);
  double last = 1.0;
  for (double b = 0.0; b < 4.0; b += 0.05) {
    const double p = stage2_source(median(shuf) + b, shuf).p_source;
    CHECK(p <= last);
    last = p;
  }
}

TEST_CASE("median of odd and even samples", "[stage2]") {
  CHECK(median(std::vector<double>{3, 1, 2}) == 2);
  CHECK(median(std::vector<double>{4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS(median(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("classification partition", "[classify]") {
  Stage1Result no{0.5, 100, false}, yes{0.0, 100, true};
  CHECK(classify(no, std::nullopt) == Classification::not_multiscaling);
  Stage2Result keep{0.3, 100, -0.03, 0.001, false, Direction::enhancing};
  CHECK(classify(yes, keep) == Classification::distributional);
  Stage2Result enh{0.0, 100, -0.03, 0.02, true, Direction::enhancing};
  CHECK(classify(yes, enh) == Classification::temporal_enhancing);
  Stage2Result red{0.0, 100, -0.03, 0.02, true, Direction::reducing};
  CHECK(classify(yes, red) == Classification::temporal_reducing);
  for (auto c : {Classification::not_multiscaling, Classification::distributional, Classification::temporal_enhancing,
                 Classification::temporal_reducing}) {
    CHECK(parse_classification(to_string(c)) == c);
  }
}

TEST_CASE("config validation", "[config]") {
  TwoStageConfig c;
  CHECK_NOTHROW(c.validate());
  c.fbm_surrogates = 99;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.fbm_surrogates = 100;
  c.shuffle_surrogates = 10;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.shuffle_surrogates = 100;
  c.alpha_level = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("two-stage verdict is internally consistent and reproducible", "[two_stage]") {
  RBergomiParams p;
  p.hurst = 0.01;
  p.n = 4096;
  const auto path = simulate_rbergomi(p, {5, 0}).log_price;
  TwoStageConfig c;
  c.fbm_surrogates = 100;
  c.shuffle_surrogates = 100;
  c.keep_surrogate_b = true;
  const auto v = run_two_stage(path, c, {6, 0});
  CHECK(v.b_original < 0.0);
  CHECK(v.stage1.reject);
  REQUIRE(v.stage2.has_value());
  CHECK(v.b_fbm.size() == 100);
  CHECK(v.b_shuf.size() == 100);
  CHECK(v.stage1.p_presence >= 0.0);
  CHECK(v.stage1.p_presence <= 1.0);
  if (v.classification == Classification::temporal_enhancing) CHECK(v.b_original < v.stage2->median);
  if (v.classification == Classification::temporal_reducing) CHECK(v.b_original > v.stage2->median);

  const double mean = std::accumulate(v.b_fbm.begin(), v.b_fbm.end(), 0.0) / 100.0;
  double var = 0.0;
  for (double b : v.b_fbm) var += (b - mean) * (b - mean);
  CHECK(v.t_statistic == Approx((v.b_original - mean) / std::sqrt(var / 99.0)).epsilon(1e-9));

  c.workers = 3;
  const auto again = run_two_stage(path, c, {6, 0});
  CHECK(again.b_fbm == v.b_fbm);
  CHECK(again.b_shuf == v.b_shuf);
  CHECK(again.classification == v.classification);
}

TEST_CASE("stage 2 is skipped when stage 1 does not reject", "[two_stage]") {
  const auto path = simulate_fbm({0.5, 3000, 1.0}, {7, 0});
  TwoStageConfig c;
  c.fbm_surrogates = 100;
  c.shuffle_surrogates = 100;
  c.alpha_level = 1e-9;
  c.keep_surrogate_b = true;
  const auto v = run_two_stage(path, c, {8, 0});
  CHECK_FALSE(v.stage1.reject);
  CHECK_FALSE(v.stage2.has_value());
  CHECK(v.b_shuf.empty());
  CHECK(v.classification == Classification::not_multiscaling);
}

TEST_CASE("surrogate sink sees every surrogate", "[two_stage]") {
  const auto path = simulate_fbm({0.5, 3000, 1.0}, {9, 0});
  TwoStageConfig c;
  c.fbm_surrogates = 100;
  c.shuffle_surrogates = 100;
  c.alpha_level = 0.999;
  std::size_t fbm = 0, shuf = 0;
  c.surrogate_sink = [&](SurrogateKind k, std::size_t, const PathSeries& s) {
    CHECK(s.size() == path.size());
    (k == SurrogateKind::matched_fbm ? fbm : shuf)++;
  };
  const auto v = run_two_stage(path, c, {10, 0});
  CHECK(fbm == 100);
  CHECK(shuf == (v.stage1.reject ? 100u : 0u));
}

TEST_CASE("stage 1 p is uniform under the null", "[two_stage]") {
  // b_original and surrogates from the same distribution: p should be uniform.
  const std::size_t reps = 500, I = 100;
  std::vector<int> bins(10, 0);
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto draws = gaussian_noise({11, r}, I + 1);
    const auto p = stage1_presence(draws[0], std::span<const double>(draws).subspan(1)).p_presence;
    ++bins[std::min(9, int(p * 10))];
  }
  double chi2 = 0.0;
  for (int c : bins) chi2 += (c - 50.0) * (c - 50.0) / 50.0;
  CHECK(chi2 < 21.67);
}
