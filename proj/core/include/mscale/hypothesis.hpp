#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/processes.hpp"
#include "mscale/surrogates.hpp"
#include "mscale/tuning.hpp"

namespace mscale {

enum class Classification { not_multiscaling, distributional, temporal_enhancing, temporal_reducing };
enum class Direction { enhancing, reducing };

std::string_view to_string(Classification c) noexcept;
std::string_view to_string(Direction d) noexcept;
Classification parse_classification(std::string_view name);

struct Stage1Result {
  double p_presence = 1.0;
  std::size_t count = 0;
  bool reject = false;
};

struct Stage2Result {
  double p_source = 1.0;
  std::size_t count = 0;
  double median = 0.0;
  double d_orig = 0.0;
  bool reject = false;
  Direction direction = Direction::reducing;
};

/// One-sided: p = #{b_fbm <= b_original} / I; reject iff p < alpha.
Stage1Result stage1_presence(double b_original, std::span<const double> b_fbm, double alpha = 0.05);

/// Two-sided distance from the surrogate median:
/// p = #{|b_shuf - median| >= |b_original - median|} / J.
Stage2Result stage2_source(double b_original, std::span<const double> b_shuf, double alpha = 0.05);

double median(std::span<const double> values);

struct TwoStageConfig {
  std::size_t fbm_surrogates = 1000;      // I
  std::size_t shuffle_surrogates = 1000;  // J
  double alpha_level = 0.05;
  TuningOptions tuning;
  unsigned workers = 1;
  /// Fraction of requested surrogates that must survive B estimation.
  double min_surrogate_fraction = 0.9;
  bool keep_surrogate_b = false;
  /// Debug hook: called with every surrogate path as it is generated.
  std::function<void(SurrogateKind, std::size_t, const PathSeries&)> surrogate_sink;

  void validate() const;
};

struct TestVerdict {
  double b_original = 0.0;
  GheResult ghe;
  TuningResult tuning;
  double h1 = 0.0;
  bool h1_clamped = false;
  Stage1Result stage1;
  std::optional<Stage2Result> stage2;
  Classification classification = Classification::not_multiscaling;
  double alpha_level = 0.05;
  /// (b_original - mean b_fbm) / sd b_fbm; informational, never used for p.
  double t_statistic = 0.0;
  std::size_t fbm_dropped = 0;
  std::size_t shuffle_dropped = 0;
  std::vector<double> b_fbm;   // filled when keep_surrogate_b
  std::vector<double> b_shuf;  // filled when keep_surrogate_b
  RngSpec rng;
};

/// Multiscaling proxy B for a path on fixed grids.
double multiscaling_b(std::span<const double> path, std::span<const int> taus, std::span<const double> qs);

/// Tune once on the original, test for presence against matched fBm and, if
/// present, for its source against shuffled surrogates.
TestVerdict run_two_stage(const PathSeries& path, const TwoStageConfig& config, const RngSpec& rng);

/// Classification from stage results.
Classification classify(const Stage1Result& s1, const std::optional<Stage2Result>& s2);

}  // namespace mscale
