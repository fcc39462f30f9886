#include "mscale/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mscale/error.hpp"
#include "mscale/parallel.hpp"

namespace mscale {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_sample(std::span<const double> sample, const char* what) {
  if (sample.empty()) throw InvalidArgument(std::string(what) + ": empty surrogate sample");
  for (double b : sample) {
    if (!std::isfinite(b)) throw InvalidArgument(std::string(what) + ": non-finite surrogate statistic");
  }
}

// B for every surrogate index; failures become NaN and are dropped later.
template <typename Make>
std::vector<double> surrogate_b(std::size_t count, const TuningResult& tuning, const TwoStageConfig& config,
                                SurrogateKind kind, Make&& make) {
  std::vector<double> out(count, kNaN);
  parallel_for(count, config.workers, [&](std::size_t i) {
    try {
      const PathSeries s = make(i);
      if (config.surrogate_sink) config.surrogate_sink(kind, i, s);
      out[i] = multiscaling_b(s.values, tuning.taus, tuning.qs);
    } catch (const Error&) {
      out[i] = kNaN;
    }
  });
  return out;
}

std::vector<double> surviving(const std::vector<double>& bs, double min_fraction, const char* which) {
  std::vector<double> kept;
  kept.reserve(bs.size());
  for (double b : bs) {
    if (std::isfinite(b)) kept.push_back(b);
  }
  const auto floor = static_cast<std::size_t>(std::ceil(min_fraction * static_cast<double>(bs.size())));
  if (kept.size() < floor) {
    throw NumericalError(std::string(which) + ": only " + std::to_string(kept.size()) + " of " +
                         std::to_string(bs.size()) + " surrogates produced a finite B");
  }
  return kept;
}

}  // namespace

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::not_multiscaling: return "not_multiscaling";
    case Classification::distributional: return "distributional";
    case Classification::temporal_enhancing: return "temporal_enhancing";
    case Classification::temporal_reducing: return "temporal_reducing";
  }
  return "not_multiscaling";
}

std::string_view to_string(Direction d) noexcept { return d == Direction::enhancing ? "enhancing" : "reducing"; }

Classification parse_classification(std::string_view name) {
  for (auto c : {Classification::not_multiscaling, Classification::distributional, Classification::temporal_enhancing,
                 Classification::temporal_reducing}) {
    if (name == to_string(c)) return c;
  }
  throw InvalidArgument("unknown classification '" + std::string(name) + "'");
}

double median(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("median of empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Stage1Result stage1_presence(double b_original, std::span<const double> b_fbm, double alpha) {
  require_sample(b_fbm, "stage1_presence");
  const auto hits = std::count_if(b_fbm.begin(), b_fbm.end(), [&](double b) { return b <= b_original; });
  Stage1Result r;
  r.count = b_fbm.size();
  r.p_presence = static_cast<double>(hits) / static_cast<double>(r.count);
  r.reject = r.p_presence < alpha;
  return r;
}

Stage2Result stage2_source(double b_original, std::span<const double> b_shuf, double alpha) {
  require_sample(b_shuf, "stage2_source");
  Stage2Result r;
  r.count = b_shuf.size();
  r.median = median(b_shuf);
  r.d_orig = std::abs(b_original - r.median);
  const auto hits =
      std::count_if(b_shuf.begin(), b_shuf.end(), [&](double b) { return std::abs(b - r.median) >= r.d_orig; });
  r.p_source = static_cast<double>(hits) / static_cast<double>(r.count);
  r.reject = r.p_source < alpha;
  r.direction = b_original < r.median ? Direction::enhancing : Direction::reducing;
  return r;
}

Classification classify(const Stage1Result& s1, const std::optional<Stage2Result>& s2) {
  if (!s1.reject) return Classification::not_multiscaling;
  if (!s2 || !s2->reject) return Classification::distributional;
  return s2->direction == Direction::enhancing ? Classification::temporal_enhancing
                                               : Classification::temporal_reducing;
}

void TwoStageConfig::validate() const {
  if (fbm_surrogates < 100) throw InvalidArgument("two-stage test: I must be >= 100");
  if (shuffle_surrogates < 100) throw InvalidArgument("two-stage test: J must be >= 100");
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) throw InvalidArgument("two-stage test: alpha must lie in (0, 1)");
  if (!(min_surrogate_fraction > 0.0 && min_surrogate_fraction <= 1.0)) {
    throw InvalidArgument("two-stage test: min_surrogate_fraction must lie in (0, 1]");
  }
}

double multiscaling_b(std::span<const double> path, std::span<const int> taus, std::span<const double> qs) {
  const auto result = estimate_ghe(path, taus, qs);
  if (!result.fit) throw InvalidArgument("multiscaling_b: need at least 2 moment orders");
  if (!std::isfinite(result.fit->B)) throw NumericalError("multiscaling_b: non-finite B");
  return result.fit->B;
}

TestVerdict run_two_stage(const PathSeries& path, const TwoStageConfig& config, const RngSpec& rng) {
  config.validate();
  TestVerdict v;
  v.rng = rng;
  v.alpha_level = config.alpha_level;
  v.tuning = tune(path, config.tuning);
  v.ghe = estimate_ghe(path.values, v.tuning.taus, v.tuning.qs);
  v.b_original = v.ghe.fit->B;

  const MatchedFbm null_model(path, v.ghe);
  v.h1 = null_model.raw_h1();
  v.h1_clamped = null_model.h1_clamped();

  const RngSpec fbm_rng{mix_seed({rng.seed, rng.stream_id, 1}), 0};
  const auto b_fbm_all = surrogate_b(config.fbm_surrogates, v.tuning, config, SurrogateKind::matched_fbm,
                                     [&](std::size_t i) { return null_model.generate(fbm_rng, i); });
  const auto b_fbm = surviving(b_fbm_all, config.min_surrogate_fraction, "matched fbm");
  v.fbm_dropped = b_fbm_all.size() - b_fbm.size();
  v.stage1 = stage1_presence(v.b_original, b_fbm, config.alpha_level);

  const double mean = std::accumulate(b_fbm.begin(), b_fbm.end(), 0.0) / static_cast<double>(b_fbm.size());
  double ss = 0.0;
  for (double b : b_fbm) ss += (b - mean) * (b - mean);
  const double sd = b_fbm.size() > 1 ? std::sqrt(ss / static_cast<double>(b_fbm.size() - 1)) : 0.0;
  v.t_statistic = sd > 0.0 ? (v.b_original - mean) / sd : 0.0;
  if (config.keep_surrogate_b) v.b_fbm = b_fbm;

  if (v.stage1.reject) {
    const Shuffler shuffler(path);
    const RngSpec shuffle_rng{mix_seed({rng.seed, rng.stream_id, 2}), 0};
    const auto b_shuf_all = surrogate_b(config.shuffle_surrogates, v.tuning, config, SurrogateKind::shuffled,
                                        [&](std::size_t i) { return shuffler.generate(shuffle_rng, i); });
    const auto b_shuf = surviving(b_shuf_all, config.min_surrogate_fraction, "shuffled");
    v.shuffle_dropped = b_shuf_all.size() - b_shuf.size();
    v.stage2 = stage2_source(v.b_original, b_shuf, config.alpha_level);
    if (config.keep_surrogate_b) v.b_shuf = b_shuf;
  }
  v.classification = classify(v.stage1, v.stage2);
  return v;
}

}  // namespace mscale
