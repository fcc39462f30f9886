#include "mscale/surrogates.hpp"

#include <algorithm>
#include <cmath>

#include "mscale/descriptives.hpp"
#include "mscale/error.hpp"

namespace mscale {
namespace {

double increment_sd(const PathSeries& path) {
  const auto r = path.increments();
  if (r.size() < 2) throw InvalidArgument("matched fbm: original too short");
  const double mean = compensated_sum(r) / static_cast<double>(r.size());
  double ss = 0.0;
  for (double x : r) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(r.size() - 1));
  if (!(sd > 0.0)) throw DegenerateInput("matched fbm: original has constant increments");
  return sd;
}

FbmParams matched_params(std::size_t length, double h1, double sd) {
  if (!std::isfinite(h1)) throw InvalidArgument("matched fbm: H(1) is not finite");
  return FbmParams{std::clamp(h1, 0.01, 0.99), length, sd};
}

}  // namespace

MatchedFbm::MatchedFbm(std::size_t length, double h1, double sd)
    : raw_h1_(h1), clamped_(!(h1 >= 0.01 && h1 <= 0.99)), generator_(matched_params(length, h1, sd)) {}

MatchedFbm::MatchedFbm(const PathSeries& original, const GheResult& ghe)
    : MatchedFbm(original.size(), ghe.hq_at(1.0), increment_sd(original)) {}

PathSeries MatchedFbm::generate(const RngSpec& base, std::size_t index) const {
  return generator_.generate(RngSpec{base.seed, base.stream_id + index});
}

Shuffler::Shuffler(const PathSeries& original)
    : first_(original.values.front()), last_(original.values.back()), increments_(original.increments()) {
  if (original.size() < 3) throw InvalidArgument("shuffle surrogates: need length >= 3");
}

std::vector<double> Shuffler::permuted_increments(const RngSpec& base, std::size_t index) const {
  auto engine = make_engine(RngSpec{base.seed, base.stream_id + index});
  std::vector<double> out = increments_;
  fisher_yates(std::span<double>(out), engine);
  return out;
}

PathSeries Shuffler::rebuild(std::span<const double> permuted, const RngSpec& stream) const {
  // Compensated running sum keeps the rebuilt path within rounding of the
  // exact partial sums; the endpoint is pinned to the original's last value.
  std::vector<double> values(permuted.size() + 1);
  values[0] = first_;
  double sum = first_;
  double carry = 0.0;
  for (std::size_t i = 0; i < permuted.size(); ++i) {
    const double x = permuted[i];
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
    values[i + 1] = sum + carry;
  }
  values.back() = last_;
  PathMeta meta{ProcessKind::shuffled, std::monostate{}, stream, false};
  return PathSeries{std::move(values), std::move(meta)};
}

PathSeries Shuffler::generate(const RngSpec& base, std::size_t index) const {
  const auto permuted = permuted_increments(base, index);
  return rebuild(permuted, RngSpec{base.seed, base.stream_id + index});
}

SurrogateBatch matched_fbm(const PathSeries& original, const GheResult& ghe, std::size_t count, const RngSpec& rng) {
  if (count == 0) throw InvalidArgument("matched_fbm: count must be >= 1");
  const MatchedFbm model(original, ghe);
  SurrogateBatch batch;
  batch.kind = SurrogateKind::matched_fbm;
  batch.original_length = original.size();
  batch.rng = rng;
  batch.hurst = model.hurst();
  batch.h1_clamped = model.h1_clamped();
  batch.series.reserve(count);
  for (std::size_t i = 0; i < count; ++i) batch.series.push_back(model.generate(rng, i));
  return batch;
}

SurrogateBatch shuffle_surrogates(const PathSeries& original, std::size_t count, const RngSpec& rng) {
  if (count == 0) throw InvalidArgument("shuffle_surrogates: count must be >= 1");
  const Shuffler shuffler(original);
  SurrogateBatch batch;
  batch.kind = SurrogateKind::shuffled;
  batch.original_length = original.size();
  batch.rng = rng;
  batch.series.reserve(count);
  batch.increments.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto permuted = shuffler.permuted_increments(rng, i);
    batch.series.push_back(shuffler.rebuild(permuted, RngSpec{rng.seed, rng.stream_id + i}));
    batch.increments.push_back(std::move(permuted));
  }
  return batch;
}

}  // namespace mscale
