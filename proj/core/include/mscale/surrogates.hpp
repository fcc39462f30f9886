#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mscale/ghe.hpp"
#include "mscale/processes.hpp"

namespace mscale {

enum class SurrogateKind { matched_fbm, shuffled };

/// Uniscaling null model: fBm whose Hurst exponent is the original's H(1) and
/// whose lag-1 increment SD matches the original's.
class MatchedFbm {
 public:
  MatchedFbm(const PathSeries& original, const GheResult& ghe);
  MatchedFbm(std::size_t length, double h1, double increment_sd);

  /// Surrogate `index` drawn from stream base.stream_id + index.
  PathSeries generate(const RngSpec& base, std::size_t index) const;

  double hurst() const noexcept { return generator_.params().hurst; }
  double raw_h1() const noexcept { return raw_h1_; }
  double scale() const noexcept { return generator_.params().scale; }
  bool h1_clamped() const noexcept { return clamped_; }

 private:
  double raw_h1_;
  bool clamped_;
  FbmGenerator generator_;
};

/// Increment-permutation null model.
class Shuffler {
 public:
  explicit Shuffler(const PathSeries& original);

  /// Permuted increments (exact multiset of the original's increments).
  std::vector<double> permuted_increments(const RngSpec& base, std::size_t index) const;
  /// Path rebuilt from the permuted increments; first and last values equal
  /// the original's exactly.
  PathSeries generate(const RngSpec& base, std::size_t index) const;
  PathSeries rebuild(std::span<const double> permuted, const RngSpec& stream) const;

  std::span<const double> increments() const noexcept { return increments_; }

 private:
  double first_;
  double last_;
  std::vector<double> increments_;
};

struct SurrogateBatch {
  SurrogateKind kind = SurrogateKind::shuffled;
  std::vector<PathSeries> series;
  /// Permuted increments per member; only filled for shuffled batches.
  std::vector<std::vector<double>> increments;
  std::size_t original_length = 0;
  RngSpec rng;
  double hurst = 0.0;  // matched_fbm: Hurst actually used
  bool h1_clamped = false;
};

SurrogateBatch matched_fbm(const PathSeries& original, const GheResult& ghe, std::size_t count, const RngSpec& rng);
SurrogateBatch shuffle_surrogates(const PathSeries& original, std::size_t count, const RngSpec& rng);

/// Unbiased Fisher-Yates shuffle driven by `engine`.
template <typename T, typename Engine>
void fisher_yates(std::span<T> items, Engine& engine);

}  // namespace mscale

#include <random>

namespace mscale {

template <typename T, typename Engine>
void fisher_yates(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    const std::size_t j = pick(engine);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace mscale
