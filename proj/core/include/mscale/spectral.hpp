#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mscale/rng.hpp"

namespace mscale {

using Complex = std::complex<double>;

/// Unnormalised in-place DFT, X_k = sum_j x_j exp(-2 pi i jk / n).
void dft_forward(std::span<Complex> data);
/// Unnormalised in-place inverse DFT (sign +1, no 1/n factor).
void dft_inverse(std::span<Complex> data);

/// First `out_len` terms of the linear convolution of a and b.
std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b,
                                       std::size_t out_len);

/// Smallest power of two >= max(n - 1, 1): half-size of the circulant embedding
/// used for a stationary sequence of n samples.
std::size_t embedding_half_size(std::size_t n);

/// Exact sampler for a zero-mean stationary Gaussian sequence, by circulant
/// embedding of its autocovariance (Davies-Harte / Wood-Chan).
///
/// `autocov` holds c(0..m); the circulant has size 2m and yields sequences of
/// length up to m + 1. Eigenvalues within 1e-10 of zero (relative to the
/// largest) are treated as zero, those down to -1e-6 relative are clipped
/// with `clipped()` set, anything more negative throws EmbeddingError.
class CirculantGaussian {
 public:
  CirculantGaussian(std::span<const double> autocov, std::size_t n);

  std::vector<double> sample(Engine& engine) const;
  void sample_into(Engine& engine, std::span<double> out) const;

  std::size_t length() const noexcept { return n_; }
  std::size_t embedding_size() const noexcept { return scale_.size(); }
  bool clipped() const noexcept { return clipped_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  std::size_t n_;
  std::vector<double> scale_;  // sqrt(lambda_k / M)
  bool clipped_ = false;
  double min_eigenvalue_ = 0.0;
};

}  // namespace mscale
