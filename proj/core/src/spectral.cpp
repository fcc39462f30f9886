#include "mscale/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "mscale/error.hpp"

namespace mscale {
namespace {

// FFTW's planner is not thread-safe; executing an existing plan through the
// new-array interface is. Plans are created once per (size, sign) and kept.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buffer = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buffer);
    if (plan == nullptr) throw NumericalError("fftw planner failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(std::span<Complex> data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = plan_cache().get(data.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void dft_forward(std::span<Complex> data) { execute(data, FFTW_FORWARD); }
void dft_inverse(std::span<Complex> data) { execute(data, FFTW_BACKWARD); }

std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b,
                                       std::size_t out_len) {
  if (a.empty() || b.empty()) throw InvalidArgument("linear_convolution: empty operand");
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t size = std::bit_ceil(full);
  std::vector<Complex> fa(size), fb(size);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  dft_forward(fa);
  dft_forward(fb);
  for (std::size_t k = 0; k < size; ++k) fa[k] *= fb[k];
  dft_inverse(fa);
  std::vector<double> out(std::min(out_len, full));
  const double inv = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fa[i].real() * inv;
  return out;
}

std::size_t embedding_half_size(std::size_t n) {
  return std::bit_ceil(std::max<std::size_t>(n > 0 ? n - 1 : 1, 1));
}

CirculantGaussian::CirculantGaussian(std::span<const double> autocov, std::size_t n) : n_(n) {
  if (autocov.size() < 2) throw InvalidArgument("circulant embedding needs c(0..m) with m >= 1");
  const std::size_t m = autocov.size() - 1;
  if (n == 0 || n > m + 1) throw InvalidArgument("circulant embedding too short for requested length");
  const std::size_t size = 2 * m;

  std::vector<Complex> row(size);
  for (std::size_t k = 0; k <= m; ++k) row[k] = autocov[k];
  for (std::size_t k = 1; k < m; ++k) row[size - k] = autocov[k];
  dft_forward(row);

  double largest = 0.0;
  min_eigenvalue_ = row[0].real();
  for (const auto& v : row) {
    largest = std::max(largest, v.real());
    min_eigenvalue_ = std::min(min_eigenvalue_, v.real());
  }
  if (!(largest > 0.0)) throw EmbeddingError("circulant embedding has no positive eigenvalue");

  scale_.resize(size);
  const double inv_size = 1.0 / static_cast<double>(size);
  for (std::size_t k = 0; k < size; ++k) {
    double lambda = row[k].real();
    if (lambda < 0.0) {
      if (lambda < -1e-6 * largest) {
        throw EmbeddingError("circulant embedding not nonnegative definite (eigenvalue " +
                             std::to_string(lambda) + ")");
      }
      if (lambda < -1e-10 * largest) clipped_ = true;
      lambda = 0.0;
    }
    scale_[k] = std::sqrt(lambda * inv_size);
  }
}

void CirculantGaussian::sample_into(Engine& engine, std::span<double> out) const {
  if (out.size() > n_) throw InvalidArgument("requested sample longer than embedding supports");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> w(scale_.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double re = normal(engine);
    const double im = normal(engine);
    w[k] = Complex(scale_[k] * re, scale_[k] * im);
  }
  dft_forward(w);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = w[i].real();
}

std::vector<double> CirculantGaussian::sample(Engine& engine) const {
  std::vector<double> out(n_);
  sample_into(engine, out);
  return out;
}

}  // namespace mscale
