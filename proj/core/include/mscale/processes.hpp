#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mscale/rng.hpp"
#include "mscale/spectral.hpp"

namespace mscale {

enum class ProcessKind { fbm, rbergomi, mrw, flsm, shuffled, external };

std::string_view to_string(ProcessKind kind) noexcept;
ProcessKind parse_process_kind(std::string_view name);

/// Fractional Brownian motion sampled at n points; `scale` is the standard
/// deviation of a lag-1 increment.
struct FbmParams {
  double hurst = 0.5;
  std::size_t n = 0;
  double scale = 1.0;
  void validate() const;
};

/// Rough Bergomi with a flat forward variance curve. `n` samples on the grid
/// t_k = k * dt.
struct RBergomiParams {
  double hurst = 0.1;
  double xi0 = 0.1;
  double eta = 1.9;
  double rho = -0.9;
  std::size_t n = 0;
  double dt = 1e-3;
  void validate() const;
};

/// Multifractal random walk. large_scale == 0 means "use n".
struct MrwParams {
  double lambda = 0.0;
  std::size_t large_scale = 0;
  double sigma = 1.0;
  std::size_t n = 0;
  std::size_t effective_scale() const noexcept { return large_scale == 0 ? n : large_scale; }
  void validate() const;
};

/// Fractional Levy stable motion. kernel_cutoff == 0 means "use n".
struct FlsmParams {
  double alpha = 2.0;
  double hurst = 0.5;
  std::size_t n = 0;
  std::size_t kernel_cutoff = 0;
  double memory_exponent() const noexcept { return hurst - 1.0 / alpha; }
  std::size_t effective_cutoff() const noexcept { return kernel_cutoff == 0 ? n : kernel_cutoff; }
  void validate() const;
};

using ProcessParams = std::variant<std::monostate, FbmParams, RBergomiParams, MrwParams, FlsmParams>;

struct PathMeta {
  ProcessKind kind = ProcessKind::external;
  ProcessParams params;
  RngSpec rng;
  bool embedding_clipped = false;
};

/// A sampled trajectory (log-price or process level) with how it was made.
struct PathSeries {
  std::vector<double> values;
  PathMeta meta;

  std::size_t size() const noexcept { return values.size(); }
  /// r_t = X_t - X_{t-1}, length size() - 1.
  std::vector<double> increments() const;
};

/// Validates length >= 2 and finiteness.
PathSeries make_series(std::vector<double> values, PathMeta meta = {});

/// Cumulative sum starting at `start`: out[0] = start, out[k+1] = out[k] + inc[k].
std::vector<double> integrate_increments(std::span<const double> increments, double start = 0.0);

/// Symmetric alpha-stable variates with unit scale (Chambers-Mallows-Stuck).
/// alpha = 2 gives N(0, 2).
std::vector<double> stable_noise(const RngSpec& rng, double alpha, std::size_t n);
void fill_stable(Engine& engine, double alpha, std::span<double> out);

/// Autocovariance of fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, double scale, std::size_t k);

/// Reusable fBm sampler: the circulant embedding is factorised once.
class FbmGenerator {
 public:
  explicit FbmGenerator(const FbmParams& params);
  PathSeries generate(const RngSpec& rng) const;
  const FbmParams& params() const noexcept { return params_; }
  bool clipped() const noexcept { return sampler_.clipped(); }

 private:
  FbmParams params_;
  CirculantGaussian sampler_;
};

PathSeries simulate_fbm(const FbmParams& params, const RngSpec& rng);

struct RBergomiPath {
  PathSeries log_price;
  std::vector<double> variance;  // v_k on the same grid
};

/// Hybrid-scheme rough Bergomi: the Volterra process sqrt(2H) int (t-s)^{H-1/2} dW_s
/// shares its Brownian driver with the price.
RBergomiPath simulate_rbergomi(const RBergomiParams& params, const RngSpec& rng);

/// Same model from an exact joint Cholesky factorisation of (W^H, W) on the
/// grid. O(n^3); limited to n <= 2048. Used to cross-check the hybrid scheme.
RBergomiPath simulate_rbergomi_exact(const RBergomiParams& params, const RngSpec& rng);

/// Covariance of the Riemann-Liouville process sqrt(2H) int_0^t (t-u)^{H-1/2} dW_u.
double volterra_covariance(double hurst, double s, double t);
/// Cross covariance E[W^H_t W_s] for the same construction.
double volterra_brownian_covariance(double hurst, double t, double s);

PathSeries simulate_mrw(const MrwParams& params, const RngSpec& rng);

/// Moving-average weights g_0 = 1, g_j = (j+1)^d - j^d.
std::vector<double> flsm_kernel(double memory_exponent, std::size_t cutoff);

PathSeries simulate_flsm(const FlsmParams& params, const RngSpec& rng);

/// Dispatch on the parameter record; rBergomi returns the log-price.
PathSeries simulate(const ProcessParams& params, const RngSpec& rng);

}  // namespace mscale
