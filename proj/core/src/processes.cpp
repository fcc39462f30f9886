#include "mscale/processes.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "mscale/error.hpp"

namespace mscale {
namespace {

constexpr double kPi = std::numbers::pi;

void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + ": non-finite value");
  }
}

double open_uniform(Engine& engine) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(engine);
    if (u > 0.0 && u < 1.0) return u;
  }
}

// Spectrum of the zero-padded FLSM kernel, shared across paths with the same
// (d, cutoff, fft size). Read-mostly.
class KernelSpectrumCache {
 public:
  using Key = std::tuple<double, std::size_t, std::size_t>;

  std::shared_ptr<const std::vector<Complex>> get(double d, std::size_t cutoff, std::size_t size) {
    const Key key{d, cutoff, size};
    {
      std::shared_lock lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto kernel = flsm_kernel(d, cutoff);
    auto spectrum = std::make_shared<std::vector<Complex>>(size);
    std::copy(kernel.begin(), kernel.end(), spectrum->begin());
    dft_forward(*spectrum);
    std::unique_lock lock(mutex_);
    if (entries_.size() > 64) entries_.clear();
    return entries_.emplace(key, std::move(spectrum)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const std::vector<Complex>>> entries_;
};

KernelSpectrumCache& kernel_cache() {
  static KernelSpectrumCache cache;
  return cache;
}

}  // namespace

std::string_view to_string(ProcessKind kind) noexcept {
  switch (kind) {
    case ProcessKind::fbm: return "fbm";
    case ProcessKind::rbergomi: return "rbergomi";
    case ProcessKind::mrw: return "mrw";
    case ProcessKind::flsm: return "flsm";
    case ProcessKind::shuffled: return "shuffled";
    case ProcessKind::external: return "external";
  }
  return "external";
}

ProcessKind parse_process_kind(std::string_view name) {
  for (auto kind : {ProcessKind::fbm, ProcessKind::rbergomi, ProcessKind::mrw, ProcessKind::flsm,
                    ProcessKind::shuffled, ProcessKind::external}) {
    if (name == to_string(kind)) return kind;
  }
  throw InvalidArgument("unknown process kind '" + std::string(name) + "'");
}

void FbmParams::validate() const {
  require(hurst > 0.0 && hurst < 1.0, "fbm: hurst must lie in (0, 1)");
  require(n >= 2, "fbm: n must be >= 2");
  require(scale > 0.0 && std::isfinite(scale), "fbm: scale must be > 0");
}

void RBergomiParams::validate() const {
  require(hurst > 0.0 && hurst <= 0.5, "rbergomi: hurst must lie in (0, 0.5]");
  require(xi0 > 0.0, "rbergomi: xi0 must be > 0");
  require(eta >= 0.0, "rbergomi: eta must be >= 0");
  require(rho >= -1.0 && rho <= 1.0, "rbergomi: rho must lie in [-1, 1]");
  require(n >= 2, "rbergomi: n must be >= 2");
  require(dt > 0.0 && std::isfinite(dt), "rbergomi: dt must be > 0");
}

void MrwParams::validate() const {
  require(lambda >= 0.0, "mrw: lambda must be >= 0");
  require(sigma > 0.0, "mrw: sigma must be > 0");
  require(n >= 2, "mrw: n must be >= 2");
  const auto scale = effective_scale();
  require(scale > 1 && scale <= n, "mrw: large_scale must satisfy 1 < L <= n");
}

void FlsmParams::validate() const {
  require(alpha > 0.0 && alpha <= 2.0, "flsm: alpha must lie in (0, 2]");
  require(hurst > 0.0 && hurst < 1.0, "flsm: hurst must lie in (0, 1)");
  require(n >= 2, "flsm: n must be >= 2");
  require(memory_exponent() > -1.0, "flsm: hurst - 1/alpha must exceed -1");
  require(effective_cutoff() >= 1, "flsm: kernel_cutoff must be >= 1");
}

std::vector<double> PathSeries::increments() const {
  std::vector<double> out(values.size() > 0 ? values.size() - 1 : 0);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values[i + 1] - values[i];
  return out;
}

PathSeries make_series(std::vector<double> values, PathMeta meta) {
  if (values.size() < 2) throw InvalidArgument("path series needs at least 2 values");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("path series contains non-finite values");
  }
  return PathSeries{std::move(values), std::move(meta)};
}

std::vector<double> integrate_increments(std::span<const double> increments, double start) {
  std::vector<double> out(increments.size() + 1);
  out[0] = start;
  for (std::size_t i = 0; i < increments.size(); ++i) out[i + 1] = out[i] + increments[i];
  return out;
}

void fill_stable(Engine& engine, double alpha, std::span<double> out) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidArgument("stable_noise: alpha must lie in (0, 2]");
  for (double& x : out) {
    const double v = kPi * (open_uniform(engine) - 0.5);
    const double w = -std::log(open_uniform(engine));
    if (alpha == 1.0) {
      x = std::tan(v);
    } else {
      x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
          std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
    }
  }
}

std::vector<double> stable_noise(const RngSpec& rng, double alpha, std::size_t n) {
  auto engine = make_engine(rng);
  std::vector<double> out(n);
  fill_stable(engine, alpha, out);
  return out;
}

double fgn_autocovariance(double hurst, double scale, std::size_t k) {
  const double two_h = 2.0 * hurst;
  const double kd = static_cast<double>(k);
  const double lower = k == 0 ? 1.0 : std::pow(kd - 1.0, two_h);
  return 0.5 * scale * scale * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) + lower);
}

namespace {

std::vector<double> fgn_autocov_sequence(const FbmParams& p) {
  const std::size_t m = embedding_half_size(p.n);
  std::vector<double> c(m + 1);
  for (std::size_t k = 0; k <= m; ++k) c[k] = fgn_autocovariance(p.hurst, p.scale, k);
  return c;
}

}  // namespace

FbmGenerator::FbmGenerator(const FbmParams& params)
    : params_((params.validate(), params)), sampler_(fgn_autocov_sequence(params), params.n - 1) {}

PathSeries FbmGenerator::generate(const RngSpec& rng) const {
  auto engine = make_engine(rng);
  std::vector<double> increments(params_.n - 1);
  sampler_.sample_into(engine, increments);
  PathMeta meta{ProcessKind::fbm, params_, rng, sampler_.clipped()};
  return PathSeries{integrate_increments(increments), std::move(meta)};
}

PathSeries simulate_fbm(const FbmParams& params, const RngSpec& rng) {
  return FbmGenerator(params).generate(rng);
}

namespace {

// Shared tail of both rBergomi constructions: variance from the Volterra
// process, then log-Euler for the price.
RBergomiPath assemble_rbergomi(const RBergomiParams& p, const RngSpec& rng,
                               std::span<const double> volterra, std::span<const double> dw,
                               std::span<const double> dw_perp) {
  const std::size_t steps = p.n - 1;
  std::vector<double> variance(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    const double t = static_cast<double>(i) * p.dt;
    const double compensator = 0.5 * p.eta * p.eta * std::pow(t, 2.0 * p.hurst);
    variance[i] = p.xi0 * std::exp(p.eta * volterra[i] - compensator);
  }
  const double rho_perp = std::sqrt(std::max(0.0, 1.0 - p.rho * p.rho));
  std::vector<double> log_price(p.n);
  log_price[0] = 0.0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double v = variance[i];
    log_price[i + 1] =
        log_price[i] - 0.5 * v * p.dt + std::sqrt(v) * (p.rho * dw[i] + rho_perp * dw_perp[i]);
  }
  require_finite(variance, "rbergomi variance");
  require_finite(log_price, "rbergomi log-price");
  PathMeta meta{ProcessKind::rbergomi, p, rng, false};
  return RBergomiPath{PathSeries{std::move(log_price), std::move(meta)}, std::move(variance)};
}

}  // namespace

RBergomiPath simulate_rbergomi(const RBergomiParams& p, const RngSpec& rng) {
  p.validate();
  const std::size_t steps = p.n - 1;
  const double a = p.hurst - 0.5;
  const double dt = p.dt;

  // Joint law of (dW_j, int_{t_j}^{t_{j+1}} (t_{j+1}-s)^a dW_s).
  const double var_w = dt;
  const double cov = std::pow(dt, a + 1.0) / (a + 1.0);
  const double var_i = std::pow(dt, 2.0 * a + 1.0) / (2.0 * a + 1.0);
  const double l21 = cov / std::sqrt(var_w);
  const double l22 = std::sqrt(std::max(0.0, var_i - l21 * l21));

  auto engine = make_engine(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dw(steps), singular(steps), dw_perp(steps);
  const double sqrt_dt = std::sqrt(dt);
  for (std::size_t j = 0; j < steps; ++j) {
    const double z1 = normal(engine);
    const double z2 = normal(engine);
    const double z3 = normal(engine);
    dw[j] = sqrt_dt * z1;
    singular[j] = l21 * z1 + l22 * z2;
    dw_perp[j] = sqrt_dt * z3;
  }

  // Riemann part: increment dW_{i-k} weighted by the kernel at the optimal
  // point b_k of [k-1, k] steps back.
  std::vector<double> weights(steps + 1, 0.0);
  for (std::size_t k = 2; k <= steps; ++k) {
    const double kd = static_cast<double>(k);
    if (a == 0.0) {
      weights[k] = 1.0;
    } else {
      const double b = std::pow((std::pow(kd, a + 1.0) - std::pow(kd - 1.0, a + 1.0)) / (a + 1.0), 1.0 / a);
      weights[k] = std::pow(b * dt, a);
    }
  }
  std::vector<double> riemann(steps + 1, 0.0);
  if (steps >= 2) riemann = linear_convolution(weights, dw, steps + 1);

  std::vector<double> volterra(p.n, 0.0);
  const double norm = std::sqrt(2.0 * p.hurst);
  for (std::size_t i = 1; i < p.n; ++i) volterra[i] = norm * (singular[i - 1] + riemann[i]);
  return assemble_rbergomi(p, rng, volterra, dw, dw_perp);
}

double volterra_covariance(double hurst, double s, double t) {
  if (s > t) std::swap(s, t);
  if (s <= 0.0) return 0.0;
  if (s == t) return std::pow(t, 2.0 * hurst);
  const double a = hurst - 0.5;
  const double gap = t - s;
  // v = w^{1/(a+1)} absorbs the v^a endpoint singularity.
  const double p = 1.0 / (a + 1.0);
  auto integrand = [&](double w) { return std::pow(gap + std::pow(w, p), a); };
  const double upper = std::pow(s, a + 1.0);
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, upper, 15, 1e-13);
  return 2.0 * hurst * p * integral;
}

double volterra_brownian_covariance(double hurst, double t, double s) {
  const double lo = std::min(s, t);
  if (lo <= 0.0) return 0.0;
  const double a = hurst - 0.5;
  return std::sqrt(2.0 * hurst) / (a + 1.0) * (std::pow(t, a + 1.0) - std::pow(t - lo, a + 1.0));
}

namespace {

Eigen::MatrixXd exact_rbergomi_factor(const RBergomiParams& p) {
  const std::size_t m = p.n - 1;
  const auto dim = static_cast<Eigen::Index>(2 * m);
  Eigen::MatrixXd cov(dim, dim);
  for (std::size_t i = 0; i < m; ++i) {
    const double ti = static_cast<double>(i + 1) * p.dt;
    for (std::size_t j = 0; j <= i; ++j) {
      const double tj = static_cast<double>(j + 1) * p.dt;
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      const auto mm = static_cast<Eigen::Index>(m);
      const double hh = volterra_covariance(p.hurst, tj, ti);
      cov(ii, jj) = cov(jj, ii) = hh;
      cov(mm + ii, mm + jj) = cov(mm + jj, mm + ii) = tj;
      cov(ii, mm + jj) = cov(mm + jj, ii) = volterra_brownian_covariance(p.hurst, ti, tj);
      cov(jj, mm + ii) = cov(mm + ii, jj) = volterra_brownian_covariance(p.hurst, tj, ti);
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

std::shared_ptr<const Eigen::MatrixXd> cached_exact_factor(const RBergomiParams& p) {
  static std::mutex mutex;
  static std::map<std::tuple<double, std::size_t, double>, std::shared_ptr<const Eigen::MatrixXd>> cache;
  const auto key = std::make_tuple(p.hurst, p.n, p.dt);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto factor = std::make_shared<const Eigen::MatrixXd>(exact_rbergomi_factor(p));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(factor)).first->second;
}

}  // namespace

RBergomiPath simulate_rbergomi_exact(const RBergomiParams& p, const RngSpec& rng) {
  p.validate();
  require(p.n <= 2048, "rbergomi exact simulator limited to n <= 2048");
  const std::size_t m = p.n - 1;
  const auto dim = static_cast<Eigen::Index>(2 * m);
  const auto factor = cached_exact_factor(p);

  auto engine = make_engine(rng);
  Eigen::VectorXd z(dim);
  fill_gaussian(engine, z.data(), static_cast<std::size_t>(dim));
  std::vector<double> dw_perp(m);
  fill_gaussian(engine, dw_perp.data(), m);
  for (double& x : dw_perp) x *= std::sqrt(p.dt);
  const Eigen::VectorXd x = *factor * z;

  std::vector<double> volterra(p.n, 0.0), dw(m);
  double previous = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    volterra[i + 1] = x(static_cast<Eigen::Index>(i));
    const double w = x(static_cast<Eigen::Index>(m + i));
    dw[i] = w - previous;
    previous = w;
  }
  return assemble_rbergomi(p, rng, volterra, dw, dw_perp);
}

PathSeries simulate_mrw(const MrwParams& p, const RngSpec& rng) {
  p.validate();
  const std::size_t steps = p.n - 1;
  const double big_l = static_cast<double>(p.effective_scale());
  const double lambda2 = p.lambda * p.lambda;

  auto engine = make_engine(rng);
  std::vector<double> eps(steps);
  fill_gaussian(engine, eps.data(), steps);

  std::vector<double> omega(steps, 0.0);
  bool clipped = false;
  if (lambda2 > 0.0) {
    const std::size_t m = embedding_half_size(p.n);
    std::vector<double> c(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      c[k] = lambda2 * std::max(0.0, std::log(big_l / (static_cast<double>(k) + 1.0)));
    }
    CirculantGaussian sampler(c, steps);
    sampler.sample_into(engine, omega);
    clipped = sampler.clipped();
    const double mean = -lambda2 * std::log(big_l);
    for (double& w : omega) w += mean;
  }

  std::vector<double> increments(steps);
  for (std::size_t k = 0; k < steps; ++k) increments[k] = p.sigma * eps[k] * std::exp(omega[k]);
  require_finite(increments, "mrw increments");
  PathMeta meta{ProcessKind::mrw, p, rng, clipped};
  return PathSeries{integrate_increments(increments), std::move(meta)};
}

std::vector<double> flsm_kernel(double d, std::size_t cutoff) {
  if (!(d > -1.0)) throw InvalidArgument("flsm kernel: memory exponent must exceed -1");
  if (cutoff == 0) throw InvalidArgument("flsm kernel: cutoff must be >= 1");
  std::vector<double> g(cutoff);
  g[0] = 1.0;
  for (std::size_t j = 1; j < cutoff; ++j) {
    const double jd = static_cast<double>(j);
    g[j] = std::pow(jd + 1.0, d) - std::pow(jd, d);
  }
  return g;
}

PathSeries simulate_flsm(const FlsmParams& p, const RngSpec& rng) {
  p.validate();
  const std::size_t steps = p.n - 1;
  const std::size_t cutoff = p.effective_cutoff();
  const double d = p.memory_exponent();

  auto engine = make_engine(rng);
  std::vector<double> noise(steps + cutoff - 1);
  fill_stable(engine, p.alpha, noise);

  std::vector<double> increments(steps);
  if (d == 0.0 || cutoff == 1) {
    // Kernel is a unit impulse: increments are the noise itself.
    std::copy_n(noise.begin() + static_cast<std::ptrdiff_t>(cutoff - 1), steps, increments.begin());
  } else {
    const std::size_t size = std::bit_ceil(noise.size() + cutoff - 1);
    auto spectrum = kernel_cache().get(d, cutoff, size);
    std::vector<Complex> work(size);
    std::copy(noise.begin(), noise.end(), work.begin());
    dft_forward(work);
    for (std::size_t k = 0; k < size; ++k) work[k] *= (*spectrum)[k];
    dft_inverse(work);
    const double inv = 1.0 / static_cast<double>(size);
    for (std::size_t k = 0; k < steps; ++k) increments[k] = work[k + cutoff - 1].real() * inv;
  }
  require_finite(increments, "flsm increments");
  PathMeta meta{ProcessKind::flsm, p, rng, false};
  return PathSeries{integrate_increments(increments), std::move(meta)};
}

PathSeries simulate(const ProcessParams& params, const RngSpec& rng) {
  struct Visitor {
    const RngSpec& rng;
    PathSeries operator()(const std::monostate&) const {
      throw InvalidArgument("simulate: no process parameters given");
    }
    PathSeries operator()(const FbmParams& p) const { return simulate_fbm(p, rng); }
    PathSeries operator()(const RBergomiParams& p) const { return simulate_rbergomi(p, rng).log_price; }
    PathSeries operator()(const MrwParams& p) const { return simulate_mrw(p, rng); }
    PathSeries operator()(const FlsmParams& p) const { return simulate_flsm(p, rng); }
  };
  return std::visit(Visitor{rng}, params);
}

}  // namespace mscale
