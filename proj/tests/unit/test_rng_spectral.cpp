#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mscale/processes.hpp"
#include "mscale/rng.hpp"
#include "mscale/spectral.hpp"

using namespace mscale;
using Catch::Approx;

TEST_CASE("gaussian noise moments", "[rng]") {
  const auto x = gaussian_noise({7, 0}, 1'000'000);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= x.size() - 1;
  CHECK(std::abs(mean) < 4.0 / 1000.0);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("same seed and stream reproduce the draws bit for bit", "[rng]") {
  const auto a = gaussian_noise({42, 3}, 1000);
  const auto b = gaussian_noise({42, 3}, 1000);
  CHECK(a == b);
  CHECK(a != gaussian_noise({42, 4}, 1000));
}

TEST_CASE("distinct streams are uncorrelated", "[rng]") {
  const std::size_t n = 1'000'000;
  const auto a = gaussian_noise({7, 0}, n);
  const auto b = gaussian_noise({7, 1}, n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += a[i] * b[i];
    saa += a[i] * a[i];
    sbb += b[i] * b[i];
  }
  CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
}

TEST_CASE("mix_seed is order sensitive", "[rng]") {
  CHECK(mix_seed({1, 2, 3}) == mix_seed({1, 2, 3}));
  CHECK(mix_seed({1, 2, 3}) != mix_seed({3, 2, 1}));
  CHECK(mix_seed({0, 0}) != mix_seed({0, 1}));
}

TEST_CASE("dft round trip", "[spectral]") {
  std::vector<Complex> x(48);
  auto engine = make_engine({1, 0});
  std::normal_distribution<double> z;
  for (auto& c : x) c = {z(engine), z(engine)};
  auto y = x;
  dft_forward(y);
  dft_inverse(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(y[i].real() / x.size() == Approx(x[i].real()).margin(1e-12));
    CHECK(y[i].imag() / x.size() == Approx(x[i].imag()).margin(1e-12));
  }
}

TEST_CASE("dft matches the direct sum", "[spectral]") {
  const std::size_t n = 12;
  std::vector<Complex> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = {std::sin(0.3 * j), std::cos(1.7 * j)};
  auto y = x;
  dft_forward(y);
  for (std::size_t k = 0; k < n; ++k) {
    Complex direct{};
    for (std::size_t j = 0; j < n; ++j) direct += x[j] * std::polar(1.0, -2.0 * M_PI * double(j * k) / n);
    CHECK(std::abs(direct - y[k]) < 1e-10);
  }
}

TEST_CASE("linear convolution against the direct sum", "[spectral]") {
  std::vector<double> a{1.0, -2.0, 0.5, 3.0, 0.25};
  std::vector<double> b{0.5, 1.5, -1.0};
  const auto c = linear_convolution(a, b, a.size() + b.size() - 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double direct = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j < a.size() && k - j < b.size()) direct += a[j] * b[k - j];
    }
    CHECK(c[k] == Approx(direct).margin(1e-12));
  }
  CHECK(linear_convolution(a, b, 3).size() == 3);
}

TEST_CASE("embedding half size is a power of two covering n - 1", "[spectral]") {
  CHECK(embedding_half_size(2) == 1);
  CHECK(embedding_half_size(3) == 2);
  CHECK(embedding_half_size(1000) == 1024);
  CHECK(embedding_half_size(1025) == 1024);
  CHECK(embedding_half_size(1026) == 2048);
}

TEST_CASE("circulant sampler reproduces the target autocovariance", "[spectral]") {
  const std::size_t n = 64;
  const std::size_t m = embedding_half_size(n);
  std::vector<double> c(m + 1);
  for (std::size_t k = 0; k <= m; ++k) c[k] = std::pow(0.6, double(k));  // AR(1)
  CirculantGaussian sampler(c, n);
  CHECK_FALSE(sampler.clipped());
  auto engine = make_engine({11, 0});
  const int reps = 20000;
  double c0 = 0, c1 = 0, c3 = 0;
  for (int r = 0; r < reps; ++r) {
    const auto x = sampler.sample(engine);
    REQUIRE(x.size() == n);
    c0 += x[10] * x[10];
    c1 += x[10] * x[11];
    c3 += x[10] * x[13];
  }
  CHECK(c0 / reps == Approx(1.0).margin(0.05));
  CHECK(c1 / reps == Approx(0.6).margin(0.05));
  CHECK(c3 / reps == Approx(0.216).margin(0.05));
}

TEST_CASE("circulant sampler rejects a non-embeddable sequence", "[spectral]") {
  std::vector<double> c{1.0, 2.0, 1.0};  // not positive definite
  CHECK_THROWS(CirculantGaussian(c, 3));
}
