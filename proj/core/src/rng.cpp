#include "mscale/rng.hpp"

#include <array>

namespace mscale {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

Engine make_engine(const RngSpec& rng) {
  // Eight 32-bit words: both inputs pass through independent mixers so that
  // neighbouring stream ids land far apart in the seed space.
  std::array<std::uint32_t, 8> words{};
  std::uint64_t state = mix_seed({rng.seed, rng.stream_id});
  for (std::size_t i = 0; i < words.size(); i += 2) {
    state = splitmix64(state);
    words[i] = static_cast<std::uint32_t>(state);
    words[i + 1] = static_cast<std::uint32_t>(state >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

void fill_gaussian(Engine& engine, double* out, std::size_t n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) out[i] = normal(engine);
}

std::vector<double> gaussian_noise(const RngSpec& rng, std::size_t n) {
  auto engine = make_engine(rng);
  std::vector<double> out(n);
  fill_gaussian(engine, out.data(), n);
  return out;
}

}  // namespace mscale
