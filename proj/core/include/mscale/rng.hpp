#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace mscale {

/// Identifies one reproducible noise stream. Workers share a seed and differ
/// by stream_id.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Order-sensitive hash of a list of words through the splitmix finaliser.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) noexcept;

Engine make_engine(const RngSpec& rng);

/// n i.i.d. standard normal variates.
std::vector<double> gaussian_noise(const RngSpec& rng, std::size_t n);
void fill_gaussian(Engine& engine, double* out, std::size_t n);

}  // namespace mscale
