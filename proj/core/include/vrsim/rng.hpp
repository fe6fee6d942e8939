#pragma once

#include <cstdint>
#include <random>

namespace vrsim {

/// splitmix64 step, used to derive independent substream seeds from a master
/// seed so that pose, impulse and fading streams do not interleave.
inline std::uint64_t mix_seed(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return mix_seed(master ^ mix_seed(salt));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t salt) {
  return std::mt19937_64{derive_seed(master, salt)};
}

}  // namespace vrsim
