#pragma once

#include <cstdint>
#include <random>

namespace skewpnn {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a master seed and two stream
// coordinates (e.g. iteration and bat index) via SplitMix64 finalization.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

inline Rng make_rng(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0) {
  return Rng(derive_seed(master, a, b));
}

}  // namespace skewpnn
