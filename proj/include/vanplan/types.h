#pragma once

#include <cstdint>
#include <random>

namespace vanplan {

// Location index; 0 is the depot.
using Index = std::uint32_t;
// Integer minutes. All feasibility arithmetic stays integral.
using Minutes = std::int64_t;
using Count = std::int64_t;
using Seed = std::uint64_t;

using Rng = std::mt19937_64;

constexpr Index depot = 0;

// Derives an independent stream seed from a base seed and a sequence of
// stream coordinates (run index, generation, offspring index, ...).
constexpr Seed derive_seed(Seed base, std::uint64_t a, std::uint64_t b = 0) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

} // namespace vanplan
