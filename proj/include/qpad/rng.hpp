#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "qpad/common.hpp"

namespace qpad {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream from (seed, salts...). Concurrent consumers
/// (sweep cells, restarts) each mix their own coordinates so results do not
/// depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> salts) {
  std::uint64_t h = splitmix64(seed ^ 0x51ed270b4d2b6119ULL);
  for (std::uint64_t s : salts) h = splitmix64(h ^ (s + 0x9e3779b97f4a7c15ULL));
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Modulo draw; bias is irrelevant at the sizes used here and the sequence
// stays pinned to the engine rather than the library implementation.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline Vector random_unit_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  double norm = 0.0;
  do {
    for (Index i = 0; i < n; ++i) v[i] = normal(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace qpad
