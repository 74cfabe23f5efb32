// Counter-based deterministic random draws: a value is a pure function of
// (seed, restart, coordinate), so parallel restarts need no stream state.

#pragma once

#include <cstdint>

namespace qbell {

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform double in [0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t restart,
                              std::uint64_t coordinate) {
  std::uint64_t z = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
  z = splitmix64(z ^ (restart * 0x9e3779b97f4a7c15ULL));
  z = splitmix64(z ^ (coordinate * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double counter_uniform(std::uint64_t seed, std::uint64_t restart,
                              std::uint64_t coordinate, double lo, double hi) {
  return lo + (hi - lo) * counter_uniform(seed, restart, coordinate);
}

} // namespace qbell
