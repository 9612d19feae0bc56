#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace plsgeom {

// Counter-based generator: every variate is a pure function of
// (seed, replicate, coordinate), so draws never depend on evaluation order
// or thread count.

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t h) noexcept {
  // 53 mantissa bits, offset to the open interval (0,1)
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_normal(std::uint64_t seed, std::uint64_t replicate,
                             std::uint64_t coordinate) noexcept {
  std::uint64_t k = splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^
                               coordinate);
  double u1 = uniform01(k);
  double u2 = uniform01(splitmix64(k));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace plsgeom
