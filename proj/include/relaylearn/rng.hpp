// SPDX-License-Identifier: Apache-2.0
//
// Portable random draws.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The std:: distributions are not (libstdc++, libc++ and MSVC all
// produce different normal/uniform_int streams), so every distribution used
// by the library is defined here with a documented number of engine outputs
// per draw. That keeps datasets and trained weights identical across
// toolchains for a given seed.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <utility>

#include "relaylearn/errors.hpp"

namespace relaylearn::rng {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of stream `index` under a base seed: mix64(seed ^ mix64(index)).
// Mixing the index first keeps (seed, index) pairs from colliding the way a
// plain seed ^ index would (seed=1,index=0 vs seed=0,index=1).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index));
}

// FNV-1a, used to give named purposes ("split", "batches", ...) their own
// stream under one user seed.
constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept {
  return derive_seed(seed, hash_tag(tag));
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1): top 53 bits of one output.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]: one output. Safe to pass to log().
  double uniform01_open_low() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [lo, hi): one output.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal by Box-Muller: exactly two outputs, the cosine branch is
  // returned and the sine branch discarded so the count never depends on
  // earlier calls.
  double standard_normal() {
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Exponential with the given mean by inversion: one output.
  double exponential(double mean) { return -mean * std::log(uniform01_open_low()); }

  // Poisson by Knuth's product method: k+1 outputs for a result of k.
  // Only used for small means (the path-count feature), where it is exact
  // and cheap.
  std::uint64_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = uniform01();
    while (product > limit) {
      ++k;
      product *= uniform01();
    }
    return k;
  }

  // Unbiased integer on [0, bound) by rejection on the largest multiple of
  // bound. Consumes one output except on rejection (probability < bound/2^64).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

// Zero-mean Gaussian with standard deviation `sigma`; two engine outputs.
inline double gaussian(Rng& rng, double sigma) {
  if (!(sigma >= 0.0)) throw DomainError("gaussian: sigma must be >= 0");
  const double z = rng.standard_normal();
  return sigma == 0.0 ? 0.0 : sigma * z;  // no -0.0
}

// Fisher-Yates, back to front.
template <typename T>
void shuffle(Rng& rng, std::span<T> values) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace relaylearn::rng
