#pragma once

#include <cstdint>
#include <random>

namespace modehunt {

/// splitmix64 finalizer; used to derive decorrelated per-trial seeds.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed for sub-stream (a, b) of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Seeded uniform generator. Doubles are built from raw 53-bit draws so the
/// produced streams are identical across platforms, not just across runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer on [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace modehunt
