#pragma once

#include <cstdint>
#include <random>

namespace mecsim {

/// Deterministic seed splitting: child = mix(parent, index). Distinct indices
/// under one parent give distinct children (the mixer is a bijection of the
/// combined word, and the combination is injective in `index` for fixed parent).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Thin wrapper over std::mt19937_64 with portable sampling routines.
/// All conversions are written out here so streams are bit-identical across
/// standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }
  /// Uniform in (0, 1), never touching either end.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Exponential with unit rate via inversion; always finite and positive.
  double unit_exponential();
  double exponential(double rate) { return unit_exponential() / rate; }
  /// Rayleigh amplitude with scale parameter sigma.
  double rayleigh(double sigma);

private:
  std::mt19937_64 engine_;
};

}  // namespace mecsim
