#include "mecsim/random.hpp"

#include <cmath>

namespace mecsim {

namespace {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) + 0x9e3779b97f4a7c15ULL * (index + 1));
}

double Rng::unit_exponential() { return -std::log(uniform_open()); }

double Rng::rayleigh(double sigma) { return sigma * std::sqrt(2.0 * unit_exponential()); }

}  // namespace mecsim
