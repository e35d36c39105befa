#pragma once

#include <cmath>

// Canonical internal units: bits, seconds, watts, hertz, cycles.
// Sizes use decimal prefixes: 1 KB = 8000 bits, 1 MB = 8e6 bits.
namespace mecsim::units {

inline constexpr double kBitsPerKB = 8.0e3;
inline constexpr double kBitsPerMB = 8.0e6;

constexpr double kb_to_bits(double kb) { return kb * kBitsPerKB; }
constexpr double mb_to_bits(double mb) { return mb * kBitsPerMB; }
constexpr double bits_to_mb(double bits) { return bits / kBitsPerMB; }
constexpr double mw_to_w(double mw) { return mw * 1.0e-3; }
constexpr double ms_to_s(double ms) { return ms * 1.0e-3; }
constexpr double mhz_to_hz(double mhz) { return mhz * 1.0e6; }

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace mecsim::units
