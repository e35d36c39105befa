#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace mecsim {

struct SimConfig;
struct ServerSpec;

/// How claim epochs are placed on the time axis.
///  kPoisson: Poisson process with intensity lambda per slot (continuous time).
///  kPerSlot: one claim every 1/lambda slots; with lambda = 1 this is the
///            one-claim-per-slot model the finite-time series describes exactly.
enum class ClaimArrivals { kPoisson, kPerSlot };

/// Surplus process of a server buffer: U(t) = u + c t - S(t), sizes in bits,
/// time in slots.
struct SurplusParams {
  double initial_surplus = 0.0;  // u
  double premium_rate = 0.0;     // c, bits per slot
  double claim_intensity = 1.0;  // lambda, claims per slot
  double claim_rate = 1.0;       // mu, exponential rate of claim sizes (1/bits)
  double horizon = 1.0;          // slots
  double epsilon = 0.0;          // ruin when U < epsilon
  double tau = 1.0;              // seconds per slot, informational
  ClaimArrivals arrivals = ClaimArrivals::kPoisson;
};

/// Throws std::invalid_argument when an invariant of SurplusParams is violated.
void check_params(const SurplusParams& params);

struct Claim {
  double time = 0.0;
  double size = 0.0;
};

struct SurplusPath {
  double min_surplus = 0.0;
  double final_surplus = 0.0;
};

enum class RuinMethod { kAnalytic, kMonteCarlo };

struct RuinEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  RuinMethod method = RuinMethod::kAnalytic;
  std::size_t n_terms_or_paths = 0;
  bool clamped = false;  // analytic sum fell outside [0, 1]
};

/// Deterministic path evaluation for an explicit claim list (claims past the
/// horizon are ignored). Only claim instants can create a new minimum.
SurplusPath evaluate_surplus_path(const SurplusParams& params, std::span<const Claim> claims);

/// One simulated path; a pure function of (params, seed).
SurplusPath simulate_surplus_path(const SurplusParams& params, std::uint64_t seed);

/// Fraction of paths whose minimum drops strictly below epsilon. Path i uses
/// sub-seed derive_seed(seed, i), so estimates for different params under the
/// same seed share their random numbers. Throws std::invalid_argument when
/// n_paths < 100.
RuinEstimate ruin_probability_mc(const SurplusParams& params, std::size_t n_paths,
                                 std::uint64_t seed);

/// Finite-time series
///   sum_{j=1}^{n} (mu c_j)^{j-1}/(j-1)! exp(-mu c_j) c_1/c_j,  c_j = u + j c,
/// evaluated in log space. Exact ruin probability (epsilon = 0) of the
/// kPerSlot model with lambda = 1 and horizon n. Throws std::domain_error when
/// n_terms == 0.
RuinEstimate ruin_probability_analytic(double initial_surplus, double premium_rate,
                                       double claim_rate, std::size_t n_terms);

/// Floor applied to a zero ruin probability when forming priorities.
inline constexpr double kRuinProbabilityFloor = 1.0e-12;

/// zeta = D / Psi; smaller values are admitted first.
double priority_factor(double task_bits, double ruin_probability);

/// Ruin probability of a server as a function of its current free buffer.
using RuinModel = std::function<double(std::size_t server, double residual_bits)>;

/// Surplus parameters of one server holding `residual_bits` of free buffer:
/// premium = cpu_rate * tau / mu0 unless overridden in the ruin section.
SurplusParams server_surplus_params(const SimConfig& config, const ServerSpec& server,
                                    double residual_bits);

/// Analytic Psi of every server at its current residual (shifted by epsilon).
RuinModel analytic_ruin_model(const SimConfig& config);

}  // namespace mecsim
