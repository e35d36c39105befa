#include "mecsim/ruin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mecsim/config.hpp"
#include "mecsim/random.hpp"

namespace mecsim {

namespace {

// Streams claims in time order and hands each to `visit`; stops early when
// `visit` returns false. Every claim consumes exactly two unit exponentials
// (gap, size), so paths stay coupled across lambda, mu and horizon.
template <class Visit>
void for_each_claim(const SurplusParams& p, Rng& rng, Visit&& visit) {
  if (p.claim_intensity <= 0.0) return;
  double unit_epoch = 0.0;
  for (std::size_t i = 1;; ++i) {
    unit_epoch += rng.unit_exponential();
    const double size = rng.unit_exponential() / p.claim_rate;
    const double t = p.arrivals == ClaimArrivals::kPoisson
                         ? unit_epoch / p.claim_intensity
                         : static_cast<double>(i) / p.claim_intensity;
    if (t > p.horizon) return;
    if (!visit(Claim{t, size})) return;
  }
}

}  // namespace

void check_params(const SurplusParams& p) {
  if (!(p.initial_surplus >= 0.0)) throw std::invalid_argument("surplus: initial_surplus < 0");
  if (!(p.premium_rate >= 0.0)) throw std::invalid_argument("surplus: premium_rate < 0");
  if (!(p.claim_intensity >= 0.0)) throw std::invalid_argument("surplus: claim_intensity < 0");
  if (!(p.claim_rate > 0.0)) throw std::invalid_argument("surplus: claim_rate must be positive");
  if (!(p.horizon > 0.0)) throw std::invalid_argument("surplus: horizon must be positive");
}

SurplusPath evaluate_surplus_path(const SurplusParams& params, std::span<const Claim> claims) {
  check_params(params);
  SurplusPath path{params.initial_surplus, 0.0};
  double claimed = 0.0;
  for (const Claim& c : claims) {
    if (c.time > params.horizon) break;
    claimed += c.size;
    path.min_surplus =
        std::min(path.min_surplus, params.initial_surplus + params.premium_rate * c.time - claimed);
  }
  path.final_surplus = params.initial_surplus + params.premium_rate * params.horizon - claimed;
  return path;
}

SurplusPath simulate_surplus_path(const SurplusParams& params, std::uint64_t seed) {
  check_params(params);
  Rng rng(seed);
  SurplusPath path{params.initial_surplus, 0.0};
  double claimed = 0.0;
  for_each_claim(params, rng, [&](const Claim& c) {
    claimed += c.size;
    path.min_surplus =
        std::min(path.min_surplus, params.initial_surplus + params.premium_rate * c.time - claimed);
    return true;
  });
  path.final_surplus = params.initial_surplus + params.premium_rate * params.horizon - claimed;
  return path;
}

RuinEstimate ruin_probability_mc(const SurplusParams& params, std::size_t n_paths,
                                 std::uint64_t seed) {
  check_params(params);
  if (n_paths < 100) throw std::invalid_argument("ruin_probability_mc: need at least 100 paths");
  std::size_t ruined = 0;
  if (params.initial_surplus < params.epsilon) {
    ruined = n_paths;
  } else {
    for (std::size_t i = 0; i < n_paths; ++i) {
      Rng rng(derive_seed(seed, i));
      double claimed = 0.0;
      bool hit = false;
      for_each_claim(params, rng, [&](const Claim& c) {
        claimed += c.size;
        hit = params.initial_surplus + params.premium_rate * c.time - claimed < params.epsilon;
        return !hit;
      });
      ruined += hit ? 1 : 0;
    }
  }
  RuinEstimate est;
  est.method = RuinMethod::kMonteCarlo;
  est.n_terms_or_paths = n_paths;
  est.probability = static_cast<double>(ruined) / static_cast<double>(n_paths);
  est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / static_cast<double>(n_paths));
  return est;
}

RuinEstimate ruin_probability_analytic(double initial_surplus, double premium_rate,
                                       double claim_rate, std::size_t n_terms) {
  if (n_terms == 0) throw std::domain_error("ruin_probability_analytic: n_terms must be >= 1");
  RuinEstimate est;
  est.method = RuinMethod::kAnalytic;
  est.n_terms_or_paths = n_terms;

  const double c1 = initial_surplus + premium_rate;
  double sum = 0.0;
  if (c1 <= 0.0) {
    // u = 0 with no premium: the first claim ruins; only the j = 1 term survives.
    sum = 1.0;
  } else {
    for (std::size_t j = 1; j <= n_terms; ++j) {
      const double cj = initial_surplus + static_cast<double>(j) * premium_rate;
      const double x = claim_rate * cj;
      const double log_power = j == 1 ? 0.0 : static_cast<double>(j - 1) * std::log(x);
      const double log_term = log_power - std::lgamma(static_cast<double>(j)) - x;
      sum += std::exp(log_term) * (c1 / cj);
    }
  }
  est.clamped = sum < 0.0 || sum > 1.0;
  est.probability = std::clamp(sum, 0.0, 1.0);
  return est;
}

double priority_factor(double task_bits, double ruin_probability) {
  return task_bits / (ruin_probability > 0.0 ? ruin_probability : kRuinProbabilityFloor);
}

SurplusParams server_surplus_params(const SimConfig& config, const ServerSpec& server,
                                    double residual_bits) {
  const auto& r = config.ruin;
  SurplusParams p;
  p.initial_surplus = std::max(residual_bits, 0.0);
  p.premium_rate = r.premium_bits_per_slot.value_or(server.cpu_rate * r.tau_s /
                                                    config.channel.cycles_per_bit);
  p.claim_intensity = r.lambda_per_slot;
  p.claim_rate = r.claim_rate_per_bit(
      0.5 * (config.users.task_min_bits + config.users.task_max_bits));
  p.horizon = r.horizon_slots;
  p.epsilon = server.epsilon;
  p.tau = r.tau_s;
  p.arrivals = r.arrivals;
  return p;
}

RuinModel analytic_ruin_model(const SimConfig& config) {
  return [&config](std::size_t server, double residual_bits) {
    const ServerSpec& sv = config.servers.at(server);
    if (residual_bits < sv.epsilon) return 1.0;
    const SurplusParams p = server_surplus_params(config, sv, residual_bits);
    return ruin_probability_analytic(p.initial_surplus - p.epsilon, p.premium_rate, p.claim_rate,
                                     config.ruin.analytic_terms)
        .probability;
  };
}

}  // namespace mecsim
