#include "mecsim/association.hpp"

#include <algorithm>
#include <stdexcept>

namespace mecsim {

namespace {

Association empty_association(const Scenario& scenario) {
  Association a;
  a.assignment.assign(scenario.num_users(), std::nullopt);
  a.admitted_sets.assign(scenario.num_servers(), {});
  a.residual_buffer.reserve(scenario.num_servers());
  for (const auto& sv : scenario.servers()) a.residual_buffer.push_back(sv.buffer_free_init);
  return a;
}

void admit(Association& a, const Scenario& scenario, std::size_t user, std::size_t server) {
  a.assignment[user] = server;
  a.admitted_sets[server].push_back(user);
  a.residual_buffer[server] -= scenario.users()[user].task_bits;
}

bool fits(const Association& a, const Scenario& scenario, std::size_t user, std::size_t server) {
  return scenario.users()[user].task_bits <=
         a.residual_buffer[server] - scenario.servers()[server].epsilon;
}

}  // namespace

std::size_t Association::admitted_count() const {
  return static_cast<std::size_t>(
      std::count_if(assignment.begin(), assignment.end(), [](const auto& s) { return s.has_value(); }));
}

std::vector<std::vector<std::size_t>> build_user_preferences(const Scenario& scenario) {
  std::vector<std::vector<std::size_t>> prefs(scenario.num_users());
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    std::vector<double> snr(scenario.num_servers());
    for (std::size_t n = 0; n < scenario.num_servers(); ++n) {
      snr[n] = scenario.full_band_snr(k, n);
      if (snr[n] > 0.0) prefs[k].push_back(n);
    }
    std::stable_sort(prefs[k].begin(), prefs[k].end(),
                     [&](std::size_t a, std::size_t b) { return snr[a] > snr[b]; });
  }
  return prefs;
}

std::vector<std::vector<std::size_t>> build_server_preferences(
    const Scenario& scenario, const std::vector<std::vector<std::size_t>>& proposers,
    std::span<const double> ruin_probs) {
  if (proposers.size() != scenario.num_servers() || ruin_probs.size() != scenario.num_servers()) {
    throw std::invalid_argument("build_server_preferences: per-server inputs have wrong size");
  }
  std::vector<std::vector<std::size_t>> out(proposers.size());
  for (std::size_t n = 0; n < proposers.size(); ++n) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(proposers[n].size());
    for (std::size_t k : proposers[n]) {
      keyed.emplace_back(priority_factor(scenario.users()[k].task_bits, ruin_probs[n]), k);
    }
    std::sort(keyed.begin(), keyed.end());
    for (const auto& [zeta, k] : keyed) out[n].push_back(k);
  }
  return out;
}

Association ruin_association(const Scenario& scenario, const RuinModel& ruin_model,
                             AdmissionRule rule, PreferenceProfiles* trace) {
  const std::size_t n_users = scenario.num_users();
  const std::size_t n_servers = scenario.num_servers();
  Association a = empty_association(scenario);
  const auto user_prefs = build_user_preferences(scenario);
  std::vector<std::size_t> next_choice(n_users, 0);
  if (trace != nullptr) {
    trace->user_prefs = user_prefs;
    trace->server_prefs.assign(n_servers, {});
  }

  auto has_untried = [&](std::size_t k) {
    return !a.assignment[k] && next_choice[k] < user_prefs[k].size();
  };
  // Residuals only shrink and struck servers stay struck, so once no pending
  // proposal could be admitted, none ever will be.
  auto admission_possible = [&] {
    for (std::size_t k = 0; k < n_users; ++k) {
      if (!has_untried(k)) continue;
      if (rule == AdmissionRule::kLiteralOr) return true;
      for (std::size_t i = next_choice[k]; i < user_prefs[k].size(); ++i) {
        if (fits(a, scenario, k, user_prefs[k][i])) return true;
      }
    }
    return false;
  };

  while (admission_possible()) {
    ++a.rounds;
    std::vector<std::vector<std::size_t>> proposers(n_servers);
    for (std::size_t k = 0; k < n_users; ++k) {
      if (!has_untried(k)) continue;
      proposers[user_prefs[k][next_choice[k]]].push_back(k);
      ++a.proposals;
    }
    std::vector<double> psi(n_servers);
    for (std::size_t n = 0; n < n_servers; ++n) psi[n] = ruin_model(n, a.residual_buffer[n]);
    const auto server_prefs = build_server_preferences(scenario, proposers, psi);

    for (std::size_t n = 0; n < n_servers; ++n) {
      for (std::size_t k : server_prefs[n]) {
        if (rule == AdmissionRule::kLiteralOr || fits(a, scenario, k, n)) {
          admit(a, scenario, k, n);
        } else {
          ++next_choice[k];
        }
      }
    }
    if (trace != nullptr) trace->server_prefs = server_prefs;
  }
  return a;
}

Association ruin_association(const Scenario& scenario, std::span<const double> ruin_probs,
                             AdmissionRule rule) {
  if (ruin_probs.size() != scenario.num_servers()) {
    throw std::invalid_argument("ruin_association: one ruin probability per server required");
  }
  std::vector<double> fixed(ruin_probs.begin(), ruin_probs.end());
  return ruin_association(
      scenario, [fixed](std::size_t n, double) { return fixed[n]; }, rule);
}

Association baseline_association_greedy(const Scenario& scenario) {
  Association a = empty_association(scenario);
  const auto user_prefs = build_user_preferences(scenario);
  std::vector<bool> closed(scenario.num_servers(), false);
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    if (user_prefs[k].empty()) continue;
    const std::size_t n = user_prefs[k].front();
    ++a.proposals;
    if (closed[n]) continue;
    if (fits(a, scenario, k, n)) {
      admit(a, scenario, k, n);
    } else {
      closed[n] = true;
    }
  }
  a.rounds = a.proposals > 0 ? 1 : 0;
  return a;
}

Association baseline_association_uncapped(const Scenario& scenario) {
  Association a = empty_association(scenario);
  const auto user_prefs = build_user_preferences(scenario);
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    if (user_prefs[k].empty()) continue;
    ++a.proposals;
    admit(a, scenario, k, user_prefs[k].front());
  }
  a.rounds = a.proposals > 0 ? 1 : 0;
  return a;
}

AdmissionMetrics admission_metrics(const Association& assoc, const Scenario& scenario) {
  AdmissionMetrics m;
  m.buffer_usage.assign(scenario.num_servers(), 0.0);
  for (std::size_t n = 0; n < scenario.num_servers(); ++n) {
    for (std::size_t k : assoc.admitted_sets.at(n)) m.buffer_usage[n] += scenario.users()[k].task_bits;
  }
  // Summed in user order so equal admitted sets give bit-equal totals.
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    if (assoc.assignment.at(k)) m.sum_buffer_usage += scenario.users()[k].task_bits;
  }
  if (scenario.num_users() == 0) {
    m.zero_denominator = true;
    m.admitted_fraction = 100.0;
  } else {
    m.admitted_fraction = 100.0 * static_cast<double>(assoc.admitted_count()) /
                          static_cast<double>(scenario.num_users());
  }
  return m;
}

double admissible_capacity(const Scenario& scenario) {
  double total = 0.0;
  for (const auto& sv : scenario.servers()) total += sv.buffer_free_init - sv.epsilon;
  return total;
}

}  // namespace mecsim
