#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mecsim/ruin.hpp"
#include "mecsim/scenario.hpp"

namespace mecsim {

/// User-to-server assignment. Each user holds at most one server.
struct Association {
  std::vector<std::optional<std::size_t>> assignment;  // per user
  std::vector<std::vector<std::size_t>> admitted_sets;  // per server, in admission order
  std::vector<double> residual_buffer;                  // per server, bits (may go negative when uncapped)
  std::size_t rounds = 0;
  std::size_t proposals = 0;

  std::size_t admitted_count() const;
};

struct PreferenceProfiles {
  std::vector<std::vector<std::size_t>> user_prefs;    // servers by SNR, best first
  std::vector<std::vector<std::size_t>> server_prefs;  // proposers by zeta, ascending
};

/// Servers ordered by full-band SNR, descending; ties by server index.
/// Servers with zero SNR are unreachable and left out.
std::vector<std::vector<std::size_t>> build_user_preferences(const Scenario& scenario);

/// Orders each server's proposers by zeta = D / Psi ascending, ties by user index.
std::vector<std::vector<std::size_t>> build_server_preferences(
    const Scenario& scenario, const std::vector<std::vector<std::size_t>>& proposers,
    std::span<const double> ruin_probs);

enum class AdmissionRule {
  kWorstCaseGuard,  // admit while D_k <= residual - epsilon
  kLiteralOr,       // admit every proposer; the buffer is tracked but not enforced
};

/// Ruin-based association with synchronous proposal rounds. Psi is refreshed
/// per server at the start of every round from its current residual buffer.
/// `trace`, when given, receives the profiles of the last round.
Association ruin_association(const Scenario& scenario, const RuinModel& ruin_model,
                             AdmissionRule rule = AdmissionRule::kWorstCaseGuard,
                             PreferenceProfiles* trace = nullptr);

/// Fixed per-server ruin probabilities.
Association ruin_association(const Scenario& scenario, std::span<const double> ruin_probs,
                             AdmissionRule rule = AdmissionRule::kWorstCaseGuard);

/// Baseline without server-side preferences: one round, top-SNR server only,
/// proposers taken in user-index order until the first one that does not fit.
Association baseline_association_greedy(const Scenario& scenario);

/// Baseline ignoring buffer capacity: everyone joins their top-SNR server.
Association baseline_association_uncapped(const Scenario& scenario);

struct AdmissionMetrics {
  double admitted_fraction = 100.0;  // percent
  bool zero_denominator = false;     // no users; fraction reported as 100%
  std::vector<double> buffer_usage;  // bits per server
  double sum_buffer_usage = 0.0;
};

AdmissionMetrics admission_metrics(const Association& assoc, const Scenario& scenario);

/// Sum over servers of (buffer_free_init - epsilon).
double admissible_capacity(const Scenario& scenario);

}  // namespace mecsim
