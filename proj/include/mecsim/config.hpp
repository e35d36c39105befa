#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mecsim/ruin.hpp"
#include "mecsim/scenario.hpp"

namespace mecsim {

struct FieldError {
  std::string path;  // dotted key path, e.g. "servers.epsilon_mb[1]"
  std::string reason;
};

/// Raised by validate_config; carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<FieldError> errors);
  ConfigError(std::string path, std::string reason);
  const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
  std::vector<FieldError> errors_;
};

struct AreaConfig {
  double width_m = 5000.0;
  double height_m = 5000.0;
};

/// Distribution parameters for generated users; sizes in bits.
struct UserProfile {
  std::size_t count = 100;
  double task_min_bits = 0.0;  // D_k ~ U(task_min, task_max]
  double task_max_bits = 8.0e5;
  double tx_power_w = 0.2;
  double cpu_rate = 7.0e4;
  double eta_local = 1.0e-28;
  double deadline_s = 0.1;
};


enum class ClaimParamRole { kRate, kMean };

struct RuinConfig {
  double lambda_per_slot = 1.0;
  double tau_s = 1.0;
  /// Claim-size parameter in units of claim_unit_mb. Absent: claims default to
  /// the mean task size of the user profile.
  std::optional<double> claim_mu;
  ClaimParamRole claim_param_role = ClaimParamRole::kRate;
  double claim_unit_mb = 1.0;
  double horizon_slots = 50.0;
  std::size_t analytic_terms = 50;
  std::size_t mc_paths = 1000;
  ClaimArrivals arrivals = ClaimArrivals::kPoisson;
  std::optional<double> initial_surplus_bits;
  std::optional<double> epsilon_bits;
  std::optional<double> premium_bits_per_slot;

  /// Exponential rate of claim sizes in 1/bits; mean_task_bits is the fallback.
  double claim_rate_per_bit(double mean_task_bits) const;
};

enum class CpuSplit { kEqual, kFull };
enum class InfeasiblePolicy { kExclude, kClampAlphaLo };

struct OffloadConfig {
  double omega = 1.0;
  InfeasiblePolicy infeasible_policy = InfeasiblePolicy::kExclude;
  CpuSplit server_cpu_split = CpuSplit::kEqual;
};

struct AssociationConfig {
  /// Reads the server admission loop of the ruin-based scheme with a literal
  /// "or": every proposer is admitted in priority order, ignoring the buffer.
  bool algorithm1_literal_or = false;
};

enum class Pipeline { kRuin, kAssociation, kOffload };

struct ExperimentConfig {
  std::string preset = "custom";
  std::optional<Pipeline> pipeline;
  std::string swept_param;  // dotted path into the config tree, e.g. "ruin.epsilon_mb"
  std::vector<double> values;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
};

/// Fully defaulted and checked configuration.
struct SimConfig {
  AreaConfig area;
  std::vector<ServerSpec> servers;
  UserProfile users;
  ChannelParams channel;
  RuinConfig ruin;
  OffloadConfig offload;
  AssociationConfig association;
  ExperimentConfig experiment;
};

/// Checks every field, fills defaults, converts unit-suffixed keys to
/// internal units. Throws ConfigError listing all problems.
SimConfig validate_config(const nlohmann::json& raw);

/// Reads a JSON file; parse failures are reported as ConfigError.
nlohmann::json load_config_file(const std::string& path);

/// Deep merge: objects merge recursively, everything else is replaced.
void merge_config(nlohmann::json& base, const nlohmann::json& overrides);

/// Sets a numeric value at a dotted path ("servers.buffer_total_mb").
void set_config_value(nlohmann::json& tree, const std::string& dotted_path, double value);

const char* pipeline_name(Pipeline p);

}  // namespace mecsim
