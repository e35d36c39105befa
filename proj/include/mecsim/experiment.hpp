#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace mecsim {

struct SimConfig;

/// A sweep over one configuration parameter with independent replications.
/// The base configuration is a raw tree; each swept value is written into it
/// and the result is validated before anything runs.
struct ExperimentPreset {
  std::string name = "custom";
  std::string swept_param;  // dotted config path; empty runs the base config once per replication
  std::vector<double> values;
  std::size_t replications = 1;
  std::uint64_t seed = 1;
  nlohmann::json base_config = nlohmann::json::object();
};

struct ResultRow {
  std::string preset;
  std::string swept_param;
  double swept_value = 0.0;
  std::size_t replication = 0;
  std::string metric;
  double value = 0.0;
};

struct Aggregate {
  double swept_value = 0.0;
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count); 0 for one sample
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<Aggregate> aggregates;

  /// Aggregate for (swept_value, metric), if present.
  const Aggregate* find(double swept_value, const std::string& metric) const;
};

struct RunOptions {
  /// Worker count; unset reads MECSIM_THREADS (0 or unset = hardware concurrency).
  std::optional<std::size_t> threads;
};

/// Names of the presets compiled into the binary.
std::vector<std::string> builtin_preset_names();

/// Raw configuration tree of a built-in preset. Throws ConfigError for unknown names.
nlohmann::json builtin_preset_config(const std::string& name);

/// Reads the experiment section of a full configuration tree. Throws ConfigError.
ExperimentPreset preset_from_config(const nlohmann::json& config);

/// Per-replication sub-seed; shared by every swept value so the sweep uses
/// common random numbers.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication);

/// Metrics of one replication of the configured pipeline, in emission order.
std::vector<std::pair<std::string, double>> run_replication(const SimConfig& config,
                                                            std::uint64_t sub_seed);

/// Runs every (swept value, replication) pair. Output is independent of the
/// worker count. Configuration errors surface as ConfigError before any work;
/// a failing replication aborts the run with its sub-seed in the message.
ExperimentResult run_experiment(const ExperimentPreset& preset, const RunOptions& options = {});

/// Mean and standard error per (swept_value, metric), in first-seen order.
std::vector<Aggregate> aggregate_rows(const std::vector<ResultRow>& rows);

/// Values as they appear in the CSV (9 significant digits).
double quantize_for_csv(double value);

inline constexpr const char* kCsvHeader = "preset,swept_param,swept_value,replication,metric,value";

std::string format_csv(const ExperimentResult& result);

/// Writes format_csv(result) to `path`; returns bytes written. Throws
/// std::runtime_error naming the path when it cannot be written.
std::size_t emit_csv(const ExperimentResult& result, const std::string& path);

std::size_t resolve_thread_count(const RunOptions& options);

}  // namespace mecsim
