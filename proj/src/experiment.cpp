#include "mecsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mecsim/association.hpp"
#include "mecsim/config.hpp"
#include "mecsim/offload.hpp"
#include "mecsim/random.hpp"
#include "mecsim/ruin.hpp"
#include "mecsim/scenario.hpp"
#include "mecsim/units.hpp"
#include "presets_embedded.hpp"

namespace mecsim {

using nlohmann::json;

namespace {

using Metrics = std::vector<std::pair<std::string, double>>;

SurplusParams standalone_surplus_params(const SimConfig& config) {
  if (config.servers.empty() && (!config.ruin.initial_surplus_bits || !config.ruin.premium_bits_per_slot)) {
    throw ConfigError("ruin", "initial_surplus_mb and premium_mb_per_slot are required without servers");
  }
  SurplusParams p;
  if (!config.servers.empty()) {
    p = server_surplus_params(config, config.servers.front(), config.servers.front().buffer_free_init);
  } else {
    p.claim_intensity = config.ruin.lambda_per_slot;
    p.claim_rate = config.ruin.claim_rate_per_bit(
        0.5 * (config.users.task_min_bits + config.users.task_max_bits));
    p.horizon = config.ruin.horizon_slots;
    p.tau = config.ruin.tau_s;
    p.arrivals = config.ruin.arrivals;
  }
  if (config.ruin.initial_surplus_bits) p.initial_surplus = *config.ruin.initial_surplus_bits;
  if (config.ruin.epsilon_bits) p.epsilon = *config.ruin.epsilon_bits;
  if (config.ruin.premium_bits_per_slot) p.premium_rate = *config.ruin.premium_bits_per_slot;
  return p;
}

Metrics run_ruin(const SimConfig& config, std::uint64_t sub_seed) {
  const SurplusParams p = standalone_surplus_params(config);
  const RuinEstimate mc = ruin_probability_mc(p, config.ruin.mc_paths, sub_seed);
  RuinEstimate an;
  if (p.initial_surplus < p.epsilon) {
    an.probability = 1.0;
  } else {
    an = ruin_probability_analytic(p.initial_surplus - p.epsilon, p.premium_rate, p.claim_rate,
                                   config.ruin.analytic_terms);
  }
  return {{"ruin_mc", mc.probability},
          {"ruin_mc_se", mc.std_error},
          {"ruin_analytic", an.probability},
          {"ruin_analytic_clamped", an.clamped ? 1.0 : 0.0}};
}

AdmissionRule admission_rule(const SimConfig& config) {
  return config.association.algorithm1_literal_or ? AdmissionRule::kLiteralOr
                                                  : AdmissionRule::kWorstCaseGuard;
}

Metrics run_association(const SimConfig& config, std::uint64_t sub_seed) {
  const Scenario scenario = generate_scenario(config, sub_seed);
  const Association proposed = ruin_association(scenario, analytic_ruin_model(config), admission_rule(config));
  const Association greedy = baseline_association_greedy(scenario);
  const Association uncapped = baseline_association_uncapped(scenario);
  const auto mp = admission_metrics(proposed, scenario);
  const auto mg = admission_metrics(greedy, scenario);
  const auto mu = admission_metrics(uncapped, scenario);
  return {{"users", static_cast<double>(scenario.num_users())},
          {"admitted_fraction_undefined", mp.zero_denominator ? 1.0 : 0.0},
          {"admitted_fraction_proposed", mp.admitted_fraction},
          {"admitted_fraction_greedy", mg.admitted_fraction},
          {"admitted_fraction_uncapped", mu.admitted_fraction},
          {"buffer_usage_mb_proposed", units::bits_to_mb(mp.sum_buffer_usage)},
          {"buffer_usage_mb_greedy", units::bits_to_mb(mg.sum_buffer_usage)},
          {"buffer_usage_mb_uncapped", units::bits_to_mb(mu.sum_buffer_usage)},
          {"buffer_capacity_mb", units::bits_to_mb(admissible_capacity(scenario))},
          {"rounds_proposed", static_cast<double>(proposed.rounds)}};
}

double reduction_pct(double baseline, double value) {
  return baseline > 0.0 ? 100.0 * (baseline - value) / baseline : 0.0;
}

Metrics run_offload(const SimConfig& config, std::uint64_t sub_seed) {
  const Scenario scenario = generate_scenario(config, sub_seed);
  const Association assoc = ruin_association(scenario, analytic_ruin_model(config), admission_rule(config));
  const auto contexts = build_offload_contexts(scenario, assoc, config);

  std::vector<OffloadContext> ctxs;
  std::vector<OffloadDecision> optimal;
  std::vector<OffloadDecision> equal;
  std::vector<OffloadDecision> all;
  std::size_t infeasible = 0;
  std::size_t equal_infeasible = 0;
  std::size_t all_infeasible = 0;
  for (const auto& uc : contexts) {
    OffloadDecision d = optimal_offload(uc.ctx);
    if (!d.feasible) {
      ++infeasible;
      if (config.offload.infeasible_policy == InfeasiblePolicy::kExclude) continue;
    }
    ctxs.push_back(uc.ctx);
    optimal.push_back(d);
    equal.push_back(baseline_offload(uc.ctx, BaselinePolicy::kEqual));
    all.push_back(baseline_offload(uc.ctx, BaselinePolicy::kAll));
    equal_infeasible += equal.back().feasible ? 0 : 1;
    all_infeasible += all.back().feasible ? 0 : 1;
  }
  const double omega = config.offload.omega;
  const double e_opt = total_energy(optimal, ctxs, omega);
  const double e_eq = total_energy(equal, ctxs, omega);
  const double e_all = total_energy(all, ctxs, omega);
  return {{"associated_users", static_cast<double>(contexts.size())},
          {"evaluated_users", static_cast<double>(ctxs.size())},
          {"infeasible_users", static_cast<double>(infeasible)},
          {"equal_infeasible_users", static_cast<double>(equal_infeasible)},
          {"all_infeasible_users", static_cast<double>(all_infeasible)},
          {"energy_optimal_j", e_opt},
          {"energy_equal_j", e_eq},
          {"energy_all_j", e_all},
          {"reduction_vs_all_pct", reduction_pct(e_all, e_opt)},
          {"reduction_vs_equal_pct", reduction_pct(e_eq, e_opt)},
          {"server_energy_optimal_j", total_server_energy(optimal, ctxs)}};
}

struct Task {
  std::size_t value_index = 0;
  std::size_t replication = 0;
};

struct TaskOutcome {
  Metrics metrics;
  std::string error;
  bool failed = false;
};

}  // namespace

const Aggregate* ExperimentResult::find(double swept_value, const std::string& metric) const {
  for (const auto& a : aggregates) {
    if (a.swept_value == swept_value && a.metric == metric) return &a;
  }
  return nullptr;
}

std::vector<std::string> builtin_preset_names() {
  std::vector<std::string> names;
  for (const auto& p : detail::embedded_presets()) names.emplace_back(p.name);
  return names;
}

json builtin_preset_config(const std::string& name) {
  for (const auto& p : detail::embedded_presets()) {
    if (name == p.name) return json::parse(p.json, nullptr, true, /*ignore_comments=*/true);
  }
  std::string known;
  for (const auto& n : builtin_preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("--preset", "unknown preset '" + name + "' (known: " + known + ")");
}

ExperimentPreset preset_from_config(const json& config) {
  const SimConfig checked = validate_config(config);
  ExperimentPreset p;
  p.name = checked.experiment.preset;
  p.swept_param = checked.experiment.swept_param;
  p.values = checked.experiment.values;
  p.replications = checked.experiment.replications;
  p.seed = checked.experiment.seed;
  p.base_config = config;
  return p;
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication) {
  return derive_seed(seed, replication);
}

std::vector<std::pair<std::string, double>> run_replication(const SimConfig& config,
                                                            std::uint64_t sub_seed) {
  switch (config.experiment.pipeline.value_or(Pipeline::kAssociation)) {
    case Pipeline::kRuin: return run_ruin(config, sub_seed);
    case Pipeline::kAssociation: return run_association(config, sub_seed);
    case Pipeline::kOffload: return run_offload(config, sub_seed);
  }
  return {};
}

std::size_t resolve_thread_count(const RunOptions& options) {
  std::size_t n = 0;
  if (options.threads) {
    n = *options.threads;
  } else if (const char* env = std::getenv("MECSIM_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ConfigError("MECSIM_THREADS", "expected a non-negative integer");
    }
    n = static_cast<std::size_t>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

ExperimentResult run_experiment(const ExperimentPreset& preset, const RunOptions& options) {
  if (preset.replications < 1) throw ConfigError("experiment.replications", "must be at least 1");
  if (!preset.swept_param.empty() && preset.values.empty()) {
    throw ConfigError("experiment.values", "swept value list must be nonempty");
  }
  const bool swept = !preset.swept_param.empty();
  const std::vector<double> values = swept ? preset.values : std::vector<double>{0.0};

  // Validate every swept configuration up front.
  std::vector<SimConfig> configs;
  for (double v : values) {
    json tree = preset.base_config;
    if (swept) set_config_value(tree, preset.swept_param, v);
    configs.push_back(validate_config(tree));
  }

  std::vector<Task> tasks;
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t r = 0; r < preset.replications; ++r) tasks.push_back({vi, r});
  }
  std::vector<TaskOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      const Task& t = tasks[i];
      try {
        outcomes[i].metrics =
            run_replication(configs[t.value_index], replication_seed(preset.seed, t.replication));
      } catch (const std::exception& e) {
        outcomes[i].failed = true;
        outcomes[i].error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::min(resolve_thread_count(options), std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (outcomes[i].failed) {
      throw std::runtime_error("replication " + std::to_string(tasks[i].replication) + " (sub-seed " +
                               std::to_string(replication_seed(preset.seed, tasks[i].replication)) +
                               ", " + (swept ? preset.swept_param : "base") + " = " +
                               std::to_string(values[tasks[i].value_index]) +
                               ") failed: " + outcomes[i].error);
    }
  }

  // Emission order: swept value ascending, then replication, then metric order.
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = values[tasks[a].value_index];
    const double vb = values[tasks[b].value_index];
    if (va != vb) return va < vb;
    return tasks[a].replication < tasks[b].replication;
  });

  ExperimentResult result;
  const std::string param = swept ? preset.swept_param : "none";
  for (std::size_t i : order) {
    for (const auto& [metric, value] : outcomes[i].metrics) {
      result.rows.push_back({preset.name, param, quantize_for_csv(values[tasks[i].value_index]),
                             tasks[i].replication, metric, quantize_for_csv(value)});
    }
  }
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

std::vector<Aggregate> aggregate_rows(const std::vector<ResultRow>& rows) {
  struct Acc {
    std::size_t n = 0;
    double sum = 0.0;
    std::vector<double> samples;
  };
  std::vector<std::pair<double, std::string>> keys;
  std::map<std::pair<double, std::string>, Acc> acc;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.swept_value, r.metric);
    auto [it, inserted] = acc.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.n += 1;
    it->second.sum += r.value;
    it->second.samples.push_back(r.value);
  }
  std::vector<Aggregate> out;
  out.reserve(keys.size());
  for (const auto& key : keys) {
    const Acc& a = acc.at(key);
    Aggregate g;
    g.swept_value = key.first;
    g.metric = key.second;
    g.count = a.n;
    g.mean = a.sum / static_cast<double>(a.n);
    if (a.n > 1) {
      double ss = 0.0;
      for (double x : a.samples) ss += (x - g.mean) * (x - g.mean);
      g.std_error = std::sqrt(ss / static_cast<double>(a.n - 1)) / std::sqrt(static_cast<double>(a.n));
    }
    out.push_back(g);
  }
  return out;
}

double quantize_for_csv(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

std::string format_csv(const ExperimentResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.9g,%zu,%s,%.9g\n", r.preset.c_str(), r.swept_param.c_str(),
                  r.swept_value, r.replication, r.metric.c_str(), r.value);
    out += buf;
  }
  return out;
}

std::size_t emit_csv(const ExperimentResult& result, const std::string& path) {
  const std::string text = format_csv(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
  return text.size();
}

}  // namespace mecsim
