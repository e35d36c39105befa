#include "mecsim/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "mecsim/association.hpp"
#include "mecsim/config.hpp"
#include "mecsim/experiment.hpp"
#include "mecsim/offload.hpp"
#include "mecsim/ruin.hpp"
#include "mecsim/scenario.hpp"

namespace mecsim {

namespace {

std::string fmt_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void print_config_error(const ConfigError& e, std::ostream& err) {
  for (const auto& f : e.errors()) err << "error: " << f.path << ": " << f.reason << "\n";
}

struct RunArgs {
  std::string preset;
  std::string config;
  std::string out;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
};

struct RuinArgs {
  double initial = 0.0;
  double premium = 0.0;
  double mu = 1.0;
  double lambda = 1.0;
  double horizon = 0.0;
  double epsilon = 0.0;
  std::size_t analytic_terms = 0;
  std::size_t paths = 0;
  std::uint64_t seed = 1;
  std::string arrivals = "poisson";
  int precision = 6;
};

struct SolveArgs {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
};

int do_run(const RunArgs& a, const CLI::App& cmd, std::ostream& out) {
  nlohmann::json tree = a.preset.size() > 5 && a.preset.ends_with(".json")
                            ? load_config_file(a.preset)
                            : builtin_preset_config(a.preset);
  if (!a.config.empty()) merge_config(tree, load_config_file(a.config));
  if (cmd.count("--reps") > 0) tree["experiment"]["replications"] = a.reps;
  if (cmd.count("--seed") > 0) tree["experiment"]["seed"] = a.seed;

  const ExperimentPreset preset = preset_from_config(tree);
  const ExperimentResult result = run_experiment(preset);
  const std::size_t bytes = emit_csv(result, a.out);
  out << "wrote " << result.rows.size() << " rows (" << bytes << " bytes) to " << a.out << "\n";
  out << "swept_value,metric,mean,std_error\n";
  for (const auto& g : result.aggregates) {
    out << fmt_g(g.swept_value, 9) << "," << g.metric << "," << fmt_g(g.mean, 9) << ","
        << fmt_g(g.std_error, 9) << "\n";
  }
  return kExitOk;
}

int do_ruin(const RuinArgs& a, const CLI::App& cmd, std::ostream& out, std::ostream& err) {
  if (a.paths > 0) {
    SurplusParams p;
    p.initial_surplus = a.initial;
    p.premium_rate = a.premium;
    p.claim_rate = a.mu;
    p.claim_intensity = a.lambda;
    p.horizon = cmd.count("--horizon") > 0 ? a.horizon : 50.0;
    p.epsilon = a.epsilon;
    p.arrivals = a.arrivals == "per_slot" ? ClaimArrivals::kPerSlot : ClaimArrivals::kPoisson;
    const RuinEstimate est = ruin_probability_mc(p, a.paths, a.seed);
    out << fmt_g(est.probability, a.precision) << "\n";
    out << "std_error " << fmt_g(est.std_error, a.precision) << " paths " << est.n_terms_or_paths << "\n";
    return kExitOk;
  }
  const std::size_t terms = a.analytic_terms > 0 ? a.analytic_terms : 50;
  if (a.initial < a.epsilon) {
    out << fmt_g(1.0, a.precision) << "\n";
    return kExitOk;
  }
  const RuinEstimate est = ruin_probability_analytic(a.initial - a.epsilon, a.premium, a.mu, terms);
  out << fmt_g(est.probability, a.precision) << "\n";
  if (est.clamped) err << "warning: analytic series left [0, 1] and was clamped\n";
  return kExitOk;
}

int do_solve(const SolveArgs& a, const CLI::App& cmd, std::ostream& out) {
  const SimConfig config = validate_config(load_config_file(a.config));
  const std::uint64_t seed = cmd.count("--seed") > 0 ? a.seed : config.experiment.seed;
  const Scenario scenario = generate_scenario(config, seed);
  const Association assoc = ruin_association(scenario, analytic_ruin_model(config),
                                             config.association.algorithm1_literal_or
                                                 ? AdmissionRule::kLiteralOr
                                                 : AdmissionRule::kWorstCaseGuard);
  const auto contexts = build_offload_contexts(scenario, assoc, config);

  std::ofstream csv(a.out, std::ios::binary | std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot open '" + a.out + "' for writing");
  csv << "user,server,task_bits,rate_bps,gamma_server,alpha_bits,beta_bits,feasible,bound_lo,bound_hi,"
         "energy_j,equal_energy_j,all_energy_j\n";
  std::size_t ci = 0;
  std::size_t feasible = 0;
  std::vector<OffloadDecision> decisions;
  std::vector<OffloadContext> ctxs;
  for (std::size_t k = 0; k < scenario.num_users(); ++k) {
    csv << k << ",";
    if (ci < contexts.size() && contexts[ci].user == k) {
      const auto& uc = contexts[ci++];
      const OffloadDecision d = optimal_offload(uc.ctx);
      const OffloadDecision eq = baseline_offload(uc.ctx, BaselinePolicy::kEqual);
      const OffloadDecision all = baseline_offload(uc.ctx, BaselinePolicy::kAll);
      csv << uc.server << "," << fmt_g(uc.ctx.task_bits, 9) << "," << fmt_g(uc.ctx.rate_bps, 9) << ","
          << fmt_g(uc.ctx.gamma_server, 9) << "," << fmt_g(d.alpha_bits, 9) << ","
          << fmt_g(d.beta_bits, 9) << "," << (d.feasible ? 1 : 0) << "," << fmt_g(d.bound_lo, 9)
          << "," << fmt_g(d.bound_hi, 9) << "," << fmt_g(d.objective_value, 9) << ","
          << fmt_g(eq.objective_value, 9) << "," << fmt_g(all.objective_value, 9) << "\n";
      if (d.feasible) {
        ++feasible;
        decisions.push_back(d);
        ctxs.push_back(uc.ctx);
      }
    } else {
      csv << "," << fmt_g(scenario.users()[k].task_bits, 9) << ",,,,,0,,,,,\n";
    }
  }
  if (!csv) throw std::runtime_error("failed writing '" + a.out + "'");
  out << "associated " << contexts.size() << "/" << scenario.num_users() << " users, feasible "
      << feasible << ", total energy " << fmt_g(total_energy(decisions, ctxs, config.offload.omega), 9)
      << " J\n";
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ruin-based association and energy-aware offloading simulator", "mecsim"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run an experiment preset and write CSV rows");
  run->add_option("--preset", run_args.preset, "built-in preset name or a .json preset file")->required();
  run->add_option("--config", run_args.config, "configuration overrides merged into the preset");
  run->add_option("--reps", run_args.reps, "replications per swept value")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "experiment seed");
  run->add_option("--out", run_args.out, "CSV output path")->required();

  RuinArgs ruin_args;
  auto* ruin = app.add_subcommand("ruin", "evaluate a ruin probability");
  ruin->add_option("--initial", ruin_args.initial, "initial surplus u")->required()->check(CLI::NonNegativeNumber);
  ruin->add_option("--premium", ruin_args.premium, "premium per slot")->required()->check(CLI::NonNegativeNumber);
  ruin->add_option("--mu", ruin_args.mu, "exponential rate of claim sizes")->required()->check(CLI::PositiveNumber);
  ruin->add_option("--lambda", ruin_args.lambda, "claims per slot")->check(CLI::NonNegativeNumber);
  ruin->add_option("--horizon", ruin_args.horizon, "horizon in slots (Monte Carlo)")->check(CLI::PositiveNumber);
  ruin->add_option("--epsilon", ruin_args.epsilon, "ruin threshold")->check(CLI::NonNegativeNumber);
  auto* terms = ruin->add_option("--analytic-terms", ruin_args.analytic_terms, "terms of the analytic series")
                    ->check(CLI::PositiveNumber);
  auto* paths = ruin->add_option("--paths", ruin_args.paths, "Monte Carlo paths (>= 100)")
                    ->check(CLI::Range(std::size_t{100}, std::size_t{1} << 40));
  terms->excludes(paths);
  ruin->add_option("--seed", ruin_args.seed, "Monte Carlo seed");
  ruin->add_option("--arrivals", ruin_args.arrivals, "claim epochs: poisson | per_slot")
      ->check(CLI::IsMember({"poisson", "per_slot"}));
  ruin->add_option("--precision", ruin_args.precision, "significant digits printed")->check(CLI::Range(1, 17));

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "associate and offload one scenario, dump per-user decisions");
  solve->add_option("--config", solve_args.config, "configuration file")->required();
  solve->add_option("--out", solve_args.out, "CSV output path")->required();
  solve->add_option("--seed", solve_args.seed, "scenario seed (defaults to experiment.seed)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a configuration file");
  validate->add_option("--config", validate_path, "configuration file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitConfigError;
  }

  try {
    if (*run) return do_run(run_args, *run, out);
    if (*ruin) return do_ruin(ruin_args, *ruin, out, err);
    if (*solve) return do_solve(solve_args, *solve, out);
    if (*validate) {
      const SimConfig cfg = validate_config(load_config_file(validate_path));
      out << "ok: " << cfg.servers.size() << " servers, " << cfg.users.count << " users\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    print_config_error(e, err);
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace mecsim
