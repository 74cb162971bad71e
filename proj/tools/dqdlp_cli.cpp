// dqdlp: solve, probe and bound the distributed discrete-log circuit.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqdlp/analytics.hpp"
#include "dqdlp/baseline.hpp"
#include "dqdlp/cluster.hpp"
#include "dqdlp/membership.hpp"
#include "dqdlp/numt.hpp"
#include "dqdlp/search.hpp"
#include "dqdlp/serialize.hpp"

namespace {

using dqdlp::UInt;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

struct RunSpec {
  std::optional<UInt> a, b, modulus, r;
  std::optional<int> m, n0, n, max_attempts;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  double epsilon = 0.5;
  int p = 2;
  int workers = 1;
  int max_restarts = dqdlp::SearchConfig{}.max_restarts;
  UInt tau = 0;
  bool full = false;
  int shots = 100;
  std::string output = "json";
};

void add_instance_options(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--a", spec.a, "generator a");
  cmd->add_option("--b", spec.b, "target b");
  cmd->add_option("--modulus,-N", spec.modulus, "modulus N");
  cmd->add_option("--r", spec.r, "order of a (computed when absent)");
  cmd->add_option("--m", spec.m, "register width m");
  cmd->add_option("--epsilon", spec.epsilon, "precision parameter")->capture_default_str();
  cmd->add_option("--seed", spec.seed, "base seed (falls back to DQDLP_SEED, then 0)");
  cmd->add_option("--output", spec.output, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

void add_search_options(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--n0", spec.n0, "initial set exponent");
  cmd->add_option("--p", spec.p, "trials per membership query")->capture_default_str();
  cmd->add_option("--workers", spec.workers, "worker count K")->capture_default_str();
  cmd->add_option("--mode", spec.mode, "serial or parallel")->check(CLI::IsMember({"serial", "parallel"}));
  cmd->add_option("--max-restarts", spec.max_restarts, "restarts before giving up")->capture_default_str();
  cmd->add_option("--max-attempts", spec.max_attempts, "post-selection budget per trial");
}

void add_set_options(CLI::App* cmd, RunSpec& spec) {
  cmd->add_option("--tau", spec.tau, "set offset tau")->capture_default_str();
  cmd->add_option("--n", spec.n, "set exponent n (defaults to n0)");
}

std::uint64_t resolve_seed(const RunSpec& spec) {
  if (spec.seed) return *spec.seed;
  if (const char* env = std::getenv("DQDLP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("DQDLP_SEED is not an unsigned integer");
    }
  }
  return 0;
}

dqdlp::ProblemInstance resolve_instance(const RunSpec& spec) {
  if (!spec.a || !spec.b || !spec.modulus) throw std::invalid_argument("--a, --b and --modulus are required");
  return dqdlp::ProblemInstance::make(*spec.a, *spec.b, *spec.modulus, spec.r, spec.m, spec.epsilon);
}

int default_n0(int m, UInt r) {
  int n0 = std::min(3, m - 2);
  while (n0 > 0 && (UInt{1} << n0) >= r) --n0;
  return std::max(n0, 0);
}

dqdlp::SearchConfig resolve_config(const RunSpec& spec, const dqdlp::ProblemInstance& instance) {
  dqdlp::SearchConfig cfg;
  cfg.n0 = spec.n0.value_or(default_n0(instance.register_bits, instance.order));
  cfg.p = spec.p;
  cfg.epsilon = spec.epsilon;
  cfg.max_restarts = spec.max_restarts;
  cfg.seed = resolve_seed(spec);
  return cfg;
}

dqdlp::cluster::WorkerPool resolve_pool(const RunSpec& spec, std::uint64_t seed) {
  if (spec.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  const bool parallel = spec.mode ? *spec.mode == "parallel" : spec.workers > 1;
  return {spec.workers, seed, parallel ? dqdlp::cluster::Mode::Parallel : dqdlp::cluster::Mode::Serial};
}

json config_json(const dqdlp::SearchConfig& cfg, const dqdlp::cluster::WorkerPool& pool) {
  return {{"n0", cfg.n0},
          {"p", cfg.p},
          {"epsilon", cfg.epsilon},
          {"max_restarts", cfg.max_restarts},
          {"seed", cfg.seed},
          {"workers", pool.workers},
          {"mode", pool.mode == dqdlp::cluster::Mode::Parallel ? "parallel" : "serial"}};
}

void print(const json& doc) { std::cout << doc.dump(2) << '\n'; }

int cmd_solve(const RunSpec& spec) {
  const auto instance = resolve_instance(spec);
  const auto cfg = resolve_config(spec, instance);
  const auto pool = resolve_pool(spec, cfg.seed);
  dqdlp::SimulatedBackend backend(instance, spec.max_attempts);
  dqdlp::cluster::Coordinator coordinator(pool, backend, instance.order);
  const auto trace = dqdlp::solve(instance, cfg, coordinator);

  if (spec.output == "csv") {
    std::cout << "step,restart,tau,n,verdict,worker,attempts\n";
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
      const auto& s = trace.steps[i];
      long attempts = 0;
      for (const auto& t : s.trials) attempts += t.postselect_attempts;
      std::cout << i << ',' << s.restart << ',' << s.set.tau << ',' << s.set.n << ','
                << dqdlp::to_string(s.verdict) << ',' << s.worker << ',' << attempts << '\n';
    }
  } else {
    print({{"schema", dqdlp::kSchema},
           {"instance", dqdlp::to_json(instance)},
           {"config", config_json(cfg, pool)},
           {"trace", dqdlp::to_json(trace, instance.order)}});
  }
  return trace.success() ? kExitOk : kExitFailure;
}

int cmd_membership(const RunSpec& spec) {
  const auto instance = resolve_instance(spec);
  const auto cfg = resolve_config(spec, instance);
  const dqdlp::SetDescriptor set{spec.tau, spec.n.value_or(cfg.n0)};
  dqdlp::validate_set(set, instance);
  dqdlp::SimulatedBackend backend(instance, spec.max_attempts);
  const auto result = backend.query(set, cfg.p, cfg.seed);

  if (spec.output == "csv") {
    std::cout << "tau,n,attempt,fourth,third,marker_hit\n";
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
      const auto& t = result.trials[i];
      std::cout << set.tau << ',' << set.n << ',' << i << ',' << t.fourth_bit << ','
                << (t.third_value ? std::to_string(*t.third_value) : std::string()) << ','
                << (t.marker_hit() ? 1 : 0) << '\n';
    }
    return kExitOk;
  }
  json trials = json::array();
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    trials.push_back(dqdlp::trial_line(set, static_cast<int>(i), result.trials[i]));
  }
  print({{"schema", dqdlp::kSchema},
         {"instance", dqdlp::to_json(instance)},
         {"set", dqdlp::to_json(set)},
         {"p", cfg.p},
         {"seed", cfg.seed},
         {"verdict", dqdlp::to_string(result.verdict)},
         {"in_set", set.contains(dqdlp::brute_force_dlp(instance).t, instance.order)},
         {"trials", std::move(trials)}});
  return kExitOk;
}

int cmd_probe(const RunSpec& spec) {
  const auto instance = resolve_instance(spec);
  const auto cfg = resolve_config(spec, instance);
  const dqdlp::SetDescriptor set{spec.tau, spec.n.value_or(cfg.n0)};
  const dqdlp::PreparedCircuit circuit(instance, set);
  const auto& dist = circuit.marked_residues();

  if (spec.output == "csv") {
    const auto& pr = circuit.probabilities();
    std::cout << "quantity,key,value\n";
    std::cout << "probe,p_fourth_1," << json(pr.p_fourth_1).dump() << '\n';
    std::cout << "probe,p_third_marker_given_fourth_1," << json(pr.p_third_marker_given_fourth_1).dump() << '\n';
    std::cout << "probe,p_joint_marker," << json(pr.p_joint_marker).dump() << '\n';
    if (spec.full) {
      for (std::size_t z = 0; z < dist.size(); ++z) std::cout << "distribution," << z << ',' << json(dist[z]).dump() << '\n';
    }
    return kExitOk;
  }
  json doc{{"schema", dqdlp::kSchema},
           {"instance", dqdlp::to_json(instance)},
           {"set", dqdlp::to_json(set)},
           {"probe", dqdlp::to_json(circuit.probabilities())}};
  if (spec.full) doc["distribution"] = dist;
  print(doc);
  return kExitOk;
}

int cmd_bounds(const RunSpec& spec) {
  UInt r = 0;
  int m = 0;
  if (spec.a && spec.b && spec.modulus) {
    const auto instance = resolve_instance(spec);
    r = instance.order;
    m = instance.register_bits;
  } else {
    if (!spec.r) throw std::invalid_argument("bounds needs --r or a full instance");
    r = *spec.r;
    if (r < 1) throw std::invalid_argument("--r must be >= 1");
    m = spec.m.value_or(dqdlp::default_register_bits(r, spec.modulus.value_or(1), spec.epsilon));
  }
  const int n = spec.n.value_or(spec.n0.value_or(default_n0(m, r)));
  const auto report = dqdlp::analytics::bound_report(r, n, m, spec.p);

  if (spec.output == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : report.values) std::cout << k << ',' << json(v).dump() << '\n';
    return kExitOk;
  }
  json doc = dqdlp::to_json(report);
  doc["schema"] = dqdlp::kSchema;
  print(doc);
  return kExitOk;
}

int cmd_experiment(const RunSpec& spec) {
  if (spec.shots < 1) throw std::invalid_argument("--shots must be >= 1");
  const auto instance = resolve_instance(spec);
  const auto base = resolve_config(spec, instance);
  const auto pool = resolve_pool(spec, base.seed);
  dqdlp::SimulatedBackend backend(instance, spec.max_attempts);

  std::map<std::string, long> histogram;
  long successes = 0, attempts = 0;
  for (int shot = 0; shot < spec.shots; ++shot) {
    auto cfg = base;
    cfg.seed = dqdlp::derive_seed(base.seed, {static_cast<UInt>(shot)});
    dqdlp::cluster::Coordinator coordinator(pool, backend, instance.order);
    const auto trace = dqdlp::solve(instance, cfg, coordinator);
    histogram[trace.result ? std::to_string(trace.result->t) : std::string("none")] += 1;
    successes += trace.success() ? 1 : 0;
    attempts += trace.total_postselect_attempts;
  }
  const double rate = static_cast<double>(successes) / spec.shots;
  const double mean_attempts = static_cast<double>(attempts) / spec.shots;

  if (spec.output == "csv") {
    std::cout << "quantity,key,value\n";
    for (const auto& [k, v] : histogram) std::cout << "histogram," << k << ',' << v << '\n';
    std::cout << "summary,success_rate," << json(rate).dump() << '\n';
    std::cout << "summary,mean_postselect_attempts," << json(mean_attempts).dump() << '\n';
    return kExitOk;
  }
  print({{"schema", dqdlp::kSchema},
         {"instance", dqdlp::to_json(instance)},
         {"config", config_json(base, pool)},
         {"shots", spec.shots},
         {"histogram", histogram},
         {"success_rate", rate},
         {"mean_postselect_attempts", mean_attempts}});
  return kExitOk;
}

int cmd_baseline(const RunSpec& spec) {
  if (spec.shots < 1) throw std::invalid_argument("--shots must be >= 1");
  const auto instance = resolve_instance(spec);
  const auto seed = resolve_seed(spec);
  const auto prepared = dqdlp::shor_prepare(instance);

  json outcomes = json::array();
  long accepted = 0;
  for (int shot = 0; shot < spec.shots; ++shot) {
    dqdlp::Rng rng(dqdlp::derive_seed(seed, {static_cast<UInt>(shot)}));
    const auto out = dqdlp::shor_dlp_run(instance, prepared, rng);
    accepted += out.t_candidate ? 1 : 0;
    outcomes.push_back(dqdlp::to_json(out));
  }
  const double rate = static_cast<double>(accepted) / spec.shots;
  const int n = spec.n.value_or(default_n0(instance.register_bits, instance.order));
  const auto [baseline_qubits, dqdlp_qubits] = dqdlp::qubit_report(instance, n);

  if (spec.output == "csv") {
    std::cout << "shot,x_out,y_out,l,tl,t_candidate\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      std::cout << i << ',' << o["x_out"] << ',' << o["y_out"] << ',' << o["l"] << ',' << o["tl"] << ','
                << (o["t_candidate"].is_null() ? std::string() : o["t_candidate"].dump()) << '\n';
    }
    return kExitOk;
  }
  print({{"schema", dqdlp::kSchema},
         {"instance", dqdlp::to_json(instance)},
         {"shots", spec.shots},
         {"outcomes", std::move(outcomes)},
         {"acceptance_rate", rate},
         {"qubits", {{"baseline", baseline_qubits}, {"dqdlp", dqdlp_qubits}, {"n", n}}}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed quantum discrete-log simulator"};
  app.require_subcommand(1);
  RunSpec spec;

  auto* solve = app.add_subcommand("solve", "run the dichotomy search and print its trace");
  add_instance_options(solve, spec);
  add_search_options(solve, spec);

  auto* membership = app.add_subcommand("membership", "sample one membership verdict");
  add_instance_options(membership, spec);
  add_search_options(membership, spec);
  add_set_options(membership, spec);

  auto* probe = app.add_subcommand("probe", "exact outcome probabilities for one set");
  add_instance_options(probe, spec);
  add_search_options(probe, spec);
  add_set_options(probe, spec);
  probe->add_flag("--full", spec.full, "include the register-3 distribution given anc = 1");

  auto* bounds = app.add_subcommand("bounds", "evaluate every closed-form probability and bound");
  add_instance_options(bounds, spec);
  add_search_options(bounds, spec);
  bounds->add_option("--n", spec.n, "set exponent n (defaults to n0)");

  auto* experiment = app.add_subcommand("experiment", "repeat solve with derived seeds");
  add_instance_options(experiment, spec);
  add_search_options(experiment, spec);
  experiment->add_option("--shots", spec.shots, "number of runs")->capture_default_str();

  auto* baseline = app.add_subcommand("baseline-shor", "run the three-register Shor circuit");
  add_instance_options(baseline, spec);
  baseline->add_option("--shots", spec.shots, "number of runs")->capture_default_str();
  baseline->add_option("--n", spec.n, "set exponent used in the qubit comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(spec);
    if (*membership) return cmd_membership(spec);
    if (*probe) return cmd_probe(spec);
    if (*bounds) return cmd_bounds(spec);
    if (*experiment) return cmd_experiment(spec);
    if (*baseline) return cmd_baseline(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
