// Command-line front end: instance generation, solving, checks, experiments.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtdhg/equilibria.hpp"
#include "mtdhg/errors.hpp"
#include "mtdhg/format.hpp"
#include "mtdhg/harness.hpp"
#include "mtdhg/io.hpp"
#include "mtdhg/parallel.hpp"
#include "mtdhg/robustness.hpp"
#include "mtdhg/stability.hpp"

namespace {

using mtdhg::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Globals {
  bool json = false;
  int threads = 0;
  double feasibility_tol = 1e-7;
  double pivot_tol = 1e-9;
  long long max_iterations = 200000;
  double epsilon = 1e-6;
  long long max_lp_calls = 1'000'000;
};

struct Args {
  Globals g;
  // generate
  int types = 0;
  int targets = 0;
  std::uint64_t seed = 0;
  std::string out;
  // shared
  std::string instance;
  std::string x_file;
  std::string p_prime;
  std::string config;
  bool single_factor = false;
  // exp overrides
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_instances;
  std::optional<std::string> exp_out_dir;
  // radius
  int directions = 64;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

mtdhg::numerics::NumericsConfig Numerics(const Globals& g) {
  mtdhg::numerics::NumericsConfig cfg;
  cfg.feasibility_tol = g.feasibility_tol;
  cfg.pivot_tol = g.pivot_tol;
  cfg.max_iterations = g.max_iterations;
  return cfg;
}

mtdhg::SolverOptions Solver(const Globals& g) {
  mtdhg::SolverOptions opts;
  opts.epsilon = g.epsilon;
  opts.max_lp_calls = g.max_lp_calls;
  opts.numerics = Numerics(g);
  return opts;
}

int ThreadCount(const Globals& g, int config_threads) {
  if (g.threads > 0) return g.threads;
  if (const char* env = std::getenv("MTDHG_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1) {
      throw UsageError("MTDHG_THREADS must be a positive integer");
    }
    return static_cast<int>(value);
  }
  if (config_threads > 0) return config_threads;
  return mtdhg::default_thread_count();
}

std::string VectorText(const mtdhg::Vector& v) {
  std::string out = "(";
  for (mtdhg::Index i = 0; i < v.size(); ++i) {
    out += (i ? ", " : "") + mtdhg::format_double(v(i), 6);
  }
  return out + ")";
}

std::string SetText(const mtdhg::TargetSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

void Emit(const Globals& g, const Json& doc, const std::string& text) {
  if (g.json) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

mtdhg::Vector ParseProbabilities(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--p-prime expects comma-separated numbers, got \"" + text + "\"");
    }
  }
  if (values.empty()) throw UsageError("--p-prime is empty");
  return Eigen::Map<mtdhg::Vector>(values.data(), static_cast<mtdhg::Index>(values.size()));
}

int RunGenerate(const Args& a) {
  mtdhg::harness::ExperimentConfig cfg;
  const auto generated = mtdhg::harness::generate_instance(a.seed, a.types, a.targets, cfg);
  const Json doc = mtdhg::io::instance_to_json(generated.game);
  mtdhg::io::write_file_atomic(a.out, doc.dump(2) + "\n");
  Json summary;
  summary["out"] = a.out;
  summary["seed"] = a.seed;
  summary["n"] = a.types;
  summary["K"] = a.targets;
  summary["regenerations"] = generated.regenerations;
  Emit(a.g, summary,
       "wrote " + a.out + " (n=" + std::to_string(a.types) + ", K=" +
           std::to_string(a.targets) + ", regenerations=" +
           std::to_string(generated.regenerations) + ")\n");
  return kExitOk;
}

int RunSolve(const Args& a, const std::string& kind) {
  const auto game = mtdhg::io::read_instance(a.instance);
  const auto opts = Solver(a.g);
  const auto result = kind == "bsse" ? mtdhg::solve_bsse(game, opts) : mtdhg::solve_hbne(game, opts);
  std::ostringstream text;
  text << kind << " equilibrium\n"
       << "  x        = " << VectorText(result.defender_strategy.allocation()) << '\n'
       << "  EU_d     = " << mtdhg::format_double(result.defender_expected_utility) << '\n'
       << "  supp(x)  = " << SetText(result.defender_support) << '\n';
  for (std::size_t j = 0; j < result.attacker_supports.size(); ++j) {
    text << "  type " << j << "   y = "
         << VectorText(result.attacker_policy.allocation().row(static_cast<mtdhg::Index>(j)).transpose())
         << "  supp = " << SetText(result.attacker_supports[j]) << '\n';
  }
  text << "  lp_calls = " << result.diagnostics.lp_calls << '\n';
  Emit(a.g, mtdhg::io::result_to_json(kind, result), text.str());
  return kExitOk;
}

int RunCheckStability(const Args& a) {
  const auto game = mtdhg::io::read_instance(a.instance);
  mtdhg::StabilityOptions opts;
  opts.solver = Solver(a.g);
  opts.bernoulli_single_factor = a.single_factor;
  const auto bsse = mtdhg::solve_bsse(game, opts.solver);
  const auto report = mtdhg::check_sol(game, bsse.attacker_policy, opts);
  const auto record = mtdhg::classify_stability(game, opts);

  Json doc;
  doc["bsse"] = mtdhg::io::result_to_json("bsse", bsse);
  doc["sol"] = mtdhg::io::stability_to_json(report);
  doc["pair_hbne"] = record.pair_hbne;
  doc["strategy_hbne"] = record.strategy_hbne;
  std::ostringstream text;
  text << "BSSE x = " << VectorText(bsse.defender_strategy.allocation())
       << ", EU_d = " << mtdhg::format_double(bsse.defender_expected_utility) << '\n'
       << "SOL(y_BSSE) nonempty: " << mtdhg::format_bool(report.sol_nonempty)
       << " (method " << mtdhg::to_string(report.method)
       << ", lambda = " << mtdhg::format_double(report.witness_lambda) << ")\n"
       << "BSSE pair is HBNE: " << mtdhg::format_bool(record.pair_hbne) << '\n'
       << "BSSE strategy is HBNE strategy: " << mtdhg::format_bool(record.strategy_hbne) << '\n';

  const auto& dist = game.type_probabilities();
  const bool bernoulli = game.num_types() == 2 && game.defender_budget() == 1.0 &&
                         game.attacker_budget() == 1.0 && dist(0) > 1e-9 && dist(1) > 1e-9;
  if (bernoulli) {
    const auto rank = mtdhg::check_bernoulli_rank(game, bsse.attacker_policy, opts);
    doc["bernoulli_rank"] = mtdhg::io::stability_to_json(rank);
    text << "rank A = " << rank.rank << " (threshold " << rank.rank_threshold
         << "), condition holds: " << mtdhg::format_bool(rank.rank_condition_holds) << '\n';
  }
  Emit(a.g, doc, text.str());
  return kExitOk;
}

int RunCheckRobust(const Args& a) {
  const auto game = mtdhg::io::read_instance(a.instance);
  const mtdhg::DefenderStrategy x(game, mtdhg::io::read_defender_allocation(a.x_file));
  const mtdhg::Vector p = ParseProbabilities(a.p_prime);
  if (p.size() != game.num_types()) {
    throw mtdhg::DimensionMismatch("--p-prime has " + std::to_string(p.size()) +
                                   " entries, instance has " +
                                   std::to_string(game.num_types()) + " types");
  }
  const mtdhg::TypeDistribution p_prime(p);
  const auto report = mtdhg::check_robust(game, x, p_prime, mtdhg::kDefaultTieTol, Numerics(a.g));
  std::ostringstream text;
  text << (report.is_robust ? "robust" : "not robust") << " at P' = " << VectorText(p)
       << " (L1 distance " << mtdhg::format_double(report.perturbation_l1, 6) << ")\n";
  for (const auto& note : report.notes) text << "  " << note << '\n';
  Emit(a.g, mtdhg::io::robustness_to_json(report), text.str());
  return kExitOk;
}

int RunRadius(const Args& a) {
  const auto game = mtdhg::io::read_instance(a.instance);
  const mtdhg::DefenderStrategy x(game, mtdhg::io::read_defender_allocation(a.x_file));
  mtdhg::RadiusOptions opts;
  opts.direction_samples = a.directions;
  opts.numerics = Numerics(a.g);
  const auto estimate =
      mtdhg::robustness_radius(game, x, mtdhg::distribution_of(game), opts);
  std::ostringstream text;
  text << "robustness radius >= " << mtdhg::format_double(estimate.radius, 6)
       << " (L1; " << estimate.directions_evaluated << " directions, max reachable "
       << mtdhg::format_double(estimate.max_reachable, 6) << ")\n";
  Emit(a.g, mtdhg::io::radius_to_json(estimate), text.str());
  return kExitOk;
}

mtdhg::harness::ExperimentConfig LoadConfig(const Args& a) {
  auto cfg = mtdhg::harness::config_from_json(mtdhg::io::read_json_file(a.config));
  if (a.exp_seed) cfg.seed = *a.exp_seed;
  if (a.exp_instances) cfg.instances_per_cell = *a.exp_instances;
  if (a.exp_out_dir) cfg.out_dir = *a.exp_out_dir;
  mtdhg::harness::validate_config(cfg);
  return cfg;
}

int RunFig1(const Args& a) {
  const auto cfg = LoadConfig(a);
  const int threads = ThreadCount(a.g, cfg.threads);
  const auto out = mtdhg::harness::run_fig1(cfg, threads);
  for (const auto& r : out.ratios) {
    std::cerr << "cell n=" << r.n << " K=" << r.K << ": case1 "
              << mtdhg::format_double(r.case1_ratio, 4) << " (" << r.both << "/"
              << r.sol_nonempty << "), case2 " << mtdhg::format_double(r.case2_ratio, 4)
              << " (" << r.both << "/" << r.strategy_hbne << "), failures " << r.failures
              << '\n';
  }
  const auto dir = mtdhg::harness::write_fig1(cfg, out);
  Json doc;
  doc["run_dir"] = dir.string();
  doc["config_hash"] = mtdhg::harness::config_hash(cfg);
  doc["cells"] = Json::array();
  for (const auto& r : out.ratios) {
    doc["cells"].push_back({{"n", r.n},
                            {"K", r.K},
                            {"case1_ratio", r.case1_ratio},
                            {"case2_ratio", r.case2_ratio},
                            {"instances", r.instances},
                            {"sol_nonempty", r.sol_nonempty},
                            {"strategy_hbne", r.strategy_hbne},
                            {"both", r.both},
                            {"failures", r.failures}});
  }
  Emit(a.g, doc, "wrote " + dir.string() + "\n" + out.ratios_csv);
  return kExitOk;
}

int RunFig2(const Args& a) {
  const auto cfg = LoadConfig(a);
  const int threads = ThreadCount(a.g, cfg.threads);
  const auto out = mtdhg::harness::run_fig2(cfg, threads);
  const auto dir = mtdhg::harness::write_fig2(cfg, out);
  Json doc;
  doc["run_dir"] = dir.string();
  doc["config_hash"] = mtdhg::harness::config_hash(cfg);
  doc["settings"] = Json::array();
  std::ostringstream text;
  text << "wrote " << dir.string() << '\n';
  for (const auto& s : out.settings) {
    std::cerr << "setting seed " << s.seed << ": " << s.sweep.points.size()
              << " points, locally robust "
              << mtdhg::format_double(s.sweep.locally_robust_fraction, 4) << '\n';
    text << "seed " << s.seed << ": locally robust fraction "
         << mtdhg::format_double(s.sweep.locally_robust_fraction, 4) << " over "
         << s.sweep.points.size() << " points\n";
    doc["settings"].push_back({{"seed", s.seed},
                               {"points", s.sweep.points.size()},
                               {"locally_robust_fraction", s.sweep.locally_robust_fraction},
                               {"cross_checked", s.sweep.cross_checked},
                               {"cross_check_robust", s.sweep.cross_check_robust}});
  }
  Emit(a.g, doc, text.str());
  return kExitOk;
}

Json ErrorJson(const std::string& kind, const std::string& message,
               const std::vector<mtdhg::Violation>* violations = nullptr) {
  Json err;
  err["kind"] = kind;
  err["message"] = message;
  if (violations) {
    err["violations"] = Json::array();
    for (const auto& v : *violations) {
      err["violations"].push_back({{"kind", v.kind}, {"message", v.message}});
    }
  }
  return Json{{"error", err}};
}

}  // namespace

int main(int argc, char** argv) {
  Args a;
  CLI::App app{"Moving-target-defense hypergame solver"};
  app.name("mtdhg");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_flag("--json", a.g.json, "Machine-readable JSON output");
  app.add_option("--threads", a.g.threads, "Worker threads for experiments")
      ->check(CLI::PositiveNumber);
  app.add_option("--feasibility-tol", a.g.feasibility_tol, "LP feasibility tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--pivot-tol", a.g.pivot_tol, "LP pivot tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iterations", a.g.max_iterations, "LP iteration cap")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", a.g.epsilon, "Equilibrium verification tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-lp-calls", a.g.max_lp_calls, "LP budget per solve")
      ->check(CLI::PositiveNumber);

  auto* generate = app.add_subcommand("generate", "Draw a seeded random instance");
  generate->add_option("--types", a.types, "Number of attacker types")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--targets", a.targets, "Number of targets")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", a.seed, "Generator seed")->required();
  generate->add_option("--out", a.out, "Output instance file")->required();

  auto* solve = app.add_subcommand("solve", "Compute an equilibrium");
  solve->require_subcommand(1, 1);
  solve->fallthrough();
  auto* bsse = solve->add_subcommand("bsse", "Bayesian strong Stackelberg equilibrium");
  auto* hbne = solve->add_subcommand("hbne", "Hyper Bayesian Nash equilibrium");
  for (auto* sub : {bsse, hbne}) {
    sub->fallthrough();
    sub->add_option("--instance", a.instance, "Instance JSON")->required();
  }

  auto* check = app.add_subcommand("check", "Stability and robustness checks");
  check->require_subcommand(1, 1);
  check->fallthrough();
  auto* stability = check->add_subcommand("stability", "SOL test on the BSSE policy");
  stability->fallthrough();
  stability->add_option("--instance", a.instance, "Instance JSON")->required();
  stability->add_flag("--bernoulli-single-factor", a.single_factor,
                      "Drop the inner P(theta_i) factor in the two-type rank test");
  auto* robust = check->add_subcommand("robust", "Robustness of x under a perturbed P");
  robust->fallthrough();
  robust->add_option("--instance", a.instance, "Instance JSON")->required();
  robust->add_option("--x-file", a.x_file, "Defender allocation JSON")->required();
  robust->add_option("--p-prime", a.p_prime, "Perturbed distribution p1,p2,...")->required();

  auto* radius = app.add_subcommand("radius", "Sampled L1 robustness radius");
  radius->add_option("--instance", a.instance, "Instance JSON")->required();
  radius->add_option("--x-file", a.x_file, "Defender allocation JSON")->required();
  radius->add_option("--directions", a.directions, "Random directions sampled")
      ->check(CLI::NonNegativeNumber);

  auto* exp = app.add_subcommand("exp", "Batch experiments");
  exp->require_subcommand(1, 1);
  exp->fallthrough();
  auto* fig1 = exp->add_subcommand("fig1", "BSSE/HBNE stability ratios");
  auto* fig2 = exp->add_subcommand("fig2", "HBNE robustness over the type simplex");
  for (auto* sub : {fig1, fig2}) {
    sub->fallthrough();
    sub->add_option("--config", a.config, "Experiment config JSON")->required();
    sub->add_option("--seed", a.exp_seed, "Override config seed");
    sub->add_option("--out-dir", a.exp_out_dir, "Override config out_dir");
  }
  fig1->add_option("--instances", a.exp_instances, "Override instances_per_cell")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return RunGenerate(a);
    if (bsse->parsed()) return RunSolve(a, "bsse");
    if (hbne->parsed()) return RunSolve(a, "hbne");
    if (stability->parsed()) return RunCheckStability(a);
    if (robust->parsed()) return RunCheckRobust(a);
    if (radius->parsed()) return RunRadius(a);
    if (fig1->parsed()) return RunFig1(a);
    if (fig2->parsed()) return RunFig2(a);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const mtdhg::ValidationError& e) {
    if (a.g.json) {
      std::cout << ErrorJson(e.kind(), e.what(), &e.violations()).dump(2) << '\n';
    }
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const mtdhg::Error& e) {
    if (a.g.json) std::cout << ErrorJson(e.kind(), e.what()).dump(2) << '\n';
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return kExitDomain;
  }
  std::cerr << app.help();
  return kExitUsage;
}
