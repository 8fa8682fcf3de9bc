#include "mtdhg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "mtdhg/format.hpp"
#include "mtdhg/parallel.hpp"
#include "mtdhg/svg.hpp"

namespace mtdhg::harness {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(const Range& r) { return r.low + (r.high - r.low) * Uniform01(); }

 private:
  std::mt19937_64 engine_;
};

io::Json RangeToJson(const Range& r) { return io::Json::array({r.low, r.high}); }

Range RangeFromJson(const io::Json& doc, const char* key, Range fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& value = doc.at(key);
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    throw ConfigError(std::string(key) + " must be a [low, high] pair");
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

template <typename T>
T Scalar(const io::Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const io::Json::exception&) {
    throw ConfigError(std::string("config key ") + key + " has the wrong type");
  }
}

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool NearDuplicate(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] - values[i - 1] < 1e-9) return true;
  }
  return false;
}

std::string CellName(int n, int K) {
  return "n=" + std::to_string(n) + ",K=" + std::to_string(K);
}

RatioRecord Aggregate(int n, int K, const std::vector<const Fig1Row*>& rows) {
  RatioRecord r;
  r.n = n;
  r.K = K;
  r.instances = static_cast<int>(rows.size());
  for (const Fig1Row* row : rows) {
    r.degenerate_regenerated += row->regenerations;
    if (row->failed) {
      ++r.failures;
      continue;
    }
    const auto& c = row->record;
    r.sol_nonempty += c.sol_nonempty;
    r.strategy_hbne += c.strategy_hbne;
    r.both += c.sol_nonempty && c.strategy_hbne;
  }
  // Empty denominators are reported as vacuous ratios of 1 with the zero
  // count alongside.
  r.case1_ratio = r.sol_nonempty ? static_cast<double>(r.both) / r.sol_nonempty : 1.0;
  r.case2_ratio = r.strategy_hbne ? static_cast<double>(r.both) / r.strategy_hbne : 1.0;
  return r;
}

}  // namespace

ExperimentConfig config_from_json(const io::Json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const char* kKnown[] = {
      "seed", "instances_per_cell", "type_counts", "target_counts", "U_d_c", "U_d_u",
      "U_a_c", "U_a_u", "budget", "max_regenerations", "max_failure_fraction",
      "fixed_types", "fixed_targets", "grid_step", "fig2_targets", "fig2_seeds",
      "fig2_payoff", "fig2_identical_types", "out_dir", "threads"};
  for (const auto& item : doc.items()) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) {
          return item.key() == k;
        }) == std::end(kKnown)) {
      throw ConfigError("unknown config key \"" + item.key() + "\"");
    }
  }
  ExperimentConfig cfg;
  cfg.seed = Scalar<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.instances_per_cell = Scalar<int>(doc, "instances_per_cell", cfg.instances_per_cell);
  cfg.type_counts = Scalar<std::vector<int>>(doc, "type_counts", cfg.type_counts);
  cfg.target_counts = Scalar<std::vector<int>>(doc, "target_counts", cfg.target_counts);
  cfg.defender_covered = RangeFromJson(doc, "U_d_c", cfg.defender_covered);
  cfg.defender_uncovered = RangeFromJson(doc, "U_d_u", cfg.defender_uncovered);
  cfg.attacker_covered = RangeFromJson(doc, "U_a_c", cfg.attacker_covered);
  cfg.attacker_uncovered = RangeFromJson(doc, "U_a_u", cfg.attacker_uncovered);
  cfg.budget = RangeFromJson(doc, "budget", cfg.budget);
  cfg.max_regenerations = Scalar<int>(doc, "max_regenerations", cfg.max_regenerations);
  cfg.max_failure_fraction =
      Scalar<double>(doc, "max_failure_fraction", cfg.max_failure_fraction);
  cfg.fixed_types = Scalar<int>(doc, "fixed_types", cfg.fixed_types);
  cfg.fixed_targets = Scalar<int>(doc, "fixed_targets", cfg.fixed_targets);
  cfg.grid_step = Scalar<double>(doc, "grid_step", cfg.grid_step);
  cfg.fig2_targets = Scalar<int>(doc, "fig2_targets", cfg.fig2_targets);
  cfg.fig2_seeds = Scalar<std::vector<std::uint64_t>>(doc, "fig2_seeds", cfg.fig2_seeds);
  cfg.fig2_payoff = RangeFromJson(doc, "fig2_payoff", cfg.fig2_payoff);
  cfg.fig2_identical_types =
      Scalar<bool>(doc, "fig2_identical_types", cfg.fig2_identical_types);
  cfg.out_dir = Scalar<std::string>(doc, "out_dir", cfg.out_dir);
  cfg.threads = Scalar<int>(doc, "threads", cfg.threads);
  validate_config(cfg);
  return cfg;
}

io::Json config_to_json(const ExperimentConfig& cfg) {
  io::Json doc;
  doc["seed"] = cfg.seed;
  doc["instances_per_cell"] = cfg.instances_per_cell;
  doc["type_counts"] = cfg.type_counts;
  doc["target_counts"] = cfg.target_counts;
  doc["U_d_c"] = RangeToJson(cfg.defender_covered);
  doc["U_d_u"] = RangeToJson(cfg.defender_uncovered);
  doc["U_a_c"] = RangeToJson(cfg.attacker_covered);
  doc["U_a_u"] = RangeToJson(cfg.attacker_uncovered);
  doc["budget"] = RangeToJson(cfg.budget);
  doc["max_regenerations"] = cfg.max_regenerations;
  doc["max_failure_fraction"] = cfg.max_failure_fraction;
  doc["fixed_types"] = cfg.fixed_types;
  doc["fixed_targets"] = cfg.fixed_targets;
  doc["grid_step"] = cfg.grid_step;
  doc["fig2_targets"] = cfg.fig2_targets;
  doc["fig2_seeds"] = cfg.fig2_seeds;
  doc["fig2_payoff"] = RangeToJson(cfg.fig2_payoff);
  doc["fig2_identical_types"] = cfg.fig2_identical_types;
  doc["out_dir"] = cfg.out_dir;
  return doc;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.instances_per_cell < 0) throw ConfigError("instances_per_cell must be >= 0");
  for (int n : cfg.type_counts) {
    if (n < 1) throw ConfigError("type counts must be >= 1");
  }
  for (int K : cfg.target_counts) {
    if (K < 1) throw ConfigError("target counts must be >= 1");
  }
  auto ordered = [](const Range& r, const char* name) {
    if (!(r.low <= r.high) || !std::isfinite(r.low) || !std::isfinite(r.high)) {
      throw ConfigError(std::string(name) + " range must satisfy low <= high");
    }
  };
  ordered(cfg.defender_covered, "U_d_c");
  ordered(cfg.defender_uncovered, "U_d_u");
  ordered(cfg.attacker_covered, "U_a_c");
  ordered(cfg.attacker_uncovered, "U_a_u");
  ordered(cfg.budget, "budget");
  ordered(cfg.fig2_payoff, "fig2_payoff");
  if (cfg.defender_covered.low < cfg.defender_uncovered.high) {
    throw ConfigError("U_d_c draws must dominate U_d_u draws (low(U_d_c) >= high(U_d_u))");
  }
  if (cfg.attacker_uncovered.low < cfg.attacker_covered.high) {
    throw ConfigError("U_a_u draws must dominate U_a_c draws (low(U_a_u) >= high(U_a_c))");
  }
  if (!(cfg.budget.low > 0)) throw ConfigError("budgets must be positive");
  if (!(cfg.grid_step > 0 && cfg.grid_step <= 1)) throw ConfigError("grid_step must be in (0, 1]");
  if (cfg.fig2_targets < 1) throw ConfigError("fig2_targets must be >= 1");
  if (cfg.max_regenerations < 0) throw ConfigError("max_regenerations must be >= 0");
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buffer[20];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(Fnv1a(config_to_json(cfg).dump())));
  return buffer;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t instance_seed(std::uint64_t base, std::uint64_t n, std::uint64_t K,
                            std::uint64_t index) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ n);
  h = splitmix64(h ^ K);
  return splitmix64(h ^ index);
}

bool has_degenerate_ties(const RawInstance& raw) {
  const auto n = static_cast<std::size_t>(raw.num_types);
  const auto K = static_cast<std::size_t>(raw.num_targets);
  if (NearDuplicate(raw.defender_covered_payoff) ||
      NearDuplicate(raw.defender_uncovered_payoff)) {
    return true;
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (raw.defender_covered_payoff[k] - raw.defender_uncovered_payoff[k] < 1e-9) return true;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (NearDuplicate(raw.attacker_covered_payoff[j]) ||
        NearDuplicate(raw.attacker_uncovered_payoff[j])) {
      return true;
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (raw.attacker_uncovered_payoff[j][k] - raw.attacker_covered_payoff[j][k] < 1e-9) {
        return true;
      }
    }
  }
  for (std::size_t k = 0; k < K && n > 1; ++k) {
    const double gain_d = raw.defender_covered_payoff[k] - raw.defender_uncovered_payoff[k];
    std::vector<double> ratios;
    for (std::size_t j = 0; j < n; ++j) {
      ratios.push_back(
          (raw.attacker_uncovered_payoff[j][k] - raw.attacker_covered_payoff[j][k]) / gain_d);
    }
    if (NearDuplicate(ratios)) return true;
  }
  if (n > 1) {
    for (double p : raw.type_probabilities) {
      if (p < 1e-9) return true;
    }
  }
  return false;
}

GeneratedInstance generate_instance(std::uint64_t seed, int n, int K,
                                    const ExperimentConfig& cfg) {
  if (n < 1 || K < 1) throw PreconditionViolated("n and K must be >= 1");
  Sampler sampler(seed);
  const auto un = static_cast<std::size_t>(n);
  const auto uk = static_cast<std::size_t>(K);
  for (int attempt = 0; attempt <= cfg.max_regenerations; ++attempt) {
    RawInstance raw;
    raw.num_targets = K;
    raw.num_types = n;
    raw.defender_budget = sampler.Uniform(cfg.budget);
    raw.attacker_budget = sampler.Uniform(cfg.budget);
    raw.defender_covered_payoff.resize(uk);
    raw.defender_uncovered_payoff.resize(uk);
    for (auto& v : raw.defender_covered_payoff) v = sampler.Uniform(cfg.defender_covered);
    for (auto& v : raw.defender_uncovered_payoff) v = sampler.Uniform(cfg.defender_uncovered);
    raw.attacker_covered_payoff.assign(un, std::vector<double>(uk));
    raw.attacker_uncovered_payoff.assign(un, std::vector<double>(uk));
    for (auto& row : raw.attacker_covered_payoff) {
      for (auto& v : row) v = sampler.Uniform(cfg.attacker_covered);
    }
    for (auto& row : raw.attacker_uncovered_payoff) {
      for (auto& v : row) v = sampler.Uniform(cfg.attacker_uncovered);
    }
    std::vector<double> cuts(un - 1);
    for (auto& c : cuts) c = sampler.Uniform01();
    std::sort(cuts.begin(), cuts.end());
    raw.type_probabilities.resize(un);
    double previous = 0;
    for (std::size_t j = 0; j + 1 < un; ++j) {
      raw.type_probabilities[j] = cuts[j] - previous;
      previous = cuts[j];
    }
    raw.type_probabilities[un - 1] = 1.0 - previous;
    raw.true_type_index =
        std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(sampler.Uniform01() * n));

    if (has_degenerate_ties(raw)) continue;
    return {validate_instance(raw), attempt};
  }
  throw RetryExhausted("instance generation hit " + std::to_string(cfg.max_regenerations) +
                       " regenerations for seed " + std::to_string(seed));
}

GeneratedInstance generate_fig2_template(std::uint64_t seed, int K,
                                         const ExperimentConfig& cfg) {
  if (K < 1) throw PreconditionViolated("K must be >= 1");
  constexpr int n = 3;
  Sampler sampler(seed);
  const auto uk = static_cast<std::size_t>(K);
  for (int attempt = 0; attempt <= cfg.max_regenerations; ++attempt) {
    RawInstance raw;
    raw.num_targets = K;
    raw.num_types = n;
    raw.defender_budget = 1;
    raw.attacker_budget = 1;
    raw.true_type_index = 0;
    raw.type_probabilities.assign(n, 1.0 / n);
    raw.type_probabilities[n - 1] = 1.0 - 2.0 / n;
    for (std::size_t k = 0; k < uk; ++k) {
      const double a = sampler.Uniform(cfg.fig2_payoff);
      const double b = sampler.Uniform(cfg.fig2_payoff);
      raw.defender_covered_payoff.push_back(std::max(a, b));
      raw.defender_uncovered_payoff.push_back(std::min(a, b));
    }
    raw.attacker_covered_payoff.assign(n, std::vector<double>(uk));
    raw.attacker_uncovered_payoff.assign(n, std::vector<double>(uk));
    for (int j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < uk; ++k) {
        const double a = sampler.Uniform(cfg.fig2_payoff);
        const double b = sampler.Uniform(cfg.fig2_payoff);
        raw.attacker_uncovered_payoff[static_cast<std::size_t>(j)][k] = std::max(a, b);
        raw.attacker_covered_payoff[static_cast<std::size_t>(j)][k] = std::min(a, b);
      }
    }
    if (cfg.fig2_identical_types) {
      for (std::size_t j = 1; j < n; ++j) {
        raw.attacker_covered_payoff[j] = raw.attacker_covered_payoff[0];
        raw.attacker_uncovered_payoff[j] = raw.attacker_uncovered_payoff[0];
      }
      RawInstance single = raw;
      single.num_types = 1;
      single.type_probabilities = {1.0};
      single.attacker_covered_payoff.resize(1);
      single.attacker_uncovered_payoff.resize(1);
      if (has_degenerate_ties(single)) continue;
    } else if (has_degenerate_ties(raw)) {
      continue;
    }
    return {validate_instance(raw), attempt};
  }
  throw RetryExhausted("template generation hit " + std::to_string(cfg.max_regenerations) +
                       " regenerations for seed " + std::to_string(seed));
}

Fig1Output run_fig1(const ExperimentConfig& cfg, int threads) {
  validate_config(cfg);
  Fig1Output out;
  std::vector<std::pair<int, int>> cells;
  for (int n : cfg.type_counts) {
    for (int K : cfg.target_counts) cells.emplace_back(n, K);
  }
  const auto per_cell = static_cast<std::size_t>(cfg.instances_per_cell);
  out.rows.resize(cells.size() * per_cell);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t i = 0; i < per_cell; ++i) {
      Fig1Row& row = out.rows[c * per_cell + i];
      row.n = cells[c].first;
      row.K = cells[c].second;
      row.instance = static_cast<int>(i);
      row.seed = instance_seed(cfg.seed, static_cast<std::uint64_t>(row.n),
                               static_cast<std::uint64_t>(row.K), i);
    }
  }

  parallel_for(out.rows.size(), threads, [&](std::size_t idx) {
    Fig1Row& row = out.rows[idx];
    try {
      const GeneratedInstance generated = generate_instance(row.seed, row.n, row.K, cfg);
      row.regenerations = generated.regenerations;
      row.record = classify_stability(generated.game);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.kind() + ": " + e.what();
    }
  });

  std::ostringstream instances;
  instances << "n,K,instance,seed,sol_nonempty,pair_hbne,strategy_hbne,bsse_eu,regens\n";
  for (const Fig1Row& row : out.rows) {
    instances << row.n << ',' << row.K << ',' << row.instance << ',' << row.seed << ',';
    if (row.failed) {
      instances << "error,error,error,nan," << row.regenerations << '\n';
      continue;
    }
    instances << format_bool(row.record.sol_nonempty) << ','
              << format_bool(row.record.pair_hbne) << ','
              << format_bool(row.record.strategy_hbne) << ','
              << format_double(row.record.bsse_eu) << ',' << row.regenerations << '\n';
  }
  out.instances_csv = instances.str();

  std::ostringstream ratios;
  ratios << "n,K,case1_ratio,case2_ratio,instances,sol_nonempty,strategy_hbne,both,"
            "failures,degenerate_regenerated\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<const Fig1Row*> rows;
    for (std::size_t i = 0; i < per_cell; ++i) rows.push_back(&out.rows[c * per_cell + i]);
    const RatioRecord r = Aggregate(cells[c].first, cells[c].second, rows);
    if (r.instances > 0 &&
        r.failures > cfg.max_failure_fraction * static_cast<double>(r.instances)) {
      throw ExperimentAborted("cell " + CellName(r.n, r.K) + " failed on " +
                              std::to_string(r.failures) + " of " +
                              std::to_string(r.instances) + " instances");
    }
    ratios << r.n << ',' << r.K << ',' << format_double(r.case1_ratio) << ','
           << format_double(r.case2_ratio) << ',' << r.instances << ',' << r.sol_nonempty
           << ',' << r.strategy_hbne << ',' << r.both << ',' << r.failures << ','
           << r.degenerate_regenerated << '\n';
    out.ratios.push_back(r);
  }
  out.ratios_csv = ratios.str();

  if (!cells.empty()) {
    const int fixed_n = cfg.fixed_types ? cfg.fixed_types : cfg.type_counts.front();
    const int fixed_k = cfg.fixed_targets ? cfg.fixed_targets : cfg.target_counts.front();
    svg::BarChart by_targets;
    by_targets.title = "BSSE vs HBNE, n = " + std::to_string(fixed_n);
    by_targets.x_label = "number of targets K";
    by_targets.y_label = "ratio";
    by_targets.series = {{"Case 1", {}}, {"Case 2", {}}};
    svg::BarChart by_types = by_targets;
    by_types.title = "BSSE vs HBNE, K = " + std::to_string(fixed_k);
    by_types.x_label = "number of types n";
    for (const RatioRecord& r : out.ratios) {
      if (r.n == fixed_n) {
        by_targets.categories.push_back(std::to_string(r.K));
        by_targets.series[0].values.push_back(r.case1_ratio);
        by_targets.series[1].values.push_back(r.case2_ratio);
      }
      if (r.K == fixed_k) {
        by_types.categories.push_back(std::to_string(r.n));
        by_types.series[0].values.push_back(r.case1_ratio);
        by_types.series[1].values.push_back(r.case2_ratio);
      }
    }
    out.svg_fixed_types = svg::render_bar_chart(by_targets);
    out.svg_fixed_targets = svg::render_bar_chart(by_types);
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep, Index num_targets) {
  std::ostringstream os;
  os << "p1,p2,p3,color_key";
  for (Index k = 0; k < num_targets; ++k) os << ",x" << k;
  os << ",locally_robust,solver_status\n";
  for (const GridPoint& point : sweep.points) {
    os << format_double(point.p1, 6) << ',' << format_double(point.p2, 6) << ','
       << format_double(point.p3, 6) << ',' << (point.solved ? point.color_key : "none");
    for (Index k = 0; k < num_targets; ++k) {
      os << ',' << (point.solved ? format_double(point.x(k)) : std::string("nan"));
    }
    os << ',' << format_bool(point.locally_robust) << ',' << point.solver_status << '\n';
  }
  return os.str();
}

std::string sweep_svg(const SweepResult& sweep, const std::string& title) {
  svg::SimplexHeatmap map;
  map.title = title;
  map.step = sweep.step;
  std::map<std::string, int> color_of;
  std::vector<std::string> order;
  for (const GridPoint& point : sweep.points) {
    const std::string key = point.solved ? point.color_key : "unsolved";
    auto it = color_of.find(key);
    if (it == color_of.end()) {
      it = color_of.emplace(key, static_cast<int>(order.size())).first;
      std::string label = key;
      if (point.solved) {
        label = "x=(";
        for (Index k = 0; k < point.x.size(); ++k) {
          label += (k ? "," : "") + format_double(point.x(k), 3);
        }
        label += ")";
      }
      order.push_back(label);
    }
    map.cells.push_back({point.p1, point.p2, it->second});
  }
  map.legend = order;
  return svg::render_simplex_heatmap(map);
}

Fig2Setting run_fig2_template(const GameInstance& template_game, double step, int threads,
                              std::uint64_t seed) {
  Fig2Setting setting;
  setting.seed = seed;
  setting.sweep = simplex_grid_sweep(template_game, step, SolverOptions{}, threads);
  setting.csv = sweep_csv(setting.sweep, template_game.num_targets());
  setting.svg = sweep_svg(setting.sweep, "HBNE defender strategy, setting seed " +
                                             std::to_string(seed));
  return setting;
}

Fig2Output run_fig2(const ExperimentConfig& cfg, int threads) {
  validate_config(cfg);
  Fig2Output out;
  for (std::uint64_t seed : cfg.fig2_seeds) {
    const GeneratedInstance generated = generate_fig2_template(seed, cfg.fig2_targets, cfg);
    out.settings.push_back(run_fig2_template(generated.game, cfg.grid_step, threads, seed));
  }
  return out;
}

namespace {

std::filesystem::path RunDirectory(const ExperimentConfig& cfg) {
  return std::filesystem::path(cfg.out_dir) / ("run-" + config_hash(cfg));
}

io::Json Metadata(const ExperimentConfig& cfg) {
  io::Json doc;
  doc["config"] = config_to_json(cfg);
  doc["config_hash"] = config_hash(cfg);
  doc["type_distribution"] = "uniform on the simplex via sorted uniform spacings";
  doc["instance_seed"] =
      "splitmix64 chain: h=sm(seed); h=sm(h^n); h=sm(h^K); h=sm(h^instance)";
  doc["tie_regeneration"] =
      "instances with gains, repeated payoffs, cross-type gain ratios or type "
      "probabilities within 1e-9 of a tie are redrawn";
  return doc;
}

}  // namespace

std::filesystem::path write_fig1(const ExperimentConfig& cfg, const Fig1Output& out) {
  const auto dir = RunDirectory(cfg);
  io::write_file_atomic(dir / "fig1_instances.csv", out.instances_csv);
  io::write_file_atomic(dir / "fig1_ratios.csv", out.ratios_csv);
  if (!out.svg_fixed_types.empty()) {
    io::write_file_atomic(dir / "fig1_fixed_n.svg", out.svg_fixed_types);
    io::write_file_atomic(dir / "fig1_fixed_k.svg", out.svg_fixed_targets);
  }
  io::write_file_atomic(dir / "metadata.json", Metadata(cfg).dump(2) + "\n");
  return dir;
}

std::filesystem::path write_fig2(const ExperimentConfig& cfg, const Fig2Output& out) {
  const auto dir = RunDirectory(cfg);
  for (std::size_t s = 0; s < out.settings.size(); ++s) {
    const auto stem = "fig2_setting" + std::to_string(s + 1);
    io::write_file_atomic(dir / (stem + ".csv"), out.settings[s].csv);
    io::write_file_atomic(dir / (stem + ".svg"), out.settings[s].svg);
  }
  io::write_file_atomic(dir / "metadata.json", Metadata(cfg).dump(2) + "\n");
  return dir;
}

}  // namespace mtdhg::harness
