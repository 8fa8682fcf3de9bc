#pragma once

// Seeded random instances and the two batch experiments: the BSSE/HBNE
// stability ratios over (n, K) cells, and the HBNE robustness sweep over the
// 3-type probability simplex.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mtdhg/io.hpp"
#include "mtdhg/model.hpp"
#include "mtdhg/robustness.hpp"
#include "mtdhg/stability.hpp"

namespace mtdhg::harness {

struct Range {
  double low = 0;
  double high = 0;
};

struct ExperimentConfig {
  std::uint64_t seed = 20240611;
  int instances_per_cell = 100;
  std::vector<int> type_counts{2, 3, 4};
  std::vector<int> target_counts{2, 3, 4};
  Range defender_covered{5, 10};
  Range defender_uncovered{0, 5};
  Range attacker_covered{0, 5};
  Range attacker_uncovered{5, 10};
  Range budget{1, 5};
  int max_regenerations = 100;
  double max_failure_fraction = 0.05;
  // Charts: bars over K at n = fixed_types, bars over n at K = fixed_targets.
  // Zero selects the first configured count.
  int fixed_types = 0;
  int fixed_targets = 0;

  double grid_step = 0.05;
  int fig2_targets = 3;
  std::vector<std::uint64_t> fig2_seeds{101, 202};
  Range fig2_payoff{0, 5};
  bool fig2_identical_types = false;

  std::string out_dir = "runs";
  int threads = 0;  // 0: machine parallelism
};

ExperimentConfig config_from_json(const io::Json& doc);
io::Json config_to_json(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);
// 16 hex digits identifying the configuration; names the run directory.
std::string config_hash(const ExperimentConfig& cfg);

std::uint64_t splitmix64(std::uint64_t state);
// h = sm(base); h = sm(h ^ n); h = sm(h ^ K); h = sm(h ^ index)
std::uint64_t instance_seed(std::uint64_t base, std::uint64_t n, std::uint64_t K,
                            std::uint64_t index);

struct GeneratedInstance {
  GameInstance game;
  int regenerations = 0;
};

// True when the instance sits on a tie that the equilibrium and stability
// tests are sensitive to: gains within 1e-9 of zero, repeated payoff values
// inside a table, equal attacker/defender gain ratios across types at a
// target, or (n >= 2) a type of probability below 1e-9.
bool has_degenerate_ties(const RawInstance& raw);

// Draw order from mt19937_64(seed), u = (next >> 11) * 2^-53:
// R_d, R_a, U_d_c[k], U_d_u[k], U_a_c[j][k], U_a_u[j][k] (row-major),
// n-1 uniforms whose sorted spacings give P, then theta0 = floor(u * n).
// Degenerate draws are redrawn from the same stream.
GeneratedInstance generate_instance(std::uint64_t seed, int n, int K,
                                    const ExperimentConfig& cfg);

// Three-type template with R_d = R_a = 1 and every payoff in cfg.fig2_payoff;
// each covered/uncovered pair is ordered so the payoff assumptions hold.
GeneratedInstance generate_fig2_template(std::uint64_t seed, int K,
                                         const ExperimentConfig& cfg);

struct Fig1Row {
  int n = 0;
  int K = 0;
  int instance = 0;
  std::uint64_t seed = 0;
  int regenerations = 0;
  bool failed = false;
  std::string error;
  ClassificationRecord record;
};

struct RatioRecord {
  int n = 0;
  int K = 0;
  double case1_ratio = 1;  // P(strategy_hbne | sol_nonempty)
  double case2_ratio = 1;  // P(sol_nonempty | strategy_hbne)
  int instances = 0;
  int sol_nonempty = 0;    // case-1 denominator
  int strategy_hbne = 0;   // case-2 denominator
  int both = 0;
  int failures = 0;
  int degenerate_regenerated = 0;
};

struct Fig1Output {
  std::vector<Fig1Row> rows;
  std::vector<RatioRecord> ratios;
  std::string instances_csv;
  std::string ratios_csv;
  std::string svg_fixed_types;
  std::string svg_fixed_targets;
};

Fig1Output run_fig1(const ExperimentConfig& cfg, int threads);

struct Fig2Setting {
  std::uint64_t seed = 0;
  SweepResult sweep;
  std::string csv;
  std::string svg;
};

struct Fig2Output {
  std::vector<Fig2Setting> settings;
};

Fig2Output run_fig2(const ExperimentConfig& cfg, int threads);
// Sweep of a given template (n = 3); no instance generation.
Fig2Setting run_fig2_template(const GameInstance& template_game, double step,
                              int threads, std::uint64_t seed = 0);

std::string sweep_csv(const SweepResult& sweep, Index num_targets);
std::string sweep_svg(const SweepResult& sweep, const std::string& title);

// Writes outputs under <out_dir>/run-<config_hash>/ and returns that path.
std::filesystem::path write_fig1(const ExperimentConfig& cfg, const Fig1Output& out);
std::filesystem::path write_fig2(const ExperimentConfig& cfg, const Fig2Output& out);

}  // namespace mtdhg::harness
