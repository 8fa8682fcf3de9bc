#pragma once

// Robustness of an HBNE defender strategy x* when the defender's belief
// about the type distribution is perturbed from P to P'.
//
// x* is robust at P' when some y' with y'(θ) in BR(x*, θ) for every θ makes
// x* a best reply under P'. With d'_k = ΔU_d(t_k) sum_θ P'(θ) y'^k(θ) this is
// the linear condition: d' is constant on supp(x*) and maximal there.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtdhg/equilibria.hpp"
#include "mtdhg/model.hpp"

namespace mtdhg {

struct RobustnessReport {
  bool is_robust = false;
  std::optional<AttackerPolicy> witness_policy;
  double perturbation_l1 = 0;
  double tie_tol = kDefaultTieTol;
  std::vector<std::string> notes;
};

RobustnessReport check_robust(const GameInstance& game, const DefenderStrategy& x_star,
                              const TypeDistribution& p_prime,
                              double tie_tol = kDefaultTieTol,
                              const numerics::NumericsConfig& numerics = {});

struct RadiusOptions {
  int direction_samples = 64;
  double bisection_tolerance = 1e-4;
  double scan_step = 1e-2;
  std::uint64_t seed = 0x5eed;
  double tie_tol = kDefaultTieTol;
  numerics::NumericsConfig numerics;
};

struct RadiusEstimate {
  // Every P' tested along a sampled direction within this L1 distance of the
  // base distribution was robust.
  double radius = 0;
  int direction_samples = 0;
  int directions_evaluated = 0;  // sampled plus vertex directions
  double bisection_tolerance = 0;
  double max_reachable = 0;      // largest L1 distance inside the simplex
  long long robustness_checks = 0;
};

// Throws NotRobustAtBase when x_star is not robust at p_base itself.
RadiusEstimate robustness_radius(const GameInstance& game, const DefenderStrategy& x_star,
                                 const TypeDistribution& p_base,
                                 const RadiusOptions& opts = {});

struct GridPoint {
  int i = 0;  // P(θ_1) = i * step
  int j = 0;  // P(θ_2) = j * step
  double p1 = 0, p2 = 0, p3 = 0;
  bool solved = false;
  std::string solver_status;  // "ok" or the error kind
  Vector x;
  TargetSet support;
  std::string color_key;
  bool locally_robust = false;
};

struct SweepResult {
  double step = 0;
  int divisions = 0;
  std::vector<GridPoint> points;  // ordered by i, then j
  double locally_robust_fraction = 0;
  // Sampled points whose strategy was checked against each neighbor's P'.
  int cross_checked = 0;
  int cross_check_robust = 0;
};

// Canonical key of a defender strategy: support plus allocation rounded to
// 1e-3, hashed to 16 hex digits.
std::string strategy_color_key(const Vector& x);

// HBNE defender strategy at every point of the 3-type simplex lattice with
// spacing `step`. `threads` <= 1 runs sequentially.
SweepResult simplex_grid_sweep(const GameInstance& template_game, double step,
                               const SolverOptions& opts = {}, int threads = 1,
                               int cross_check_stride = 7);

}  // namespace mtdhg
