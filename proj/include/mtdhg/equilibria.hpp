#pragma once

#include <optional>
#include <vector>

#include "mtdhg/model.hpp"
#include "mtdhg/numerics/linear_program.hpp"

namespace mtdhg {

struct SolverOptions {
  double epsilon = 1e-6;          // verification tolerance on regrets
  long long max_lp_calls = 1'000'000;
  double tie_tol = kDefaultTieTol;
  numerics::NumericsConfig numerics;
};

struct SolverDiagnostics {
  long long lp_calls = 0;
  long long pruned = 0;              // BSSE: partial assignments abandoned
  long long supports_examined = 0;   // HBNE: full support combinations tried
  double wall_seconds = 0;
};

struct EquilibriumResult {
  DefenderStrategy defender_strategy;
  AttackerPolicy attacker_policy;
  double defender_expected_utility = 0;
  Vector attacker_values;  // per type, R_a * max_k attack value
  TargetSet defender_support;
  std::vector<TargetSet> attacker_supports;
  SolverDiagnostics diagnostics;
};

struct VerificationReport {
  std::vector<bool> is_attacker_best_response;
  Vector attacker_regret;
  double defender_regret = 0;
  double epsilon = 0;

  bool defender_best_response() const { return defender_regret <= epsilon; }
  bool passed() const;
};

// Bayesian strong Stackelberg equilibrium by enumeration of pure attacker
// assignments, one LP per surviving assignment.
EquilibriumResult solve_bsse(const GameInstance& game, const SolverOptions& opts = {});

// Hyper Bayesian Nash equilibrium by support enumeration.
EquilibriumResult solve_hbne(const GameInstance& game, const SolverOptions& opts = {});

// Regrets of both sides at (x, y) under `dist`. Both are exact, since each
// player's best reply is a linear optimization over a scaled simplex.
VerificationReport verify_equilibrium(const GameInstance& game,
                                      const Eigen::Ref<const Vector>& x,
                                      const Eigen::Ref<const Matrix>& y,
                                      const TypeDistribution& dist, double epsilon);

// Builds an EquilibriumResult (supports, values) around a strategy pair.
EquilibriumResult make_result(const GameInstance& game, const Vector& x,
                              const Matrix& y, SolverDiagnostics diagnostics);

}  // namespace mtdhg
