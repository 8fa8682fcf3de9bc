#include "mtdhg/stability.hpp"

#include <cmath>

#include "constraints.hpp"
#include "mtdhg/format.hpp"
#include "mtdhg/numerics/rank.hpp"
#include "mtdhg/numerics/simplex.hpp"
#include "mtdhg/robustness.hpp"

namespace mtdhg {

namespace {

void CheckShape(const GameInstance& game, const AttackerPolicy& y) {
  if (y.num_types() != game.num_types() || y.num_targets() != game.num_targets()) {
    throw ShapeError("attacker policy shape does not match the game");
  }
}

Vector Indicator(const Vector& v) {
  return (v.array().abs() > kSupportThreshold).cast<double>().matrix();
}

SolSystem BuildSystem(const GameInstance& game, const AttackerPolicy& y,
                      bool with_probabilities) {
  CheckShape(game, y);
  const Index K = game.num_targets();
  const Index n = game.num_types();
  const Vector& p = game.type_probabilities();
  SolSystem system;
  system.A1 = Matrix::Zero(K, n * K);
  system.B = Matrix::Zero(K, n * K);
  for (Index j = 0; j < n; ++j) {
    const double weight = with_probabilities ? p(j) : 1.0;
    const Vector ratios =
        game.attacker_gain().row(j).transpose().cwiseQuotient(game.defender_gain());
    system.A1.block(0, j * K, K, K) = weight * ratios.asDiagonal();
    system.B.block(0, j * K, K, K) = weight * Matrix::Identity(K, K);
  }
  const Vector stacked = y.stacked();
  system.A2 = (Vector::Ones(n * K) - Indicator(stacked)).asDiagonal();
  system.rhs_base = system.B * stacked;
  return system;
}

// maximize λ  s.t.  A1 y' - λ rhs = 0,  A2 y' = 0,  block sums = R_a,
//                   y' >= 0,  0 <= λ <= cap.
StabilityReport SolveSystem(const GameInstance& game, const SolSystem& system,
                            StabilityMethod method, const StabilityOptions& opts) {
  const Index K = game.num_targets();
  const Index n = game.num_types();
  const Index lambda = n * K;
  detail::Lp lp(n * K + 1);
  lp.objective(lambda) = 1;
  lp.upper(lambda) = opts.lambda_cap;
  for (Index k = 0; k < K; ++k) {
    Vector row = Vector::Zero(n * K + 1);
    row.head(n * K) = system.A1.row(k).transpose();
    row(lambda) = -system.rhs_base(k);
    lp.add_equality(row, 0.0);
  }
  for (Index i = 0; i < n * K; ++i) {
    if (system.A2(i, i) == 0) continue;
    Vector row = Vector::Zero(n * K + 1);
    row.head(n * K) = system.A2.row(i).transpose();
    lp.add_equality(row, 0.0);
  }
  detail::add_attacker_budgets(lp, game, 0);

  StabilityReport report;
  report.method = method;
  const auto outcome = numerics::solve_lp(lp, opts.solver.numerics);
  if (outcome.status == numerics::LpStatus::kUnbounded) {
    throw NumericalFailure("SOL LP reported unbounded despite the λ cap");
  }
  if (outcome.optimal() && outcome.solution(lambda) > opts.lambda_threshold) {
    report.sol_nonempty = true;
    report.witness_lambda = outcome.solution(lambda);
    Matrix y_prime = detail::unstack(outcome.solution, n, K);
    y_prime = y_prime.cwiseMax(0.0);
    for (Index j = 0; j < n; ++j) y_prime.row(j) *= game.attacker_budget() / y_prime.row(j).sum();
    report.witness_y_prime.emplace(game, std::move(y_prime));
  }
  return report;
}

}  // namespace

const char* to_string(StabilityMethod method) {
  switch (method) {
    case StabilityMethod::kGeneral:
      return "general";
    case StabilityMethod::kUniform:
      return "uniform";
    case StabilityMethod::kBernoulliRank:
      return "bernoulli_rank";
    case StabilityMethod::kOnePoint:
      return "one_point";
  }
  return "?";
}

SolSystem build_sol_system(const GameInstance& game, const AttackerPolicy& y) {
  return BuildSystem(game, y, /*with_probabilities=*/true);
}

SolSystem build_sol_system_uniform(const GameInstance& game, const AttackerPolicy& y) {
  return BuildSystem(game, y, /*with_probabilities=*/false);
}

StabilityReport check_sol(const GameInstance& game, const AttackerPolicy& y,
                          const StabilityOptions& opts) {
  const auto method = distribution_of(game).one_point_type() >= 0
                          ? StabilityMethod::kOnePoint
                          : StabilityMethod::kGeneral;
  return SolveSystem(game, build_sol_system(game, y), method, opts);
}

StabilityReport check_sol_uniform(const GameInstance& game, const AttackerPolicy& y,
                                  const StabilityOptions& opts) {
  if (!distribution_of(game).is_uniform()) {
    throw NotUniform("check_sol_uniform requires a uniform type distribution");
  }
  return SolveSystem(game, build_sol_system_uniform(game, y), StabilityMethod::kUniform,
                     opts);
}

Matrix bernoulli_rank_matrix(const GameInstance& game, const AttackerPolicy& y,
                             bool single_factor) {
  CheckShape(game, y);
  const Index K = game.num_targets();
  const Index n = game.num_types();
  const Vector& p = game.type_probabilities();
  const Vector chi = Indicator(y.stacked());
  Matrix A = Matrix::Zero(K + n * K, n * K);
  for (Index i = 0; i < n; ++i) {
    const Vector ratios =
        game.attacker_gain().row(i).transpose().cwiseQuotient(game.defender_gain());
    const double inner = single_factor ? 1.0 : p(i);
    const Vector diagonal = inner * chi.segment(i * K, K).cwiseProduct(ratios);
    A.block(0, i * K, K, K) = p(i) * Matrix(diagonal.asDiagonal());
  }
  A.bottomRows(n * K) = (Vector::Ones(n * K) - chi).asDiagonal();
  return A;
}

StabilityReport check_bernoulli_rank(const GameInstance& game, const AttackerPolicy& y,
                                     const StabilityOptions& opts) {
  if (game.num_types() != 2) {
    throw PreconditionViolated("Bernoulli rank test requires exactly two types");
  }
  if (std::abs(game.defender_budget() - 1) > kSimplexTol ||
      std::abs(game.attacker_budget() - 1) > kSimplexTol) {
    throw PreconditionViolated("Bernoulli rank test requires R_d = R_a = 1");
  }
  const double p1 = game.type_probabilities()(0);
  if (p1 <= kSimplexTol || p1 >= 1 - kSimplexTol) {
    throw PreconditionViolated(
        "Bernoulli rank test requires P(θ_1) not in {0, 1} (one-point distribution)");
  }
  StabilityReport report;
  report.method = StabilityMethod::kBernoulliRank;
  report.rank = numerics::matrix_rank(
      bernoulli_rank_matrix(game, y, opts.bernoulli_single_factor), opts.rank_tol);
  report.rank_threshold = 2 * game.num_targets() - 1;
  report.rank_condition_holds = report.rank < report.rank_threshold;
  return report;
}

ClassificationRecord classify_stability(const GameInstance& game,
                                        const StabilityOptions& opts) {
  ClassificationRecord record;
  const EquilibriumResult bsse = solve_bsse(game, opts.solver);
  record.bsse_eu = bsse.defender_expected_utility;
  record.lp_calls = bsse.diagnostics.lp_calls;
  record.bsse_x = bsse.defender_strategy.allocation();
  record.bsse_y = bsse.attacker_policy.allocation();

  const StabilityReport sol = check_sol(game, bsse.attacker_policy, opts);
  record.lp_calls += 1;
  record.sol_nonempty = sol.sol_nonempty;
  record.sol_lambda = sol.witness_lambda;

  const TypeDistribution dist = distribution_of(game);
  record.pair_hbne = verify_equilibrium(game, record.bsse_x, record.bsse_y, dist,
                                        opts.solver.epsilon)
                         .passed();
  record.strategy_hbne = check_robust(game, bsse.defender_strategy, dist,
                                      opts.solver.tie_tol, opts.solver.numerics)
                             .is_robust;
  record.lp_calls += 1;
  return record;
}

std::string classification_csv_header() {
  return "instance_id,seed,n,K,sol_nonempty,pair_hbne,strategy_hbne,bsse_eu,lp_calls";
}

std::string classification_csv_row(const std::string& instance_id, std::uint64_t seed,
                                   const GameInstance& game,
                                   const ClassificationRecord& record) {
  return instance_id + "," + std::to_string(seed) + "," +
         std::to_string(game.num_types()) + "," + std::to_string(game.num_targets()) +
         "," + format_bool(record.sol_nonempty) + "," + format_bool(record.pair_hbne) +
         "," + format_bool(record.strategy_hbne) + "," + format_double(record.bsse_eu) +
         "," + std::to_string(record.lp_calls);
}

}  // namespace mtdhg
