#include "mtdhg/equilibria.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

#include "constraints.hpp"
#include "mtdhg/numerics/simplex.hpp"

namespace mtdhg {

namespace {

using detail::Lp;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class LpBudget {
 public:
  LpBudget(SolverDiagnostics& diagnostics, long long limit, const char* what)
      : diagnostics_(diagnostics), limit_(limit), what_(what) {}

  void Charge() {
    if (++diagnostics_.lp_calls > limit_) {
      throw BudgetExceeded(std::string(what_) + ": LP budget of " +
                           std::to_string(limit_) + " exhausted after examining " +
                           std::to_string(diagnostics_.supports_examined) +
                           " support combinations and pruning " +
                           std::to_string(diagnostics_.pruned) + " assignments");
    }
  }

 private:
  SolverDiagnostics& diagnostics_;
  long long limit_;
  const char* what_;
};

// ---------------------------------------------------------------------------
// BSSE

class BsseSearch {
 public:
  BsseSearch(const GameInstance& game, const SolverOptions& opts,
             SolverDiagnostics& diagnostics)
      : game_(game),
        opts_(opts),
        diagnostics_(diagnostics),
        budget_(diagnostics, opts.max_lp_calls, "solve_bsse"),
        assignment_(static_cast<std::size_t>(game.num_types()), 0) {
    const Index K = game.num_targets();
    order_.resize(static_cast<std::size_t>(K));
    std::iota(order_.begin(), order_.end(), Index{0});
    const Vector& covered = game.defender_covered_payoff();
    std::stable_sort(order_.begin(), order_.end(),
                     [&](Index a, Index b) { return covered(a) > covered(b); });
    const double scale = game.attacker_budget() * game.defender_budget();
    best_case_ = scale * covered.maxCoeff();
  }

  void Run() { Visit(0, 0.0); }

  bool found() const { return found_; }
  const Vector& best_x() const { return best_x_; }
  const std::vector<Index>& best_assignment() const { return best_assignment_; }

 private:
  double Bound(std::size_t assigned, double assigned_bound) const {
    double bound = assigned_bound;
    const Vector& p = game_.type_probabilities();
    for (auto j = static_cast<Index>(assigned); j < game_.num_types(); ++j) {
      bound += p(j) * best_case_;
    }
    return bound;
  }

  bool Improves(double value) const {
    return !found_ || value > incumbent_ + 1e-9 * (1 + std::abs(incumbent_));
  }

  void Visit(std::size_t type, double assigned_bound) {
    if (found_ && !Improves(Bound(type, assigned_bound))) {
      ++diagnostics_.pruned;
      return;
    }
    if (type == assignment_.size()) {
      SolveLeaf();
      return;
    }
    const double scale = game_.attacker_budget() * game_.defender_budget();
    const double p = game_.type_probabilities()(static_cast<Index>(type));
    for (Index target : order_) {
      assignment_[type] = target;
      Visit(type + 1,
            assigned_bound + p * scale * game_.defender_covered_payoff()(target));
    }
  }

  void SolveLeaf() {
    const Index K = game_.num_targets();
    const double R_a = game_.attacker_budget();
    const double R_d = game_.defender_budget();
    const Vector& p = game_.type_probabilities();

    Lp lp(K);
    detail::add_defender_budget(lp, game_, 0);
    double constant = 0;
    for (Index j = 0; j < game_.num_types(); ++j) {
      const Index t = assignment_[static_cast<std::size_t>(j)];
      lp.objective(t) += p(j) * R_a * game_.defender_gain()(t);
      constant += p(j) * R_a * R_d * game_.defender_uncovered_payoff()(t);
      for (Index k = 0; k < K; ++k) {
        detail::add_attack_comparison(lp, game_, j, k, t, 0, /*equality=*/false);
      }
    }
    budget_.Charge();
    const auto outcome = numerics::solve_lp(lp, opts_.numerics);
    if (outcome.status == numerics::LpStatus::kUnbounded) {
      throw NumericalFailure("BSSE assignment LP reported unbounded");
    }
    if (!outcome.optimal()) return;
    const double value = outcome.objective_value + constant;
    if (Improves(value)) {
      found_ = true;
      incumbent_ = value;
      best_x_ = outcome.solution;
      best_assignment_ = assignment_;
    }
  }

  const GameInstance& game_;
  const SolverOptions& opts_;
  SolverDiagnostics& diagnostics_;
  LpBudget budget_;
  std::vector<Index> order_;
  std::vector<Index> assignment_;
  double best_case_ = 0;

  bool found_ = false;
  double incumbent_ = -std::numeric_limits<double>::infinity();
  Vector best_x_;
  std::vector<Index> best_assignment_;
};

// ---------------------------------------------------------------------------
// HBNE

using Mask = std::uint32_t;

TargetSet MaskToSet(Mask mask) {
  TargetSet out;
  for (Index k = 0; mask != 0; ++k, mask >>= 1) {
    if (mask & 1u) out.push_back(k);
  }
  return out;
}

// Non-empty subsets of {0..K-1} ordered by size, then lexicographically by
// their sorted index lists.
std::vector<Mask> OrderedSubsets(Index K) {
  std::vector<Mask> masks;
  for (Mask m = 1; m < (Mask{1} << K); ++m) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [](Mask a, Mask b) {
    const int pa = std::popcount(a);
    const int pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    return MaskToSet(a) < MaskToSet(b);
  });
  return masks;
}

class HbneSearch {
 public:
  HbneSearch(const GameInstance& game, const SolverOptions& opts,
             SolverDiagnostics& diagnostics)
      : game_(game),
        opts_(opts),
        diagnostics_(diagnostics),
        budget_(diagnostics, opts.max_lp_calls, "solve_hbne"),
        dist_(game.type_probabilities()),
        subsets_(OrderedSubsets(game.num_targets())) {}

  bool Run() {
    const Index K = game_.num_targets();
    const Index n = game_.num_types();
    if (K > 20) throw BudgetExceeded("solve_hbne: support enumeration limited to K <= 20");
    FilterTieSets();

    for (Index total = n + 1; total <= K * (n + 1); ++total) {
      for (Mask defender : subsets_) {
        const Index rest = total - std::popcount(defender);
        if (rest < n || rest > n * K) continue;
        prefix_.assign(1, defender);
        if (Descend(0, rest)) return true;
      }
    }
    return false;
  }

  const Vector& x() const { return x_; }
  const Matrix& y() const { return y_; }

 private:
  // Tie sets each type can realize on its own for some x in the defender
  // simplex; only these are enumerated.
  void FilterTieSets() {
    candidates_.assign(static_cast<std::size_t>(game_.num_types()), {});
    for (Index j = 0; j < game_.num_types(); ++j) {
      for (Mask m : subsets_) {
        Lp lp(game_.num_targets());
        detail::add_defender_budget(lp, game_, 0);
        detail::add_attack_tie_set(lp, game_, j, MaskToSet(m), 0);
        budget_.Charge();
        if (numerics::solve_feasibility(lp, opts_.numerics)) {
          candidates_[static_cast<std::size_t>(j)].push_back(m);
        }
      }
    }
  }

  // Feasibility of the x-side constraints for the current prefix
  // (defender support plus the tie sets chosen so far). Memoized.
  bool PrefixFeasible() {
    auto it = prefix_cache_.find(prefix_);
    if (it != prefix_cache_.end()) return it->second;
    const Index K = game_.num_targets();
    Lp lp(K);
    detail::add_defender_budget(lp, game_, 0);
    for (std::size_t j = 1; j < prefix_.size(); ++j) {
      detail::add_attack_tie_set(lp, game_, static_cast<Index>(j - 1),
                                 MaskToSet(prefix_[j]), 0);
    }
    std::vector<bool> keep(static_cast<std::size_t>(K));
    for (Index k = 0; k < K; ++k) keep[static_cast<std::size_t>(k)] = (prefix_[0] >> k) & 1u;
    budget_.Charge();
    const bool feasible =
        numerics::solve_feasibility(detail::keep_columns(lp, keep), opts_.numerics)
            .has_value();
    prefix_cache_.emplace(prefix_, feasible);
    return feasible;
  }

  bool Descend(Index type, Index remaining) {
    const Index n = game_.num_types();
    const Index K = game_.num_targets();
    if (type == n) return remaining == 0 && SolveLeaf();
    const Index types_after = n - type - 1;
    for (Mask m : candidates_[static_cast<std::size_t>(type)]) {
      const Index size = std::popcount(m);
      const Index left = remaining - size;
      if (left < types_after || left > types_after * K) continue;
      prefix_.push_back(m);
      const bool done = PrefixFeasible() && Descend(type + 1, left);
      prefix_.pop_back();
      if (done) return true;
    }
    return false;
  }

  bool SolveLeaf() {
    const Index K = game_.num_targets();
    const Index n = game_.num_types();
    Mask attacked = 0;
    for (std::size_t j = 1; j < prefix_.size(); ++j) attacked |= prefix_[j];
    // The defender's support must carry attack mass, otherwise every
    // coefficient there is zero and cannot be maximal.
    if ((prefix_[0] & ~attacked) != 0) return false;
    ++diagnostics_.supports_examined;

    const Index y_offset = K;
    Lp lp(K + n * K);
    detail::add_defender_budget(lp, game_, 0);
    detail::add_attacker_budgets(lp, game_, y_offset);
    for (Index j = 0; j < n; ++j) {
      detail::add_attack_tie_set(lp, game_, j,
                                 MaskToSet(prefix_[static_cast<std::size_t>(j + 1)]), 0);
    }
    detail::add_coefficient_tie_set(lp, game_, dist_.probabilities(),
                                    MaskToSet(prefix_[0]), y_offset);
    std::vector<bool> keep(static_cast<std::size_t>(K + n * K));
    for (Index k = 0; k < K; ++k) {
      keep[static_cast<std::size_t>(k)] = (prefix_[0] >> k) & 1u;
      for (Index j = 0; j < n; ++j) {
        keep[static_cast<std::size_t>(y_offset + j * K + k)] =
            (prefix_[static_cast<std::size_t>(j + 1)] >> k) & 1u;
      }
    }
    budget_.Charge();
    const auto witness =
        numerics::solve_feasibility(detail::keep_columns(lp, keep), opts_.numerics);
    if (!witness) return false;
    const Vector full = detail::expand_columns(*witness, keep);
    Vector x = full.head(K);
    Matrix y = detail::unstack(full, n, K, y_offset);
    if (!verify_equilibrium(game_, x, y, dist_, opts_.epsilon).passed()) return false;
    x_ = std::move(x);
    y_ = std::move(y);
    return true;
  }

  const GameInstance& game_;
  const SolverOptions& opts_;
  SolverDiagnostics& diagnostics_;
  LpBudget budget_;
  TypeDistribution dist_;
  std::vector<Mask> subsets_;
  std::vector<std::vector<Mask>> candidates_;
  std::vector<Mask> prefix_;
  std::map<std::vector<Mask>, bool> prefix_cache_;
  Vector x_;
  Matrix y_;
};

}  // namespace

bool VerificationReport::passed() const {
  for (bool ok : is_attacker_best_response) {
    if (!ok) return false;
  }
  return defender_best_response();
}

VerificationReport verify_equilibrium(const GameInstance& game,
                                      const Eigen::Ref<const Vector>& x,
                                      const Eigen::Ref<const Matrix>& y,
                                      const TypeDistribution& dist, double epsilon) {
  if (!(epsilon > 0)) throw PreconditionViolated("epsilon must be positive");
  const Index n = game.num_types();
  if (x.size() != game.num_targets() || y.rows() != n ||
      y.cols() != game.num_targets() || dist.size() != n) {
    throw ShapeError("strategy shapes do not match the game");
  }
  VerificationReport report;
  report.epsilon = epsilon;
  report.attacker_regret.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Vector values = attack_values(game, x, j);
    const double regret =
        values.maxCoeff() * game.attacker_budget() - y.row(j).dot(values);
    report.attacker_regret(j) = regret;
    report.is_attacker_best_response.push_back(regret <= epsilon);
  }
  const LinearForm form = defender_coefficients(game, y, dist);
  report.defender_regret = form.coefficients.maxCoeff() * game.defender_budget() +
                           form.constant -
                           expected_defender_utility(game, x, y, dist);
  return report;
}

EquilibriumResult make_result(const GameInstance& game, const Vector& x,
                              const Matrix& y, SolverDiagnostics diagnostics) {
  const Index n = game.num_types();
  // Clamp solver round-off before the simplex invariants are checked.
  Vector xc = x.cwiseMax(0.0);
  xc *= game.defender_budget() / xc.sum();
  Matrix yc = y.cwiseMax(0.0);
  for (Index j = 0; j < n; ++j) yc.row(j) *= game.attacker_budget() / yc.row(j).sum();

  EquilibriumResult result{DefenderStrategy(game, xc), AttackerPolicy(game, yc)};
  result.defender_expected_utility =
      expected_defender_utility(game, xc, yc, distribution_of(game));
  result.attacker_values.resize(n);
  for (Index j = 0; j < n; ++j) {
    result.attacker_values(j) =
        game.attacker_budget() * attack_values(game, xc, j).maxCoeff();
    result.attacker_supports.push_back(support_of(yc.row(j).transpose()));
  }
  result.defender_support = support_of(xc);
  result.diagnostics = diagnostics;
  return result;
}

EquilibriumResult solve_bsse(const GameInstance& game, const SolverOptions& opts) {
  const auto start = Clock::now();
  SolverDiagnostics diagnostics;
  BsseSearch search(game, opts, diagnostics);
  search.Run();
  if (!search.found()) {
    throw NotFound("solve_bsse: no assignment LP was feasible; this contradicts "
                   "equilibrium existence and indicates a numerical problem");
  }
  const Index n = game.num_types();
  Matrix y = Matrix::Zero(n, game.num_targets());
  for (Index j = 0; j < n; ++j) {
    y(j, search.best_assignment()[static_cast<std::size_t>(j)]) = game.attacker_budget();
  }
  diagnostics.wall_seconds = Seconds(start);
  EquilibriumResult result = make_result(game, search.best_x(), y, diagnostics);

  const auto report =
      verify_equilibrium(game, result.defender_strategy.allocation(),
                         result.attacker_policy.allocation(), distribution_of(game),
                         opts.numerics.feasibility_tol);
  for (bool ok : report.is_attacker_best_response) {
    if (!ok) {
      throw NumericalFailure("solve_bsse: attacker assignment is not a best response "
                             "at the LP optimum");
    }
  }
  return result;
}

EquilibriumResult solve_hbne(const GameInstance& game, const SolverOptions& opts) {
  const auto start = Clock::now();
  SolverDiagnostics diagnostics;
  HbneSearch search(game, opts, diagnostics);
  if (!search.Run()) {
    throw NotFound("solve_hbne: support enumeration exhausted without an "
                   "equilibrium after " +
                   std::to_string(diagnostics.supports_examined) +
                   " support combinations; an HBNE always exists under the "
                   "payoff assumptions, so this is a solver defect");
  }
  diagnostics.wall_seconds = Seconds(start);
  return make_result(game, search.x(), search.y(), diagnostics);
}

}  // namespace mtdhg
