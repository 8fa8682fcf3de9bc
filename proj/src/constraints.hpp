#pragma once

// Row builders shared by the equilibrium, stability and robustness LPs.
//
// Attack values are affine in x:  a_k(θ, x) = R_d U_a^u(θ,k) - ΔU_a(θ,k) x^k.
// Defender coefficients are linear in y: d_k = ΔU_d(k) sum_θ P(θ) y^k(θ).
// Columns for x start at `x_offset`; y(θ)^k lives at y_offset + θ*K + k.

#include <vector>

#include "mtdhg/model.hpp"
#include "mtdhg/numerics/linear_program.hpp"

namespace mtdhg::detail {

using Lp = numerics::LinearProgram<double>;

inline void add_defender_budget(Lp& lp, const GameInstance& game, Index x_offset) {
  Vector row = Vector::Zero(lp.num_variables());
  row.segment(x_offset, game.num_targets()).setOnes();
  lp.add_equality(row, game.defender_budget());
}

inline void add_attacker_budgets(Lp& lp, const GameInstance& game, Index y_offset) {
  const Index K = game.num_targets();
  for (Index j = 0; j < game.num_types(); ++j) {
    Vector row = Vector::Zero(lp.num_variables());
    row.segment(y_offset + j * K, K).setOnes();
    lp.add_equality(row, game.attacker_budget());
  }
}

// a_i(θ,x) - a_j(θ,x) == 0 (equality) or <= 0.
inline void add_attack_comparison(Lp& lp, const GameInstance& game, Index type,
                                  Index i, Index j, Index x_offset, bool equality) {
  if (i == j) return;
  const auto& gain = game.attacker_gain();
  const auto& uncovered = game.attacker_uncovered_payoff();
  Vector row = Vector::Zero(lp.num_variables());
  row(x_offset + i) -= gain(type, i);
  row(x_offset + j) += gain(type, j);
  const double rhs =
      game.defender_budget() * (uncovered(type, j) - uncovered(type, i));
  if (equality) {
    lp.add_equality(row, rhs);
  } else {
    lp.add_less_equal(row, rhs);
  }
}

// Attack values of `type` equal on `ties` and weakly above every other target.
inline void add_attack_tie_set(Lp& lp, const GameInstance& game, Index type,
                               const TargetSet& ties, Index x_offset) {
  const Index lead = ties.front();
  std::vector<bool> in_set(static_cast<std::size_t>(game.num_targets()), false);
  for (Index k : ties) in_set[static_cast<std::size_t>(k)] = true;
  for (Index k = 0; k < game.num_targets(); ++k) {
    if (k == lead) continue;
    add_attack_comparison(lp, game, type, k, lead, x_offset,
                          in_set[static_cast<std::size_t>(k)]);
  }
}

// d_i - d_j == 0 (equality) or <= 0, with weights `probabilities`.
inline void add_coefficient_comparison(Lp& lp, const GameInstance& game,
                                       const Vector& probabilities, Index i,
                                       Index j, Index y_offset, bool equality) {
  if (i == j) return;
  const Index K = game.num_targets();
  const auto& gain = game.defender_gain();
  Vector row = Vector::Zero(lp.num_variables());
  for (Index t = 0; t < game.num_types(); ++t) {
    row(y_offset + t * K + i) += gain(i) * probabilities(t);
    row(y_offset + t * K + j) -= gain(j) * probabilities(t);
  }
  if (equality) {
    lp.add_equality(row, 0.0);
  } else {
    lp.add_less_equal(row, 0.0);
  }
}

// Defender coefficients equal on `support` and weakly above every other target.
inline void add_coefficient_tie_set(Lp& lp, const GameInstance& game,
                                    const Vector& probabilities,
                                    const TargetSet& support, Index y_offset) {
  const Index lead = support.front();
  std::vector<bool> in_set(static_cast<std::size_t>(game.num_targets()), false);
  for (Index k : support) in_set[static_cast<std::size_t>(k)] = true;
  for (Index k = 0; k < game.num_targets(); ++k) {
    if (k == lead) continue;
    add_coefficient_comparison(lp, game, probabilities, k, lead, y_offset,
                               in_set[static_cast<std::size_t>(k)]);
  }
}

// Removes the columns with keep[j] == false, i.e. variables pinned at zero.
// Their lower bound must be zero.
inline Lp keep_columns(const Lp& lp, const std::vector<bool>& keep) {
  std::vector<Index> columns;
  for (Index j = 0; j < lp.num_variables(); ++j) {
    if (keep[static_cast<std::size_t>(j)]) columns.push_back(j);
  }
  Lp out(static_cast<Index>(columns.size()));
  for (Index c = 0; c < out.num_variables(); ++c) {
    const Index j = columns[static_cast<std::size_t>(c)];
    out.objective(c) = lp.objective(j);
    out.lower(c) = lp.lower(j);
    out.upper(c) = lp.upper(j);
  }
  out.eq_matrix = lp.eq_matrix(Eigen::all, columns);
  out.eq_rhs = lp.eq_rhs;
  out.le_matrix = lp.le_matrix(Eigen::all, columns);
  out.le_rhs = lp.le_rhs;
  return out;
}

inline Vector expand_columns(const Vector& reduced, const std::vector<bool>& keep) {
  Vector full = Vector::Zero(static_cast<Index>(keep.size()));
  Index c = 0;
  for (std::size_t j = 0; j < keep.size(); ++j) {
    if (keep[j]) full(static_cast<Index>(j)) = reduced(c++);
  }
  return full;
}

inline Matrix unstack(const Vector& stacked, Index rows, Index cols, Index offset = 0) {
  Matrix out(rows, cols);
  for (Index j = 0; j < rows; ++j) {
    for (Index k = 0; k < cols; ++k) out(j, k) = stacked(offset + j * cols + k);
  }
  return out;
}

}  // namespace mtdhg::detail
