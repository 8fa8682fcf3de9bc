#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls the library's solvers; only instance accessors and
// Eigen's dense decompositions.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "mtdhg/model.hpp"

namespace oracle {

using mtdhg::GameInstance;
using mtdhg::Index;
using mtdhg::Matrix;
using mtdhg::Vector;

// ---------------------------------------------------------------- LPs

// maximize c.v  s.t.  A v <= b,  E v == f,  0 <= v <= u  (u finite)
struct SmallLp {
  Vector c;
  Matrix A;
  Vector b;
  Matrix E;
  Vector f;
  Vector u;
};

struct VertexOptimum {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();
  Vector point;
};

// Every vertex of the (bounded) polytope is the solution of n active
// constraints; try all of them.
inline VertexOptimum enumerate_vertices(const SmallLp& lp, double tol = 1e-9) {
  const Index n = lp.c.size();
  // Candidate rows: inequalities, lower bounds, upper bounds.
  Matrix rows(lp.A.rows() + 2 * n, n);
  Vector rhs(lp.A.rows() + 2 * n);
  rows.topRows(lp.A.rows()) = lp.A;
  rhs.head(lp.A.rows()) = lp.b;
  for (Index j = 0; j < n; ++j) {
    rows.row(lp.A.rows() + j).setZero();
    rows(lp.A.rows() + j, j) = -1;
    rhs(lp.A.rows() + j) = 0;
    rows.row(lp.A.rows() + n + j).setZero();
    rows(lp.A.rows() + n + j, j) = 1;
    rhs(lp.A.rows() + n + j) = lp.u(j);
  }
  const Index m = rows.rows();
  const Index need = n - lp.E.rows();
  VertexOptimum best;
  if (need < 0) return best;

  std::vector<Index> pick(static_cast<std::size_t>(need));
  auto feasible = [&](const Vector& v) {
    if (lp.E.rows() > 0 && (lp.E * v - lp.f).cwiseAbs().maxCoeff() > tol) return false;
    return (rows * v - rhs).maxCoeff() <= tol;
  };
  auto try_subset = [&]() {
    Matrix M(n, n);
    Vector r(n);
    M.topRows(lp.E.rows()) = lp.E;
    r.head(lp.E.rows()) = lp.f;
    for (Index i = 0; i < need; ++i) {
      M.row(lp.E.rows() + i) = rows.row(pick[static_cast<std::size_t>(i)]);
      r(lp.E.rows() + i) = rhs(pick[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.rank() < n) return;
    const Vector v = lu.solve(r);
    if (!feasible(v)) return;
    const double value = lp.c.dot(v);
    if (!best.feasible || value > best.value) {
      best.feasible = true;
      best.value = value;
      best.point = v;
    }
  };
  // Lexicographic combinations of `need` rows out of m.
  if (need == 0) {
    try_subset();
    return best;
  }
  for (Index i = 0; i < need; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    try_subset();
    Index i = need - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - need + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < need; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

inline SmallLp random_lp(std::mt19937_64& rng, Index n, Index m_le, Index m_eq) {
  std::uniform_real_distribution<double> coef(-5, 5);
  std::uniform_real_distribution<double> pos(0.5, 5);
  SmallLp lp;
  lp.c = Vector::NullaryExpr(n, [&] { return coef(rng); });
  lp.A = Matrix::NullaryExpr(m_le, n, [&] { return coef(rng); });
  lp.b = Vector::NullaryExpr(m_le, [&] { return coef(rng) + 2; });
  lp.E = Matrix::NullaryExpr(m_eq, n, [&] { return pos(rng); });
  lp.f = Vector::NullaryExpr(m_eq, [&] { return pos(rng) * 2; });
  lp.u = Vector::NullaryExpr(n, [&] { return pos(rng); });
  return lp;
}

// ---------------------------------------------------------------- rank

struct RankedMatrix {
  Matrix m;
  Index rank;
};

// Product of full-rank factors: rows x r times r x cols has rank r with
// probability one; small integer entries keep the products well scaled.
inline RankedMatrix matrix_of_rank(std::mt19937_64& rng, Index rows, Index cols, Index r) {
  std::uniform_int_distribution<int> entry(-4, 4);
  if (r == 0) return {Matrix::Zero(rows, cols), 0};
  while (true) {
    Matrix left = Matrix::NullaryExpr(rows, r, [&] { return double(entry(rng)); });
    Matrix right = Matrix::NullaryExpr(r, cols, [&] { return double(entry(rng)); });
    // Reject factors that are themselves rank deficient (checked by SVD).
    Eigen::JacobiSVD<Matrix> sl(left), sr(right);
    auto full = [](const Eigen::JacobiSVD<Matrix>& s, Index k) {
      return k == 0 || s.singularValues()(k - 1) > 1e-6;
    };
    if (!full(sl, r) || !full(sr, r)) continue;
    return {left * right, r};
  }
}

// ---------------------------------------------------------------- BSSE grid

inline double attack_value(const GameInstance& g, const Vector& x, Index type, Index k) {
  return x(k) * g.attacker_covered_payoff()(type, k) +
         (g.defender_budget() - x(k)) * g.attacker_uncovered_payoff()(type, k);
}

inline double defense_value(const GameInstance& g, const Vector& x, Index k) {
  return x(k) * g.defender_covered_payoff()(k) + (g.defender_budget() - x(k)) * g.defender_uncovered_payoff()(k);
}

// Strong-Stackelberg value of a fixed x: each type attacks its best target,
// ties broken for the defender.
inline double optimistic_value(const GameInstance& g, const Vector& x, double tie = 1e-12) {
  double total = 0;
  for (Index j = 0; j < g.num_types(); ++j) {
    double top = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < g.num_targets(); ++k) top = std::max(top, attack_value(g, x, j, k));
    double best = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < g.num_targets(); ++k) {
      if (attack_value(g, x, j, k) >= top - tie * (1 + std::abs(top))) {
        best = std::max(best, defense_value(g, x, k));
      }
    }
    total += g.type_probabilities()(j) * g.attacker_budget() * best;
  }
  return total;
}

// Grid over the scaled simplex at step R_d / divisions (K <= 3).
inline double bsse_grid_value(const GameInstance& g, int divisions = 200) {
  const Index K = g.num_targets();
  const double R = g.defender_budget();
  double best = -std::numeric_limits<double>::infinity();
  Vector x(K);
  if (K == 1) {
    x << R;
    return optimistic_value(g, x);
  }
  for (int i = 0; i <= divisions; ++i) {
    if (K == 2) {
      x << R * i / divisions, R * (divisions - i) / divisions;
      best = std::max(best, optimistic_value(g, x));
      continue;
    }
    for (int j = 0; i + j <= divisions; ++j) {
      x << R * i / divisions, R * j / divisions, R * (divisions - i - j) / divisions;
      best = std::max(best, optimistic_value(g, x));
    }
  }
  return best;
}

// ---------------------------------------------------------------- SOL

// For a pure policy (each type on one target) SOL reduces to: the
// P-weighted mean of ΔU_a/ΔU_d over the types attacking a target is the same
// for every attacked target.
inline bool sol_nonempty_pure(const GameInstance& g, const std::vector<Index>& target_of) {
  std::vector<double> num(static_cast<std::size_t>(g.num_targets()), 0.0);
  std::vector<double> den(num.size(), 0.0);
  for (Index j = 0; j < g.num_types(); ++j) {
    const Index t = target_of[static_cast<std::size_t>(j)];
    const double p = g.type_probabilities()(j);
    const double ratio = (g.attacker_uncovered_payoff()(j, t) - g.attacker_covered_payoff()(j, t)) /
                         (g.defender_covered_payoff()(t) - g.defender_uncovered_payoff()(t));
    num[static_cast<std::size_t>(t)] += p * ratio;
    den[static_cast<std::size_t>(t)] += p;
  }
  std::optional<double> common;
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (den[k] <= 0) continue;
    const double mean = num[k] / den[k];
    if (!common) {
      common = mean;
    } else if (std::abs(*common - mean) > 1e-9 * (1 + std::abs(mean))) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- robustness

// Two types, two targets, x interior, type 0 strictly preferring target 0
// and type 1 indifferent: robust under P' iff P'(θ_0) <= ΔU_d(1) / (ΔU_d(0)
// + ΔU_d(1)).
inline double two_by_two_threshold(const GameInstance& g) {
  const double d0 = g.defender_covered_payoff()(0) - g.defender_uncovered_payoff()(0);
  const double d1 = g.defender_covered_payoff()(1) - g.defender_uncovered_payoff()(1);
  return d1 / (d0 + d1);
}

}  // namespace oracle
