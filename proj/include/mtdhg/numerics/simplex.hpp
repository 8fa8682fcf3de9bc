#pragma once

// Dense two-phase primal simplex.
//
// Pivoting uses Dantzig's rule until 2*(m+n) consecutive degenerate pivots
// have been taken, after which Bland's rule is used for the rest of the
// phase. Equalities receive artificial variables directly. On termination
// the basic solution is recomputed from the original constraint columns with
// an LU solve, which removes the rounding accumulated by the tableau updates.

#include <Eigen/Dense>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mtdhg/errors.hpp"
#include "mtdhg/numerics/linear_program.hpp"

namespace mtdhg::numerics {

namespace detail {

template <typename Scalar>
class SimplexTableau {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Index = Eigen::Index;

  SimplexTableau(const LinearProgram<Scalar>& lp, const NumericsConfig& config)
      : lp_(lp), config_(config) {
    Build();
  }

  LpOutcome<Scalar> Solve() {
    LpOutcome<Scalar> outcome;
    if (num_artificial_ > 0) {
      Vector phase_one_cost = Vector::Zero(num_columns_);
      phase_one_cost.tail(num_artificial_).setConstant(-1);
      SetObjective(phase_one_cost);
      if (!Run(/*allow_artificial=*/true)) {
        throw NumericalFailure("phase one reported unbounded");
      }
      const Scalar infeasibility = -tableau_(rows_, num_columns_);
      if (infeasibility > config_.feasibility_tol * (1 + rhs_scale_)) {
        outcome.status = LpStatus::kInfeasible;
        outcome.iterations = iterations_;
        return outcome;
      }
      DriveOutArtificials();
    }

    Vector cost = Vector::Zero(num_columns_);
    cost.head(num_structural_) = lp_.objective;
    SetObjective(cost);
    if (!Run(/*allow_artificial=*/false)) {
      outcome.status = LpStatus::kUnbounded;
      outcome.iterations = iterations_;
      return outcome;
    }

    outcome.status = LpStatus::kOptimal;
    outcome.solution = ExtractSolution();
    outcome.objective_value = lp_.objective.dot(outcome.solution);
    outcome.iterations = iterations_;
    return outcome;
  }

 private:
  struct Row {
    Vector coefficients;
    Scalar rhs;
    bool is_equality;
    bool is_bound = false;
  };

  void Build() {
    const Index n = lp_.num_variables();
    if (lp_.eq_matrix.cols() != n || lp_.le_matrix.cols() != n ||
        lp_.eq_rhs.size() != lp_.eq_matrix.rows() ||
        lp_.le_rhs.size() != lp_.le_matrix.rows() || lp_.lower.size() != n ||
        lp_.upper.size() != n) {
      throw DimensionMismatch("linear program dimensions are inconsistent");
    }
    if (!lp_.objective.allFinite() || !lp_.eq_matrix.allFinite() ||
        !lp_.eq_rhs.allFinite() || !lp_.le_matrix.allFinite() ||
        !lp_.le_rhs.allFinite() || !lp_.lower.allFinite()) {
      throw DimensionMismatch("linear program has non-finite entries");
    }

    // Shift v = lower + w so that w >= 0.
    std::vector<Row> rows;
    for (Index i = 0; i < lp_.eq_matrix.rows(); ++i) {
      rows.push_back({lp_.eq_matrix.row(i).transpose(),
                      lp_.eq_rhs(i) - lp_.eq_matrix.row(i).dot(lp_.lower), true});
    }
    for (Index i = 0; i < lp_.le_matrix.rows(); ++i) {
      rows.push_back({lp_.le_matrix.row(i).transpose(),
                      lp_.le_rhs(i) - lp_.le_matrix.row(i).dot(lp_.lower), false});
    }
    for (Index j = 0; j < n; ++j) {
      if (std::isfinite(lp_.upper(j))) {
        Vector unit = Vector::Zero(n);
        unit(j) = 1;
        rows.push_back({unit, lp_.upper(j) - lp_.lower(j), false, true});
      }
    }

    rows_ = static_cast<Index>(rows.size());
    num_structural_ = n;
    num_slack_ = 0;
    num_artificial_ = 0;
    for (const Row& row : rows) {
      if (!row.is_equality) ++num_slack_;
      if (row.is_equality || row.rhs < 0) ++num_artificial_;
    }
    num_columns_ = num_structural_ + num_slack_ + num_artificial_;

    standard_ = Matrix::Zero(rows_, num_columns_);
    rhs_ = Vector::Zero(rows_);
    basis_.assign(static_cast<std::size_t>(rows_), 0);
    Index slack = num_structural_;
    Index artificial = num_structural_ + num_slack_;
    rhs_scale_ = 0;
    for (Index i = 0; i < rows_; ++i) {
      const Row& row = rows[static_cast<std::size_t>(i)];
      const Scalar sign = row.rhs < 0 ? Scalar(-1) : Scalar(1);
      standard_.row(i).head(n) = sign * row.coefficients.transpose();
      rhs_(i) = sign * row.rhs;
      // Bound rows stay out of the scale: a loose cap such as 1e6 would
      // otherwise accept a visibly infeasible phase one.
      if (!row.is_bound) rhs_scale_ = std::max(rhs_scale_, std::abs(rhs_(i)));
      if (!row.is_equality) {
        standard_(i, slack) = sign;
        if (sign > 0) basis_[static_cast<std::size_t>(i)] = slack;
        ++slack;
      }
      if (row.is_equality || sign < 0) {
        standard_(i, artificial) = 1;
        basis_[static_cast<std::size_t>(i)] = artificial;
        ++artificial;
      }
    }

    tableau_ = Matrix::Zero(rows_ + 1, num_columns_ + 1);
    tableau_.topLeftCorner(rows_, num_columns_) = standard_;
    tableau_.topRightCorner(rows_, 1) = rhs_;
    forbidden_.assign(static_cast<std::size_t>(num_columns_), false);
  }

  bool IsArtificial(Index column) const {
    return column >= num_structural_ + num_slack_;
  }

  // Objective row holds reduced costs z_j = c_B^T T_j - c_j and the current
  // objective value in the last column.
  void SetObjective(const Vector& cost) {
    cost_ = cost;
    Vector basic_cost(rows_);
    for (Index i = 0; i < rows_; ++i) {
      basic_cost(i) = cost(basis_[static_cast<std::size_t>(i)]);
    }
    tableau_.row(rows_) = basic_cost.transpose() * tableau_.topRows(rows_);
    tableau_.row(rows_).head(num_columns_) -= cost.transpose();
  }

  // Returns false when the objective is unbounded.
  bool Run(bool allow_artificial) {
    const Index degenerate_limit = 2 * (rows_ + num_structural_);
    Index degenerate_run = 0;
    bool bland = false;
    std::vector<bool> in_basis(static_cast<std::size_t>(num_columns_), false);
    for (Index b : basis_) in_basis[static_cast<std::size_t>(b)] = true;

    while (true) {
      Index entering = -1;
      Scalar best = -config_.pivot_tol;
      for (Index j = 0; j < num_columns_; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (in_basis[uj] || forbidden_[uj]) continue;
        if (!allow_artificial && IsArtificial(j)) continue;
        const Scalar z = tableau_(rows_, j);
        if (bland) {
          if (z < -config_.pivot_tol) {
            entering = j;
            break;
          }
        } else if (z < best) {
          best = z;
          entering = j;
        }
      }
      if (entering < 0) return true;

      Index leaving = -1;
      Scalar best_ratio = 0;
      for (Index i = 0; i < rows_; ++i) {
        const Scalar a = tableau_(i, entering);
        if (a <= config_.pivot_tol) continue;
        const Scalar ratio = std::max(tableau_(i, num_columns_), Scalar(0)) / a;
        if (leaving < 0) {
          leaving = i;
          best_ratio = ratio;
          continue;
        }
        const Scalar slack = Scalar(1e-12) * (1 + std::abs(best_ratio));
        if (ratio < best_ratio - slack) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack &&
                   basis_[static_cast<std::size_t>(i)] <
                       basis_[static_cast<std::size_t>(leaving)]) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leaving < 0) return false;

      if (best_ratio <= Scalar(1e-12)) {
        if (++degenerate_run > degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }

      in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leaving)])] = false;
      in_basis[static_cast<std::size_t>(entering)] = true;
      Pivot(leaving, entering);
      if (++iterations_ > config_.max_iterations) {
        throw NumericalFailure("simplex iteration limit exceeded");
      }
    }
  }

  void Pivot(Index row, Index column) {
    const Scalar pivot = tableau_(row, column);
    tableau_.row(row) /= pivot;
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pivot_row = tableau_.row(row);
    for (Index i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const Scalar factor = tableau_(i, column);
      if (factor != 0) tableau_.row(i) -= factor * pivot_row;
    }
    basis_[static_cast<std::size_t>(row)] = column;
  }

  // Removes zero-level artificials from the basis after phase one. Rows in
  // which no original column can enter are redundant; their artificial stays
  // basic at zero and is barred from re-entering.
  void DriveOutArtificials() {
    for (Index i = 0; i < rows_; ++i) {
      if (!IsArtificial(basis_[static_cast<std::size_t>(i)])) continue;
      Index best = -1;
      Scalar best_abs = config_.pivot_tol;
      for (Index j = 0; j < num_structural_ + num_slack_; ++j) {
        if (std::find(basis_.begin(), basis_.end(), j) != basis_.end()) continue;
        const Scalar a = std::abs(tableau_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) Pivot(i, best);
    }
    for (Index j = num_structural_ + num_slack_; j < num_columns_; ++j) {
      forbidden_[static_cast<std::size_t>(j)] = true;
    }
  }

  Vector ShiftedToOriginal(const Vector& basic_values) const {
    Vector w = Vector::Zero(num_structural_);
    for (Index i = 0; i < rows_; ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      if (b < num_structural_) w(b) = basic_values(i);
    }
    return lp_.lower + w;
  }

  Vector Snap(Vector v) const {
    for (Index j = 0; j < v.size(); ++j) {
      if (v(j) < lp_.lower(j)) v(j) = lp_.lower(j);
      if (v(j) > lp_.upper(j)) v(j) = lp_.upper(j);
    }
    return v;
  }

  Vector ExtractSolution() const {
    const Vector from_tableau =
        Snap(ShiftedToOriginal(tableau_.topRightCorner(rows_, 1)));
    if (rows_ == 0) return from_tableau;

    Matrix basis_matrix(rows_, rows_);
    for (Index i = 0; i < rows_; ++i) {
      basis_matrix.col(i) = standard_.col(basis_[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Matrix> lu(basis_matrix);
    if (!lu.isInvertible()) return from_tableau;
    const Vector refined = Snap(ShiftedToOriginal(lu.solve(rhs_)));
    if (!refined.allFinite()) return from_tableau;
    return max_residual(lp_, refined) <= max_residual(lp_, from_tableau)
               ? refined
               : from_tableau;
  }

  const LinearProgram<Scalar>& lp_;
  NumericsConfig config_;
  Index rows_ = 0;
  Index num_structural_ = 0;
  Index num_slack_ = 0;
  Index num_artificial_ = 0;
  Index num_columns_ = 0;
  Matrix standard_;
  Vector rhs_;
  Scalar rhs_scale_ = 0;
  Matrix tableau_;
  Vector cost_;
  std::vector<Index> basis_;
  std::vector<bool> forbidden_;
  long iterations_ = 0;
};

}  // namespace detail

// Solves `lp`. Optimal solutions are checked against the original
// constraints; a residual above the feasibility tolerance is reported as
// NumericalFailure rather than returned.
template <typename Scalar>
LpOutcome<Scalar> solve_lp(const LinearProgram<Scalar>& lp,
                           const NumericsConfig& config = {}) {
  detail::SimplexTableau<Scalar> tableau(lp, config);
  LpOutcome<Scalar> outcome = tableau.Solve();
  if (outcome.optimal()) {
    const Scalar residual = max_residual(lp, outcome.solution);
    if (!(residual <= config.feasibility_tol)) {
      throw NumericalFailure("LP solution residual " + std::to_string(residual) +
                             " exceeds feasibility tolerance");
    }
  }
  return outcome;
}

// Returns any point satisfying the constraints of `lp` (its objective is
// ignored), or nullopt when the constraints are infeasible.
template <typename Scalar>
std::optional<typename LinearProgram<Scalar>::Vector> solve_feasibility(
    const LinearProgram<Scalar>& lp, const NumericsConfig& config = {}) {
  LinearProgram<Scalar> constraints = lp;
  constraints.objective.setZero();
  LpOutcome<Scalar> outcome = solve_lp(constraints, config);
  if (!outcome.optimal()) return std::nullopt;
  return outcome.solution;
}

}  // namespace mtdhg::numerics
