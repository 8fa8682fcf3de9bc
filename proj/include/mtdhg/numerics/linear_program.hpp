#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

#include "mtdhg/errors.hpp"

namespace mtdhg::numerics {

// Tolerances shared by every LP solve. One value is threaded from the CLI
// down to each solver call.
struct NumericsConfig {
  double feasibility_tol = 1e-7;
  double pivot_tol = 1e-9;
  long max_iterations = 200000;
};

// maximize objective . v
// subject to  eq_matrix v == eq_rhs
//             le_matrix v <= le_rhs
//             lower <= v <= upper
//
// Lower bounds must be finite (default 0). Upper bounds default to +inf.
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Index = Eigen::Index;
  using SparseRow = std::vector<std::pair<Index, Scalar>>;

  Vector objective;
  Matrix eq_matrix;
  Vector eq_rhs;
  Matrix le_matrix;
  Vector le_rhs;
  Vector lower;
  Vector upper;

  explicit LinearProgram(Index num_variables)
      : objective(Vector::Zero(num_variables)),
        eq_matrix(0, num_variables),
        eq_rhs(0),
        le_matrix(0, num_variables),
        le_rhs(0),
        lower(Vector::Zero(num_variables)),
        upper(Vector::Constant(num_variables,
                               std::numeric_limits<Scalar>::infinity())) {}

  Index num_variables() const { return objective.size(); }
  Index num_equalities() const { return eq_matrix.rows(); }
  Index num_inequalities() const { return le_matrix.rows(); }

  template <typename Derived>
  void add_equality(const Eigen::MatrixBase<Derived>& row, Scalar rhs) {
    Append(eq_matrix, eq_rhs, row, rhs);
  }
  template <typename Derived>
  void add_less_equal(const Eigen::MatrixBase<Derived>& row, Scalar rhs) {
    Append(le_matrix, le_rhs, row, rhs);
  }
  template <typename Derived>
  void add_greater_equal(const Eigen::MatrixBase<Derived>& row, Scalar rhs) {
    Append(le_matrix, le_rhs, -row, -rhs);
  }

  void add_equality(const SparseRow& terms, Scalar rhs) {
    add_equality(Densify(terms), rhs);
  }
  void add_less_equal(const SparseRow& terms, Scalar rhs) {
    add_less_equal(Densify(terms), rhs);
  }
  void add_greater_equal(const SparseRow& terms, Scalar rhs) {
    add_greater_equal(Densify(terms), rhs);
  }

 private:
  Vector Densify(const SparseRow& terms) const {
    Vector row = Vector::Zero(num_variables());
    for (const auto& [index, value] : terms) {
      if (index < 0 || index >= num_variables()) {
        throw DimensionMismatch("sparse row index out of range");
      }
      row(index) += value;
    }
    return row;
  }

  template <typename Derived>
  void Append(Matrix& matrix, Vector& rhs_vector,
              const Eigen::MatrixBase<Derived>& row, Scalar rhs) {
    if (row.size() != num_variables()) {
      throw DimensionMismatch("constraint row has wrong length");
    }
    const Index r = matrix.rows();
    matrix.conservativeResize(r + 1, Eigen::NoChange);
    matrix.row(r) = row.transpose();
    rhs_vector.conservativeResize(r + 1);
    rhs_vector(r) = rhs;
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "Optimal";
    case LpStatus::kInfeasible:
      return "Infeasible";
    case LpStatus::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

template <typename Scalar>
struct LpOutcome {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  LpStatus status = LpStatus::kInfeasible;
  Vector solution;  // populated when Optimal
  Scalar objective_value = 0;
  long iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

// Largest violation of any constraint or bound of `lp` at point `v`.
template <typename Scalar>
Scalar max_residual(const LinearProgram<Scalar>& lp,
                    const typename LinearProgram<Scalar>::Vector& v) {
  Scalar worst = 0;
  if (lp.num_equalities() > 0) {
    worst = std::max(worst, (lp.eq_matrix * v - lp.eq_rhs).cwiseAbs().maxCoeff());
  }
  if (lp.num_inequalities() > 0) {
    worst = std::max(worst, (lp.le_matrix * v - lp.le_rhs).maxCoeff());
  }
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    worst = std::max(worst, lp.lower(j) - v(j));
    if (lp.upper(j) < std::numeric_limits<Scalar>::infinity()) {
      worst = std::max(worst, v(j) - lp.upper(j));
    }
  }
  return worst;
}

}  // namespace mtdhg::numerics
