#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace mtdhg::numerics {

// Numerical rank by Gaussian elimination with partial pivoting. A pivot
// counts when its magnitude exceeds tol * (1 + max |M_ij|).
template <typename Derived>
Eigen::Index matrix_rank(const Eigen::MatrixBase<Derived>& matrix,
                         typename Derived::RealScalar tol = 1e-9) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> work = matrix;
  const Eigen::Index rows = work.rows();
  const Eigen::Index cols = work.cols();
  if (rows == 0 || cols == 0) return 0;
  const auto threshold = tol * (1 + work.cwiseAbs().maxCoeff());

  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index pivot_row;
    const auto pivot_abs =
        work.col(c).tail(rows - rank).cwiseAbs().maxCoeff(&pivot_row);
    if (!(pivot_abs > threshold)) continue;
    pivot_row += rank;
    work.row(rank).swap(work.row(pivot_row));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      const Scalar factor = work(r, c) / work(rank, c);
      if (factor != Scalar(0)) work.row(r) -= factor * work.row(rank);
    }
    ++rank;
  }
  return rank;
}

}  // namespace mtdhg::numerics
