#pragma once

#include <span>

#include <Eigen/Dense>

namespace kerr {

struct TridiagonalEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values[i]
};

/// Eigendecomposition of a real symmetric tridiagonal matrix by implicit QL
/// iterations with Wilkinson shifts. `off` holds the n-1 sub-diagonal entries.
/// Deflation happens once an off-diagonal entry drops below machine precision
/// relative to its neighbouring diagonal entries, which is tighter than
/// 1e-13 of the matrix norm.
///
/// Throws kerr::Error if an eigenvalue fails to converge in 64 sweeps.
TridiagonalEigen solve_tridiagonal(std::span<const double> diag,
                                   std::span<const double> off);

}  // namespace kerr
