#include "kerr/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "kerr/error.hpp"

namespace kerr {

TridiagonalEigen solve_tridiagonal(std::span<const double> diag,
                                   std::span<const double> off) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(diag.size());
  if (n == 0) throw InvalidArgument("solve_tridiagonal: empty matrix");
  if (off.size() + 1 != diag.size()) {
    throw InvalidArgument("solve_tridiagonal: off-diagonal must have n-1 entries");
  }

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(off.begin(), off.end(), e.begin());
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 64;

  for (std::ptrdiff_t l = 0; l < n; ++l) {
    int sweeps = 0;
    std::ptrdiff_t m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == kMaxSweeps) {
        throw Error("solve_tridiagonal: no convergence for eigenvalue " +
                    std::to_string(l));
      }
      // Wilkinson shift from the leading 2x2 block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      std::ptrdiff_t i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (std::ptrdiff_t k = 0; k < n; ++k) {
          f = z(k, i + 1);
          z(k, i + 1) = s * z(k, i) + c * f;
          z(k, i) = c * z(k, i) - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::ptrdiff_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return d[a] < d[b]; });

  TridiagonalEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    Eigen::VectorXd v = z.col(order[j]);
    // Fix the sign so the largest-magnitude component is positive; makes the
    // decomposition a deterministic function of the input.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    out.vectors.col(j) = v;
  }
  return out;
}

}  // namespace kerr
