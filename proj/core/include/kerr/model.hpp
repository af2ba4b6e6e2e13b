#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace kerr {

/// Parameters of the two-mode Kerr Hamiltonian (hbar = 1)
///
///   H = omega a^dag a + omega0 b^dag b + gamma b^dag^2 b^2 + g (a^dag b + b^dag a)
///
/// All entries are frequencies in the same inverse-time unit.
struct ModelParams {
  double omega = 1.0;
  double omega0 = 1.0;
  double gamma = 0.0;
  double g = 0.0;

  /// Throws InvalidArgument unless every field is finite and gamma, g >= 0.
  void validate() const;
};

/// Largest sector index accepted by build_sector_block.
inline constexpr std::size_t kMaxSector = 1'000'000;

/// Dimension of the total-number sector n: n + 1.
constexpr std::size_t sector_dimension(std::size_t n) { return n + 1; }

/// H restricted to N_tot = n, in the basis |k>_field (x) |n-k>_atom,
/// k = 0..n, together with its eigendecomposition. Immutable once built.
class SectorBlock {
 public:
  SectorBlock(std::size_t n, const ModelParams& params);

  std::size_t n() const { return n_; }
  std::size_t dim() const { return sector_dimension(n_); }

  const std::vector<double>& diagonal() const { return diag_; }
  const std::vector<double>& off_diagonal() const { return off_; }
  Eigen::MatrixXd dense() const;

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  /// ||V diag(E) V^T - H||_F / ||H||_F (0 for the zero matrix).
  double reconstruction_error() const;

 private:
  std::size_t n_;
  std::vector<double> diag_;
  std::vector<double> off_;
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
};

/// Throws InvalidArgument for n > kMaxSector.
SectorBlock build_sector_block(std::size_t n, const ModelParams& params);

/// Blocks for sectors 0..nmax. Sectors are built on up to `threads` workers;
/// the result is independent of the thread count.
std::vector<SectorBlock> build_sector_blocks(std::size_t nmax,
                                             const ModelParams& params,
                                             unsigned threads = 1);

}  // namespace kerr
