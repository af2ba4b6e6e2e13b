#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "kerr/error.hpp"
#include "kerr/model.hpp"
#include "kerr/tridiagonal.hpp"

namespace {

using kerr::ModelParams;

TEST(SectorBlock, VacuumIsZero) {
  const auto b = kerr::build_sector_block(0, {1.0, 1.3, 2.0, 0.7});
  ASSERT_EQ(b.dim(), 1u);
  EXPECT_EQ(b.dense()(0, 0), 0.0);
  EXPECT_EQ(b.eigenvalues()(0), 0.0);
}

TEST(SectorBlock, TwoByTwoHandDiagonalisation) {
  for (double gamma : {0.0, 3.0, 17.0}) {
    const double g = 0.37;
    const auto b = kerr::build_sector_block(1, {1.0, 1.0, gamma, g});
    const Eigen::MatrixXd h = b.dense();
    EXPECT_DOUBLE_EQ(h(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(h(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(h(0, 1), g);
    EXPECT_DOUBLE_EQ(h(1, 0), g);
    EXPECT_NEAR(b.eigenvalues()(0), 1.0 - g, 1e-14);
    EXPECT_NEAR(b.eigenvalues()(1), 1.0 + g, 1e-14);
  }
}

TEST(SectorBlock, EntriesForSectorTwo) {
  const auto b = kerr::build_sector_block(2, {1.0, 1.0, 5.0, 1.0});
  EXPECT_DOUBLE_EQ(b.diagonal()[0], 12.0);
  EXPECT_DOUBLE_EQ(b.diagonal()[1], 2.0);
  EXPECT_DOUBLE_EQ(b.diagonal()[2], 2.0);
  EXPECT_DOUBLE_EQ(b.off_diagonal()[0], std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(b.off_diagonal()[1], std::sqrt(2.0));
}

TEST(SectorBlock, DimensionIsNPlusOne) {
  EXPECT_EQ(kerr::sector_dimension(0), 1u);
  EXPECT_EQ(kerr::sector_dimension(5), 6u);
  EXPECT_EQ(kerr::sector_dimension(100), 101u);
}

TEST(SectorBlock, SymmetricTridiagonalAndReconstructs) {
  const ModelParams p{1.0, 1.1, 5.0, 1.0};
  for (std::size_t n : {3u, 17u, 60u, 200u}) {
    const auto b = kerr::build_sector_block(n, p);
    const Eigen::MatrixXd h = b.dense();
    EXPECT_EQ((h - h.transpose()).norm(), 0.0);
    for (Eigen::Index i = 0; i < h.rows(); ++i)
      for (Eigen::Index j = 0; j < h.cols(); ++j)
        if (std::abs(i - j) > 1) EXPECT_EQ(h(i, j), 0.0);
    EXPECT_LT(b.reconstruction_error(), 1e-12) << "n=" << n;
  }
}

TEST(SectorBlock, RejectsHugeSector) {
  EXPECT_THROW(kerr::build_sector_block(kerr::kMaxSector + 1, {}), kerr::InvalidArgument);
}

TEST(ModelParams, Validation) {
  EXPECT_THROW((ModelParams{1.0, 1.0, -1.0, 1.0}.validate()), kerr::InvalidArgument);
  EXPECT_THROW((ModelParams{1.0, 1.0, 1.0, -1.0}.validate()), kerr::InvalidArgument);
  EXPECT_THROW((ModelParams{NAN, 1.0, 1.0, 1.0}.validate()), kerr::InvalidArgument);
  EXPECT_NO_THROW((ModelParams{1.0, 1.0, 0.0, 0.0}.validate()));
}

// Oracle: Eigen's dense self-adjoint solver.
TEST(Tridiagonal, MatchesDenseSolverOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial) * 7;
    std::vector<double> d(n), e(n - 1);
    for (auto& v : d) v = u(rng);
    for (auto& v : e) v = u(rng);
    if (trial % 4 == 0) e[n / 2 - 1] = 0.0;  // split matrix
    const auto te = kerr::solve_tridiagonal(d, e);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) m(i, i) = d[i];
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = e[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m);
    const double scale = m.norm();
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(te.values(i), ref.eigenvalues()(i), 1e-12 * scale);
    }
    const Eigen::MatrixXd rec = te.vectors * te.values.asDiagonal() * te.vectors.transpose();
    EXPECT_LT((rec - m).norm() / scale, 1e-13);
    const Eigen::MatrixXd gram = te.vectors.transpose() * te.vectors;
    EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm(), 1e-12);
  }
}

TEST(Tridiagonal, DegenerateSpectrum) {
  std::vector<double> d(8, 2.0), e(7, 0.0);
  const auto te = kerr::solve_tridiagonal(d, e);
  for (Eigen::Index i = 0; i < 8; ++i) EXPECT_EQ(te.values(i), 2.0);
}

TEST(SectorBlocks, ThreadCountDoesNotChangeResult) {
  const ModelParams p{1.0, 1.0, 5.0, 1.0};
  const auto a = kerr::build_sector_blocks(40, p, 1);
  const auto b = kerr::build_sector_blocks(40, p, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].eigenvalues(), b[n].eigenvalues());
    EXPECT_EQ(a[n].eigenvectors(), b[n].eigenvectors());
  }
}

}  // namespace
