#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "kerr/error.hpp"
#include "kerr/evolve.hpp"

namespace {

using kerr::cplx;
using kerr::EvolveOptions;
using kerr::ModelParams;

// Oracle: the full two-mode Fock space up to `cut` quanta per mode, dense
// Hamiltonian built from ladder operators, diagonalised by Eigen.
std::vector<double> dense_mean_n(const kerr::QuantumState& psi0, const ModelParams& p,
                                 double dt, std::size_t steps) {
  const std::size_t cut = psi0.nmax();
  const std::size_t d = (cut + 1) * (cut + 1);
  auto idx = [cut](std::size_t i, std::size_t j) { return static_cast<Eigen::Index>(i * (cut + 1) + j); };
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i <= cut; ++i) {
    for (std::size_t j = 0; j <= cut; ++j) {
      const double fi = static_cast<double>(i), fj = static_cast<double>(j);
      h(idx(i, j), idx(i, j)) = p.omega * fi + p.omega0 * fj + p.gamma * fj * (fj - 1.0);
      // a^dag b |i, j> = sqrt((i+1) j) |i+1, j-1>
      if (j > 0 && i < cut) {
        const double v = p.g * std::sqrt((fi + 1.0) * fj);
        h(idx(i + 1, j - 1), idx(i, j)) += v;
        h(idx(i, j), idx(i + 1, j - 1)) += v;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t n = 0; n <= cut; ++n) v0(idx(n, 0)) = psi0.at(n, n);
  const Eigen::VectorXcd c0 = es.eigenvectors().transpose().cast<cplx>() * v0;
  std::vector<double> out;
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    Eigen::VectorXcd ct = c0;
    for (Eigen::Index k = 0; k < ct.size(); ++k) ct(k) *= std::polar(1.0, -es.eigenvalues()(k) * t);
    const Eigen::VectorXcd psi = es.eigenvectors().cast<cplx>() * ct;
    double acc = 0.0;
    for (std::size_t i = 0; i <= cut; ++i)
      for (std::size_t j = 0; j <= cut; ++j) acc += static_cast<double>(i) * std::norm(psi(idx(i, j)));
    out.push_back(acc);
  }
  return out;
}

TEST(Evolve, MatchesDenseFockSpaceOracle) {
  const ModelParams p{1.0, 1.3, 5.0, 1.0};
  const auto psi0 = kerr::pacs_state(std::sqrt(0.7), 1, 1e-13);
  const double dt = 0.1;
  const std::size_t steps = 300;
  const auto ref = dense_mean_n(psi0, p, dt, steps);
  const auto obs = kerr::evolve_series(psi0, p, EvolveOptions{dt, steps});
  ASSERT_EQ(obs.mean_N.size(), steps);
  for (std::size_t s = 0; s < steps; ++s) EXPECT_NEAR(obs.mean_N.values[s], ref[s], 1e-10) << s;
}

TEST(Evolve, LinearCouplingGivesCosineSquared) {
  const double g = 0.9, nu = 1.0;
  const auto psi0 = kerr::coherent_state(std::sqrt(nu));
  const auto obs = kerr::evolve_series(psi0, {1.0, 1.0, 0.0, g}, EvolveOptions{0.01, 10'000});
  double err = 0.0;
  for (std::size_t s = 0; s < obs.mean_N.size(); ++s) {
    const double c = std::cos(g * static_cast<double>(s) * 0.01);
    err = std::max(err, std::abs(obs.mean_N.values[s] - nu * c * c));
  }
  EXPECT_LT(err, 1e-9);
}

TEST(Evolve, NoCouplingKeepsPhotonNumber) {
  const auto psi0 = kerr::pacs_state(1.2, 2);
  const auto obs = kerr::evolve_series(psi0, {1.0, 1.0, 3.0, 0.0}, EvolveOptions{0.1, 2000});
  const double n0 = obs.mean_N.values.front();
  for (double v : obs.mean_N.values) EXPECT_NEAR(v, n0, 1e-12);
  EXPECT_LT(kerr::conservation_residual(obs), 1e-12);
}

TEST(Evolve, ConservationResidualSmall) {
  const auto psi0 = kerr::pacs_state(std::sqrt(10.0), 1);
  const auto obs = kerr::evolve_series(psi0, {1.0, 1.0, 5.0, 1.0}, EvolveOptions{0.1, 5000});
  EXPECT_LT(kerr::conservation_residual(obs), 1e-8);
}

TEST(Evolve, UniformFrequencyShiftIsAGauge) {
  const auto psi0 = kerr::pacs_state(std::sqrt(3.0), 2);
  const auto a = kerr::evolve_series(psi0, {1.0, 1.0, 5.0, 1.0}, EvolveOptions{0.1, 3000});
  const auto b = kerr::evolve_series(psi0, {1.75, 1.75, 5.0, 1.0}, EvolveOptions{0.1, 3000});
  for (std::size_t s = 0; s < a.mean_N.size(); ++s)
    EXPECT_NEAR(a.mean_N.values[s], b.mean_N.values[s], 1e-10);
}

TEST(Evolve, BitIdenticalAcrossThreadCounts) {
  const auto psi0 = kerr::pacs_state(std::sqrt(10.0), 5);
  EvolveOptions o{0.1, 2000};
  o.threads = 1;
  const auto a = kerr::evolve_series(psi0, {1.0, 1.0, 5.0, 1.0}, o);
  o.threads = 3;
  const auto b = kerr::evolve_series(psi0, {1.0, 1.0, 5.0, 1.0}, o);
  EXPECT_EQ(a.mean_N.values, b.mean_N.values);
  EXPECT_EQ(a.mean_b.values, b.mean_b.values);
}

TEST(Evolve, SeriesShareDtAndLength) {
  EvolveOptions o{0.05, 1000};
  o.want_entropy = true;
  o.entropy_stride = 10;
  const auto obs = kerr::evolve_series(kerr::coherent_state(1.0), {1.0, 1.0, 1.0, 1.0}, o);
  EXPECT_EQ(obs.mean_N.size(), obs.mean_b.size());
  EXPECT_EQ(obs.mean_N.dt, obs.mean_b.dt);
  ASSERT_TRUE(obs.entropy.has_value());
  EXPECT_EQ(obs.entropy->size(), 100u);
  EXPECT_DOUBLE_EQ(obs.entropy->dt, 0.5);
  EXPECT_NEAR(obs.entropy->values.front(), 0.0, 1e-10);
}

TEST(Entropy, ProductStateIsZero) {
  EXPECT_NEAR(kerr::entanglement_entropy(kerr::pacs_state(1.3, 2)), 0.0, 1e-10);
}

TEST(Entropy, BellPairIsLnTwo) {
  auto s = kerr::QuantumState::zeros(1);
  s.at(1, 0) = 1.0 / std::sqrt(2.0);  // |0>_a |1>_b
  s.at(1, 1) = 1.0 / std::sqrt(2.0);  // |1>_a |0>_b
  EXPECT_NEAR(kerr::entanglement_entropy(s), std::log(2.0), 1e-14);
}

TEST(Entropy, BoundedByDimension) {
  const auto psi0 = kerr::pacs_state(std::sqrt(2.0), 1);
  const kerr::SpectralPropagator prop(psi0, {1.0, 1.0, 5.0, 1.0});
  for (double t : {0.5, 3.0, 40.0}) {
    const double s = kerr::entanglement_entropy(prop.state_at(t));
    EXPECT_GE(s, -1e-12);
    EXPECT_LE(s, std::log(static_cast<double>(psi0.nmax() + 1)) + 1e-12);
  }
}

TEST(Entropy, RejectsUnnormalisedState) {
  auto s = kerr::QuantumState::zeros(1);
  s.at(0, 0) = 0.5;
  EXPECT_THROW(kerr::entanglement_entropy(s), kerr::InvalidArgument);
}

}  // namespace
