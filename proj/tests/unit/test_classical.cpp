#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kerr/classical.hpp"
#include "kerr/error.hpp"

namespace {

using kerr::ClassicalParams;
using kerr::PhasePoint;

const ClassicalParams kCoupled{1.0, 1.0, 1.0, 1.0, 0.5, 0.2};
const ClassicalParams kUneven{0.7, 1.9, 1.3, 0.8, 0.35, 0.15};

TEST(ClassicalHamiltonian, SimpleValues) {
  EXPECT_EQ(kerr::h_classical({}, kCoupled), 0.0);
  EXPECT_EQ(kerr::n_tot_classical({}, kCoupled), 0.0);
  const ClassicalParams free{1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(kerr::h_classical({1.0, 0.0, 0.0, 0.0}, free), 0.5);
  const PhasePoint p{0.3, -0.4, 1.1, 0.2};
  EXPECT_DOUBLE_EQ(kerr::h_classical(p, free), kerr::h1_classical(p, free) + kerr::h2_classical(p, free));
}

// Oracle: central differences of h_classical and gradient.
TEST(ClassicalHamiltonian, GradientAndHessianMatchFiniteDifferences) {
  const PhasePoint p{0.4, -0.3, 0.9, 0.25};
  for (const auto& c : {kCoupled, kUneven}) {
    const auto g = kerr::gradient(p, c);
    const auto h = kerr::hessian(p, c);
    const double eps = 1e-5;
    for (int i = 0; i < 4; ++i) {
      auto zp = p.as_array(), zm = p.as_array();
      zp[i] += eps;
      zm[i] -= eps;
      const double fd = (kerr::h_classical(PhasePoint::from_array(zp), c) -
                         kerr::h_classical(PhasePoint::from_array(zm), c)) / (2.0 * eps);
      EXPECT_NEAR(g[i], fd, 1e-8);
      const auto gp = kerr::gradient(PhasePoint::from_array(zp), c);
      const auto gm = kerr::gradient(PhasePoint::from_array(zm), c);
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(h[j * 4 + i], (gp[j] - gm[j]) / (2.0 * eps), 1e-7);
    }
  }
}

TEST(ClassicalHamiltonian, TotalNumberPoissonCommutes) {
  // {N, H} = sum over pairs dN/dq dH/dp - dN/dp dH/dq.
  const PhasePoint p{0.4, -0.3, 0.9, 0.25};
  for (const auto& c : {kCoupled, kUneven}) {
    const auto gh = kerr::gradient(p, c);
    const double dnx = c.m * c.omega * p.x, dnpx = p.px / (c.m * c.omega);
    const double dny = c.M * c.omega0 * p.y, dnpy = p.py / (c.M * c.omega0);
    const double bracket = dnx * gh[1] - dnpx * gh[0] + dny * gh[3] - dnpy * gh[2];
    EXPECT_NEAR(bracket, 0.0, 1e-13);
  }
}

TEST(Integrator, UncoupledEllipsePeriod) {
  const ClassicalParams free{1.0, 1.0, 2.0, 1.0, 0.0, 0.0};
  const double period = 2.0 * std::numbers::pi / free.omega;
  const std::size_t steps = 1000;
  const double dt = period / steps;
  PhasePoint p{1.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < steps; ++i) p = kerr::yoshida6_step(p, free, dt);
  EXPECT_NEAR(p.x, 1.0, 1e-8);
  EXPECT_NEAR(p.px, 0.0, 1e-8);
}

TEST(Integrator, UncoupledActionsAreConstant) {
  const ClassicalParams free{1.0, 2.0, 1.0, 1.5, 0.0, 0.0};
  const auto tr = kerr::integrate({0.5, 0.2, -0.3, 0.7}, free, {0.01, 20000, 1, 1e-8});
  const double n0 = kerr::n_tot_classical(tr.points.front(), free);
  const double h1 = kerr::h1_classical(tr.points.front(), free);
  for (const auto& p : tr.points) {
    EXPECT_NEAR(kerr::n_tot_classical(p, free), n0, 1e-10);
    EXPECT_NEAR(kerr::h1_classical(p, free), h1, 1e-10);
  }
}

TEST(Integrator, ConservesInvariantsAndStaysBounded) {
  const PhasePoint p0{1.0, 0.0, 0.5, 0.3};
  const auto tr = kerr::integrate(p0, kCoupled, {0.01, 200000, 100, 1e-8});
  EXPECT_LT(tr.max_h_drift, 1e-10);
  EXPECT_LT(tr.max_n_drift, 1e-10);
  // Unit masses and frequencies: |z|^2 = 2 N_tot on the invariant surface.
  EXPECT_LE(tr.max_radius, std::sqrt(2.0 * tr.n0) * (1.0 + 1e-9));
  EXPECT_EQ(tr.points.size(), 2001u);  // t = 0 plus every 100th step
}

TEST(Integrator, HalvedStepAgrees) {
  const PhasePoint p0{1.0, 0.0, 0.5, 0.3};
  const auto a = kerr::integrate(p0, kCoupled, {0.02, 5000, 5000, 1e-8});
  const auto b = kerr::integrate(p0, kCoupled, {0.01, 10000, 10000, 1e-8});
  ASSERT_EQ(a.points.size(), 2u);
  ASSERT_EQ(b.points.size(), 2u);
  const auto za = a.points.back().as_array(), zb = b.points.back().as_array();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(za[i], zb[i], 1e-8);
}

TEST(Integrator, DriftGateTrips) {
  EXPECT_THROW(kerr::integrate({2.0, 0.0, 2.0, 0.0}, kCoupled, {0.5, 2000, 1, 1e-14}),
               kerr::Error);
}

TEST(ClassicalLyapunov, UncoupledLinearSystem) {
  const ClassicalParams free{1.0, 1.0, 1.0, 1.3, 0.0, 0.0};
  const auto l = kerr::classical_lyapunov({0.5, 0.1, 0.2, -0.4}, free, {0.01, 100000, 1, 1e-8});
  for (double e : l.exponents) EXPECT_LT(std::abs(e), 1e-3);
  EXPECT_LT(std::abs(l.sum), 1e-6);
}

TEST(ClassicalLyapunov, CoupledKerrTrajectoryIsRegular) {
  const auto l = kerr::classical_lyapunov({1.0, 0.0, 0.5, 0.3}, kCoupled, {0.01, 1000000, 1, 1e-8});
  for (double e : l.exponents) EXPECT_LT(std::abs(e), 5e-3);
  EXPECT_LT(std::abs(l.sum), 1e-6);
  for (int i = 0; i < 3; ++i) EXPECT_GE(l.exponents[i], l.exponents[i + 1]);
}

TEST(Trajectory, H1SeriesExport) {
  const auto tr = kerr::integrate({1.0, 0.0, 0.5, 0.3}, kCoupled, {0.01, 1000, 10, 1e-8});
  const auto s = tr.h1_series(kCoupled);
  EXPECT_EQ(s.size(), tr.points.size());
  EXPECT_DOUBLE_EQ(s.dt, 0.1);
  EXPECT_DOUBLE_EQ(s.values[3], kerr::h1_classical(tr.points[3], kCoupled));
}

TEST(ClassicalParams, Validation) {
  EXPECT_THROW((ClassicalParams{0.0, 1.0, 1.0, 1.0, 0.0, 0.0}.validate()), kerr::InvalidArgument);
  EXPECT_THROW((ClassicalParams{1.0, 1.0, -1.0, 1.0, 0.0, 0.0}.validate()), kerr::InvalidArgument);
}

}  // namespace
