#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "kerr/time_series.hpp"

namespace kerr {

/// Classical limit of the Kerr Hamiltonian: two coupled oscillators with a
/// quartic self-interaction of the second one.
struct ClassicalParams {
  double m = 1.0;
  double M = 1.0;
  double omega = 1.0;
  double omega0 = 1.0;
  double lambda_cl = 0.0;
  double g = 0.0;

  void validate() const;
};

struct PhasePoint {
  double x = 0.0;
  double px = 0.0;
  double y = 0.0;
  double py = 0.0;

  std::array<double, 4> as_array() const { return {x, px, y, py}; }
  static PhasePoint from_array(const std::array<double, 4>& z) { return {z[0], z[1], z[2], z[3]}; }
};

double h1_classical(const PhasePoint& p, const ClassicalParams& c);
double h2_classical(const PhasePoint& p, const ClassicalParams& c);
double h_classical(const PhasePoint& p, const ClassicalParams& c);
double n_tot_classical(const PhasePoint& p, const ClassicalParams& c);

/// dH/d(x, px, y, py).
std::array<double, 4> gradient(const PhasePoint& p, const ClassicalParams& c);
/// Row-major 4x4 Hessian in the same coordinate order.
std::array<double, 16> hessian(const PhasePoint& p, const ClassicalParams& c);

struct IntegratorOptions {
  double dt = 0.01;
  std::size_t steps = 100'000;
  std::size_t stride = 1;          // keep every stride-th point
  double drift_tolerance = 1e-8;   // relative bound on H and N_tot drift
};

struct Trajectory {
  double dt = 0.0;  // time between stored points
  std::vector<PhasePoint> points;
  double h0 = 0.0;
  double n0 = 0.0;
  double max_h_drift = 0.0;  // max |H(t) - H(0)| / |H(0)| over all steps
  double max_n_drift = 0.0;
  double max_radius = 0.0;   // max Euclidean norm of the phase point

  /// H1 along the stored points.
  TimeSeries h1_series(const ClassicalParams& c) const;
};

/// One step of the sixth-order symmetric composition of implicit midpoint
/// steps. Throws Error if the fixed-point iteration fails to converge.
PhasePoint yoshida6_step(const PhasePoint& p, const ClassicalParams& c, double dt);

/// Throws DriftError when either invariant drifts beyond the tolerance.
Trajectory integrate(const PhasePoint& p0, const ClassicalParams& c,
                     const IntegratorOptions& options);

struct ClassicalLyapunov {
  std::array<double, 4> exponents{};  // descending
  double sum = 0.0;
  double time = 0.0;
  double max_h_drift = 0.0;
  double max_n_drift = 0.0;
};

/// Tangent-map propagation with Gram-Schmidt reorthonormalisation every
/// `reorth` steps.
ClassicalLyapunov classical_lyapunov(const PhasePoint& p0, const ClassicalParams& c,
                                     const IntegratorOptions& options, std::size_t reorth = 10);

}  // namespace kerr
