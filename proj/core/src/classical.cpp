#include "kerr/classical.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "kerr/error.hpp"

namespace kerr {

void ClassicalParams::validate() const {
  for (double v : {m, M, omega, omega0, lambda_cl, g}) {
    if (!std::isfinite(v)) throw InvalidArgument("classical parameters must be finite");
  }
  if (!(m > 0.0) || !(M > 0.0)) throw InvalidArgument("classical masses must be positive");
  if (!(omega > 0.0) || !(omega0 > 0.0)) {
    throw InvalidArgument("classical frequencies must be positive");
  }
}

double h1_classical(const PhasePoint& p, const ClassicalParams& c) {
  return p.px * p.px / (2.0 * c.m) + 0.5 * c.m * c.omega * c.omega * p.x * p.x;
}

double h2_classical(const PhasePoint& p, const ClassicalParams& c) {
  return p.py * p.py / (2.0 * c.M) + 0.5 * c.M * c.omega0 * c.omega0 * p.y * p.y;
}

namespace {

double coupling(const ClassicalParams& c) { return c.g / std::sqrt(c.omega * c.omega0); }
double kerr(const ClassicalParams& c) { return c.lambda_cl / (c.omega0 * c.omega0); }

}  // namespace

double h_classical(const PhasePoint& p, const ClassicalParams& c) {
  const double h2 = h2_classical(p, c);
  const double mu = std::sqrt(c.m * c.M);
  return h1_classical(p, c) + h2 + kerr(c) * h2 * h2 +
         coupling(c) * (mu * c.omega * c.omega0 * p.x * p.y + p.px * p.py / mu);
}

double n_tot_classical(const PhasePoint& p, const ClassicalParams& c) {
  return h1_classical(p, c) / c.omega + h2_classical(p, c) / c.omega0;
}

std::array<double, 4> gradient(const PhasePoint& p, const ClassicalParams& c) {
  const double mu = std::sqrt(c.m * c.M);
  const double k = coupling(c);
  const double f = 1.0 + 2.0 * kerr(c) * h2_classical(p, c);
  return {
      c.m * c.omega * c.omega * p.x + k * mu * c.omega * c.omega0 * p.y,
      p.px / c.m + k * p.py / mu,
      f * c.M * c.omega0 * c.omega0 * p.y + k * mu * c.omega * c.omega0 * p.x,
      f * p.py / c.M + k * p.px / mu,
  };
}

std::array<double, 16> hessian(const PhasePoint& p, const ClassicalParams& c) {
  const double mu = std::sqrt(c.m * c.M);
  const double k = coupling(c);
  const double kk = kerr(c);
  const double f = 1.0 + 2.0 * kk * h2_classical(p, c);
  const double dy = c.M * c.omega0 * c.omega0 * p.y;  // dH2/dy
  const double dpy = p.py / c.M;                       // dH2/dpy
  const double xy = k * mu * c.omega * c.omega0;
  const double pp = k / mu;
  // order: x, px, y, py
  return {
      c.m * c.omega * c.omega, 0.0, xy, 0.0,
      0.0, 1.0 / c.m, 0.0, pp,
      xy, 0.0, f * c.M * c.omega0 * c.omega0 + 2.0 * kk * dy * dy, 2.0 * kk * dy * dpy,
      0.0, pp, 2.0 * kk * dy * dpy, f / c.M + 2.0 * kk * dpy * dpy,
  };
}

namespace {

using Vec4 = std::array<double, 4>;

Vec4 flow(const Vec4& z, const ClassicalParams& c) {
  const auto d = gradient(PhasePoint::from_array(z), c);
  return {d[1], -d[0], d[3], -d[2]};
}

// Implicit midpoint z1 = z0 + h J grad H((z0 + z1)/2) by fixed-point iteration.
Vec4 implicit_midpoint(const Vec4& z0, const ClassicalParams& c, double h, Vec4* mid_out) {
  Vec4 z1 = z0;
  const auto f0 = flow(z0, c);
  for (int i = 0; i < 4; ++i) z1[i] = z0[i] + h * f0[i];
  double scale = 1.0;
  for (double v : z0) scale = std::max(scale, std::abs(v));
  double prev = HUGE_VAL;
  for (int iter = 0; iter < 200; ++iter) {
    Vec4 mid;
    for (int i = 0; i < 4; ++i) mid[i] = 0.5 * (z0[i] + z1[i]);
    const auto f = flow(mid, c);
    double delta = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double next = z0[i] + h * f[i];
      delta = std::max(delta, std::abs(next - z1[i]));
      z1[i] = next;
    }
    if (delta <= 1e-14 * scale || (delta < 1e-12 * scale && delta >= prev)) {
      if (mid_out != nullptr) {
        for (int i = 0; i < 4; ++i) (*mid_out)[i] = 0.5 * (z0[i] + z1[i]);
      }
      return z1;
    }
    prev = delta;
  }
  throw Error("implicit midpoint iteration did not converge; reduce dt");
}

// Sixth-order composition weights (Yoshida, solution A).
constexpr double kW1 = -1.17767998417887;
constexpr double kW2 = 0.235573213359357;
constexpr double kW3 = 0.784513610477560;
constexpr double kW0 = 1.0 - 2.0 * (kW1 + kW2 + kW3);
constexpr std::array<double, 7> kWeights{kW3, kW2, kW1, kW0, kW1, kW2, kW3};

using Mat4 = Eigen::Matrix4d;

// Exact derivative of one implicit-midpoint substep.
Mat4 substep_jacobian(const Vec4& mid, const ClassicalParams& c, double h) {
  const auto hs = hessian(PhasePoint::from_array(mid), c);
  Mat4 hm;
  for (int r = 0; r < 4; ++r)
    for (int col = 0; col < 4; ++col) hm(r, col) = hs[static_cast<std::size_t>(4 * r + col)];
  Mat4 j = Mat4::Zero();
  j(0, 1) = 1.0;
  j(1, 0) = -1.0;
  j(2, 3) = 1.0;
  j(3, 2) = -1.0;
  const Mat4 a = 0.5 * h * j * hm;
  const Mat4 id = Mat4::Identity();
  return (id - a).partialPivLu().solve(id + a);
}

Vec4 step(const Vec4& z, const ClassicalParams& c, double dt, Mat4* tangent) {
  Vec4 cur = z;
  for (double w : kWeights) {
    Vec4 mid;
    cur = implicit_midpoint(cur, c, w * dt, &mid);
    if (tangent != nullptr) *tangent = substep_jacobian(mid, c, w * dt) * *tangent;
  }
  return cur;
}

double relative(double v, double ref) {
  return ref != 0.0 ? std::abs(v - ref) / std::abs(ref) : std::abs(v - ref);
}

double radius(const Vec4& z) {
  return std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3]);
}

void check_options(const IntegratorOptions& o) {
  if (!(o.dt > 0.0) || !std::isfinite(o.dt)) throw InvalidArgument("classical dt must be > 0");
  if (o.steps == 0) throw InvalidArgument("classical steps must be >= 1");
  if (o.stride == 0) throw InvalidArgument("classical stride must be >= 1");
}

}  // namespace

PhasePoint yoshida6_step(const PhasePoint& p, const ClassicalParams& c, double dt) {
  return PhasePoint::from_array(step(p.as_array(), c, dt, nullptr));
}

TimeSeries Trajectory::h1_series(const ClassicalParams& c) const {
  TimeSeries s;
  s.dt = dt;
  s.label = "H1";
  s.values.reserve(points.size());
  for (const auto& p : points) s.values.push_back(h1_classical(p, c));
  return s;
}

Trajectory integrate(const PhasePoint& p0, const ClassicalParams& c,
                     const IntegratorOptions& o) {
  c.validate();
  check_options(o);
  Trajectory t;
  t.dt = o.dt * static_cast<double>(o.stride);
  t.h0 = h_classical(p0, c);
  t.n0 = n_tot_classical(p0, c);
  t.points.reserve(o.steps / o.stride + 1);
  t.points.push_back(p0);
  Vec4 z = p0.as_array();
  t.max_radius = radius(z);
  for (std::size_t s = 1; s <= o.steps; ++s) {
    z = step(z, c, o.dt, nullptr);
    const auto p = PhasePoint::from_array(z);
    t.max_h_drift = std::max(t.max_h_drift, relative(h_classical(p, c), t.h0));
    t.max_n_drift = std::max(t.max_n_drift, relative(n_tot_classical(p, c), t.n0));
    t.max_radius = std::max(t.max_radius, radius(z));
    if (t.max_h_drift > o.drift_tolerance || t.max_n_drift > o.drift_tolerance) {
      throw DriftError("classical integration drifted at step " + std::to_string(s) +
                       ": relative H drift " + std::to_string(t.max_h_drift) +
                       ", N_tot drift " + std::to_string(t.max_n_drift));
    }
    if (s % o.stride == 0) t.points.push_back(p);
  }
  return t;
}

ClassicalLyapunov classical_lyapunov(const PhasePoint& p0, const ClassicalParams& c,
                                     const IntegratorOptions& o, std::size_t reorth) {
  c.validate();
  check_options(o);
  if (reorth == 0) throw InvalidArgument("reorthonormalisation interval must be >= 1");
  ClassicalLyapunov r;
  const double h0 = h_classical(p0, c);
  const double n0 = n_tot_classical(p0, c);
  Vec4 z = p0.as_array();
  Mat4 basis = Mat4::Identity();
  std::array<double, 4> log_growth{};
  for (std::size_t s = 1; s <= o.steps; ++s) {
    z = step(z, c, o.dt, &basis);
    const auto p = PhasePoint::from_array(z);
    r.max_h_drift = std::max(r.max_h_drift, relative(h_classical(p, c), h0));
    r.max_n_drift = std::max(r.max_n_drift, relative(n_tot_classical(p, c), n0));
    if (r.max_h_drift > o.drift_tolerance || r.max_n_drift > o.drift_tolerance) {
      throw DriftError("classical tangent integration drifted at step " + std::to_string(s));
    }
    if (s % reorth == 0 || s == o.steps) {
      // Modified Gram-Schmidt on the columns.
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < i; ++j) basis.col(i) -= basis.col(j).dot(basis.col(i)) * basis.col(j);
        const double norm = basis.col(i).norm();
        log_growth[static_cast<std::size_t>(i)] += std::log(norm);
        basis.col(i) /= norm;
      }
    }
  }
  r.time = o.dt * static_cast<double>(o.steps);
  for (std::size_t i = 0; i < 4; ++i) r.exponents[i] = log_growth[i] / r.time;
  std::sort(r.exponents.begin(), r.exponents.end(), std::greater<>());
  r.sum = r.exponents[0] + r.exponents[1] + r.exponents[2] + r.exponents[3];
  return r;
}

}  // namespace kerr
