#include "kerr/states.hpp"

#include <cmath>
#include <string>

#include "kerr/error.hpp"

namespace kerr {

double laguerre(unsigned m, double x) {
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 - x;
  for (unsigned j = 1; j < m; ++j) {
    const double next = ((2.0 * j + 1.0 - x) * cur - j * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void StateSpec::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw InvalidArgument("StateSpec: alpha must be finite");
  }
  if (kind == StateKind::Coherent && m != 0) {
    throw InvalidArgument("StateSpec: m must be 0 for a coherent state");
  }
}

StateSpec StateSpec::from_nu(StateKind kind, double nu, unsigned m) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("StateSpec: nu must be finite and >= 0");
  }
  StateSpec s{kind, cplx{std::sqrt(nu), 0.0}, kind == StateKind::Coherent ? 0u : m};
  return s;
}

QuantumState::QuantumState(std::size_t nmax, std::vector<cplx> coeffs,
                           double norm_deficit)
    : nmax_(nmax), coeffs_(std::move(coeffs)), norm_deficit_(norm_deficit) {
  if (coeffs_.size() != offset(nmax + 1)) {
    throw InvalidArgument("QuantumState: coefficient table has wrong size");
  }
}

QuantumState QuantumState::zeros(std::size_t nmax) {
  return QuantumState(nmax, std::vector<cplx>(offset(nmax + 1)), 0.0);
}

double QuantumState::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double QuantumState::sector_weight(std::size_t n) const {
  double s = 0.0;
  for (const auto& c : sector(n)) s += std::norm(c);
  return s;
}

double QuantumState::mean_field_number() const {
  double s = 0.0;
  for (std::size_t n = 0; n <= nmax_; ++n) {
    for (std::size_t k = 0; k <= n; ++k) s += static_cast<double>(k) * std::norm(at(n, k));
  }
  return s;
}

double QuantumState::mean_atom_number() const {
  double s = 0.0;
  for (std::size_t n = 0; n <= nmax_; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      s += static_cast<double>(n - k) * std::norm(at(n, k));
    }
  }
  return s;
}

std::vector<cplx> field_amplitudes(const StateSpec& spec, std::size_t jmax) {
  spec.validate();
  const unsigned m = spec.kind == StateKind::PhotonAdded ? spec.m : 0u;
  const double nu = spec.nu();
  const double log_abs = nu > 0.0 ? 0.5 * std::log(nu) : 0.0;
  const double phase = std::arg(spec.alpha);
  const double log_norm =
      0.5 * (std::lgamma(m + 1.0) + std::log(laguerre(m, -nu)));

  std::vector<cplx> amp(jmax + 1, cplx{});
  for (std::size_t j = m; j <= jmax; ++j) {
    const double shift = static_cast<double>(j - m);
    if (nu == 0.0 && j != m) break;
    const double log_mag = -0.5 * nu + shift * log_abs +
                           0.5 * std::lgamma(static_cast<double>(j) + 1.0) -
                           std::lgamma(shift + 1.0) - log_norm;
    amp[j] = std::polar(std::exp(log_mag), shift * phase);
  }
  return amp;
}

namespace {

// Smallest nmax with sum_{j > nmax} p_j < eps; probabilities are generated
// until they are far below eps past the distribution's bulk.
QuantumState truncated_product_state(const StateSpec& spec, double eps_trunc,
                                     std::size_t cap) {
  if (!(eps_trunc > 0.0 && eps_trunc <= 1e-6)) {
    throw InvalidArgument("truncation tolerance must lie in (0, 1e-6]");
  }
  const double nu = spec.nu();
  const double mean = mean_photon_initial(spec);
  // Rough upper bound on the support we need to look at.
  const double spread = std::sqrt(mean + 1.0) * (3.0 + std::sqrt(nu + 1.0));
  const auto scan = static_cast<std::size_t>(mean + 40.0 + 20.0 * spread);
  const std::size_t jmax = std::min(scan, cap + 64);

  auto amp = field_amplitudes(spec, jmax);
  std::vector<double> tail(jmax + 2, 0.0);
  if (jmax < scan) {
    // Scan clipped by the cap: whatever mass lies beyond it counts as tail.
    double kept = 0.0;
    for (std::size_t j = 0; j <= jmax; ++j) kept += std::norm(amp[j]);
    tail[jmax + 1] = std::max(0.0, 1.0 - kept);
  }
  for (std::size_t j = jmax + 1; j-- > 0;) tail[j] = tail[j + 1] + std::norm(amp[j]);

  std::size_t nmax = 0;
  while (nmax <= jmax && tail[nmax + 1] >= eps_trunc) ++nmax;
  if (nmax > cap || nmax > jmax) {
    throw InvalidArgument("initial state needs nmax > sector cap (" +
                          std::to_string(cap) + "); nu = " + std::to_string(nu));
  }
  std::vector<cplx> coeffs(QuantumState::offset(nmax + 1));
  for (std::size_t n = 0; n <= nmax; ++n) coeffs[QuantumState::offset(n) + n] = amp[n];
  return QuantumState(nmax, std::move(coeffs), std::max(0.0, tail[nmax + 1]));
}

}  // namespace

QuantumState coherent_state(cplx alpha, double eps_trunc, std::size_t cap) {
  return truncated_product_state(StateSpec::coherent(alpha), eps_trunc, cap);
}

QuantumState pacs_state(cplx alpha, unsigned m, double eps_trunc, std::size_t cap) {
  return truncated_product_state(StateSpec::photon_added(alpha, m), eps_trunc, cap);
}

QuantumState make_state(const StateSpec& spec, double eps_trunc, std::size_t cap) {
  return truncated_product_state(spec, eps_trunc, cap);
}

double mean_photon_initial(const StateSpec& spec) {
  spec.validate();
  const double nu = spec.nu();
  if (spec.kind == StateKind::Coherent) return nu;
  const unsigned m = spec.m;
  return (m + 1.0) * laguerre(m + 1, -nu) / laguerre(m, -nu) - 1.0;
}

}  // namespace kerr
