#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kerr {

using cplx = std::complex<double>;

/// L_m(x) by the three-term recurrence
/// (j+1) L_{j+1} = (2j+1-x) L_j - j L_{j-1}.
double laguerre(unsigned m, double x);

enum class StateKind { Coherent, PhotonAdded };

/// Initial field state; the atomic oscillator always starts in |0>.
struct StateSpec {
  StateKind kind = StateKind::Coherent;
  cplx alpha{0.0, 0.0};
  unsigned m = 0;  // photon-addition order, 0 for a coherent state

  double nu() const { return std::norm(alpha); }
  void validate() const;

  static StateSpec coherent(cplx alpha) { return {StateKind::Coherent, alpha, 0}; }
  static StateSpec photon_added(cplx alpha, unsigned m) {
    return {StateKind::PhotonAdded, alpha, m};
  }
  /// Real positive amplitude alpha = sqrt(nu).
  static StateSpec from_nu(StateKind kind, double nu, unsigned m = 0);
};

inline constexpr double kDefaultTruncation = 1e-12;
inline constexpr std::size_t kDefaultSectorCap = 4096;

/// Sector-resolved joint state: coefficient c(n, k) multiplies
/// |k>_field (x) |n-k>_atom, for 0 <= k <= n <= nmax.
class QuantumState {
 public:
  QuantumState() = default;
  QuantumState(std::size_t nmax, std::vector<cplx> coeffs, double norm_deficit);

  /// All-zero table of the given truncation.
  static QuantumState zeros(std::size_t nmax);

  std::size_t nmax() const { return nmax_; }
  double norm_deficit() const { return norm_deficit_; }

  static constexpr std::size_t offset(std::size_t n) { return n * (n + 1) / 2; }

  cplx& at(std::size_t n, std::size_t k) { return coeffs_[offset(n) + k]; }
  const cplx& at(std::size_t n, std::size_t k) const { return coeffs_[offset(n) + k]; }

  std::span<const cplx> sector(std::size_t n) const {
    return {coeffs_.data() + offset(n), n + 1};
  }
  std::span<cplx> sector(std::size_t n) { return {coeffs_.data() + offset(n), n + 1}; }

  /// Sum of |c(n,k)|^2.
  double norm_squared() const;
  double sector_weight(std::size_t n) const;
  /// <a^dag a> = sum n k |c(n,k)|^2 restricted to k.
  double mean_field_number() const;
  double mean_atom_number() const;

 private:
  std::size_t nmax_ = 0;
  std::vector<cplx> coeffs_;
  double norm_deficit_ = 0.0;
};

/// Fock-basis amplitudes <j|alpha, m> of the (photon-added) coherent field
/// state for j = 0..jmax, evaluated in log space.
std::vector<cplx> field_amplitudes(const StateSpec& spec, std::size_t jmax);

/// |alpha> (x) |0>, truncated at the smallest nmax whose Poisson tail is
/// below eps_trunc. Throws InvalidArgument if that nmax exceeds `cap`.
QuantumState coherent_state(cplx alpha, double eps_trunc = kDefaultTruncation,
                            std::size_t cap = kDefaultSectorCap);

/// (a^dag)^m |alpha> / sqrt(m! L_m(-nu)) (x) |0>, same truncation rule.
QuantumState pacs_state(cplx alpha, unsigned m, double eps_trunc = kDefaultTruncation,
                        std::size_t cap = kDefaultSectorCap);

QuantumState make_state(const StateSpec& spec, double eps_trunc = kDefaultTruncation,
                        std::size_t cap = kDefaultSectorCap);

/// Closed form <N(0)>: nu for CS, (m+1) L_{m+1}(-nu) / L_m(-nu) - 1 for PACS.
double mean_photon_initial(const StateSpec& spec);

}  // namespace kerr
