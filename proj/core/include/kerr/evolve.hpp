#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kerr/model.hpp"
#include "kerr/states.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

struct EvolveOptions {
  double dt = 0.1;
  std::size_t steps = 100'000;  // number of samples, t = 0 .. (steps-1) dt
  bool want_entropy = false;
  std::size_t entropy_stride = 100;
  unsigned threads = 1;
};

/// Observables recorded along one trajectory. mean_N and mean_b share dt and
/// length; the entropy series (if any) is sampled every entropy_stride steps.
struct ObservableSet {
  TimeSeries mean_N;
  TimeSeries mean_b;
  std::optional<TimeSeries> entropy;
  std::size_t entropy_stride = 0;

  /// <N>(t) + <b^dag b>(t) per sample.
  std::vector<double> total() const;
};

/// Exact propagation by spectral decomposition of every sector block. Each
/// sector's initial coefficients are rotated into the eigenbasis once;
/// evolving to time t only applies phases exp(-i E t).
class SpectralPropagator {
 public:
  SpectralPropagator(const QuantumState& initial, const ModelParams& params,
                     unsigned threads = 1);

  std::size_t nmax() const { return nmax_; }
  const std::vector<SectorBlock>& blocks() const { return blocks_; }
  /// Eigenbasis coefficients of sector n.
  const std::vector<cplx>& modes(std::size_t n) const { return modes_[n]; }
  double initial_weight(std::size_t n) const { return weights_[n]; }

  QuantumState state_at(double t) const;

 private:
  std::size_t nmax_;
  std::vector<SectorBlock> blocks_;
  std::vector<std::vector<cplx>> modes_;
  std::vector<double> weights_;
};

/// Samples <a^dag a> and <b^dag b> (and optionally the field-mode
/// entanglement entropy) at t = j dt, j = 0..steps-1. Per-sample sector sums
/// run in ascending n with compensated summation, so output is bit-identical
/// for any thread count.
///
/// Throws DriftError if any sector norm drifts by more than 1e-9.
ObservableSet evolve_series(const QuantumState& initial, const ModelParams& params,
                            const EvolveOptions& options);

ObservableSet evolve_series(const SpectralPropagator& propagator, double dt,
                            const EvolveOptions& options);

/// Von Neumann entropy of the field-mode reduced density matrix, with
/// eigenvalues below 1e-15 clipped to zero. Throws InvalidArgument if the
/// state norm deviates from 1 by more than 1e-8.
double entanglement_entropy(const QuantumState& state);

/// max_t |total(t) - total(0)|.
double conservation_residual(const ObservableSet& obs);

}  // namespace kerr
