#include "kerr/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "kerr/error.hpp"
#include "kerr/stats.hpp"

namespace kerr {

namespace {

constexpr double kNormDriftTolerance = 1e-9;
constexpr std::size_t kChunk = 4096;
// Phases are advanced by repeated multiplication and re-anchored to the
// exact exp(-i E t) every kResync samples.
constexpr std::size_t kResync = 64;
static_assert(kChunk % kResync == 0);

// Per-sector working set for one propagation run.
struct SectorKernel {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> rows;  // V(k, i) row-major
  std::vector<double> energy;
  std::vector<cplx> modes;
  std::vector<double> step_re, step_im;
  std::vector<double> z_re, z_im;
  double weight = 0.0;

  // Output for the current chunk.
  std::vector<double> field;
  std::vector<double> norm;
  std::vector<cplx> snapshots;  // entropy samples, dim entries each

  void prepare(const SectorBlock& block, const std::vector<cplx>& a, double w, double dt) {
    n = block.n();
    dim = block.dim();
    weight = w;
    modes = a;
    const auto& v = block.eigenvectors();
    rows.resize(dim * dim);
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t i = 0; i < dim; ++i) {
        rows[k * dim + i] = v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
      }
    }
    energy.assign(block.eigenvalues().data(), block.eigenvalues().data() + dim);
    step_re.resize(dim);
    step_im.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      step_re[i] = std::cos(energy[i] * dt);
      step_im[i] = -std::sin(energy[i] * dt);
    }
    z_re.assign(dim, 0.0);
    z_im.assign(dim, 0.0);
  }

  void anchor(double t) {
    for (std::size_t i = 0; i < dim; ++i) {
      const cplx z = modes[i] * std::polar(1.0, -energy[i] * t);
      z_re[i] = z.real();
      z_im[i] = z.imag();
    }
  }

  void advance() {
    for (std::size_t i = 0; i < dim; ++i) {
      const double re = z_re[i] * step_re[i] - z_im[i] * step_im[i];
      const double im = z_re[i] * step_im[i] + z_im[i] * step_re[i];
      z_re[i] = re;
      z_im[i] = im;
    }
  }

  void run_chunk(std::size_t first, std::size_t count, double dt, std::size_t stride) {
    field.assign(count, 0.0);
    norm.assign(count, 0.0);
    snapshots.clear();
    for (std::size_t s = 0; s < count; ++s) {
      const std::size_t j = first + s;
      if (j % kResync == 0) {
        anchor(static_cast<double>(j) * dt);
      } else {
        advance();
      }
      const bool snap = stride != 0 && j % stride == 0;
      double f = 0.0;
      double w = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double* row = rows.data() + k * dim;
        double cr = 0.0;
        double ci = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          cr += row[i] * z_re[i];
          ci += row[i] * z_im[i];
        }
        const double p = cr * cr + ci * ci;
        f += static_cast<double>(k) * p;
        w += p;
        if (snap) snapshots.emplace_back(cr, ci);
      }
      field[s] = f;
      norm[s] = w;
    }
  }
};

template <class Fn>
void for_each_sector(std::vector<SectorKernel>& kernels, unsigned threads, Fn&& fn) {
  const unsigned workers = std::max(
      1u, std::min<unsigned>(threads, static_cast<unsigned>(kernels.size())));
  if (workers == 1) {
    for (auto& k : kernels) fn(k);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          // Kernels are sorted largest first; striding spreads the cost.
          for (std::size_t i = w; i < kernels.size(); i += workers) fn(kernels[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<double> ObservableSet::total() const {
  std::vector<double> out(mean_N.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = mean_N.values[j] + mean_b.values[j];
  return out;
}

SpectralPropagator::SpectralPropagator(const QuantumState& initial,
                                       const ModelParams& params, unsigned threads)
    : nmax_(initial.nmax()),
      blocks_(build_sector_blocks(initial.nmax(), params, threads)),
      modes_(nmax_ + 1),
      weights_(nmax_ + 1, 0.0) {
  for (std::size_t n = 0; n <= nmax_; ++n) {
    const auto& v = blocks_[n].eigenvectors();
    const auto c = initial.sector(n);
    auto& a = modes_[n];
    a.assign(n + 1, cplx{});
    for (std::size_t i = 0; i <= n; ++i) {
      cplx s{};
      for (std::size_t k = 0; k <= n; ++k) {
        s += v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * c[k];
      }
      a[i] = s;
    }
    weights_[n] = initial.sector_weight(n);
  }
}

QuantumState SpectralPropagator::state_at(double t) const {
  auto state = QuantumState::zeros(nmax_);
  for (std::size_t n = 0; n <= nmax_; ++n) {
    const auto& v = blocks_[n].eigenvectors();
    const auto& e = blocks_[n].eigenvalues();
    auto out = state.sector(n);
    for (std::size_t i = 0; i <= n; ++i) {
      const cplx z = modes_[n][i] * std::polar(1.0, -e[static_cast<Eigen::Index>(i)] * t);
      for (std::size_t k = 0; k <= n; ++k) {
        out[k] += v(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * z;
      }
    }
  }
  return state;
}

ObservableSet evolve_series(const QuantumState& initial, const ModelParams& params,
                            const EvolveOptions& options) {
  const SpectralPropagator prop(initial, params, options.threads);
  return evolve_series(prop, options.dt, options);
}

ObservableSet evolve_series(const SpectralPropagator& prop, double dt,
                            const EvolveOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("evolve_series: dt must be > 0");
  if (options.steps < 2) throw InvalidArgument("evolve_series: steps must be >= 2");
  const std::size_t stride = options.want_entropy ? std::max<std::size_t>(1, options.entropy_stride) : 0;

  std::vector<SectorKernel> kernels;
  for (std::size_t n = prop.nmax() + 1; n-- > 0;) {
    if (prop.initial_weight(n) == 0.0) continue;  // contributes exactly zero
    kernels.emplace_back().prepare(prop.blocks()[n], prop.modes(n), prop.initial_weight(n), dt);
  }
  // Reduction order: ascending n.
  std::vector<const SectorKernel*> ascending;
  for (auto it = kernels.rbegin(); it != kernels.rend(); ++it) ascending.push_back(&*it);

  const std::size_t steps = options.steps;
  ObservableSet obs;
  obs.mean_N.dt = dt;
  obs.mean_N.label = "mean_N";
  obs.mean_N.values.resize(steps);
  obs.mean_b.dt = dt;
  obs.mean_b.label = "mean_b";
  obs.mean_b.values.resize(steps);
  if (stride != 0) {
    obs.entropy.emplace();
    obs.entropy->dt = dt * static_cast<double>(stride);
    obs.entropy->label = "entropy";
    obs.entropy_stride = stride;
  }

  for (std::size_t first = 0; first < steps; first += kChunk) {
    const std::size_t count = std::min(kChunk, steps - first);
    for_each_sector(kernels, options.threads,
                    [&](SectorKernel& k) { k.run_chunk(first, count, dt, stride); });

    for (std::size_t s = 0; s < count; ++s) {
      NeumaierSum field;
      NeumaierSum atom;
      for (const SectorKernel* k : ascending) {
        const double w = k->norm[s];
        if (std::abs(w - k->weight) > kNormDriftTolerance) {
          throw DriftError("evolve_series: norm of sector " + std::to_string(k->n) +
                           " drifted by " + std::to_string(w - k->weight) + " at sample " +
                           std::to_string(first + s));
        }
        field.add(k->field[s]);
        atom.add(static_cast<double>(k->n) * w - k->field[s]);
      }
      obs.mean_N.values[first + s] = field.value();
      obs.mean_b.values[first + s] = atom.value();
    }

    if (stride != 0) {
      std::size_t snap = 0;
      for (std::size_t s = 0; s < count; ++s) {
        if ((first + s) % stride != 0) continue;
        auto state = QuantumState::zeros(prop.nmax());
        for (const SectorKernel* k : ascending) {
          const cplx* src = k->snapshots.data() + snap * k->dim;
          std::copy(src, src + k->dim, state.sector(k->n).begin());
        }
        obs.entropy->values.push_back(entanglement_entropy(state));
        ++snap;
      }
    }
  }
  return obs;
}

double entanglement_entropy(const QuantumState& state) {
  const double norm = state.norm_squared();
  if (std::abs(norm - 1.0) > 1e-8) {
    throw InvalidArgument("entanglement_entropy: state norm deviates from 1 by " +
                          std::to_string(norm - 1.0));
  }
  const std::size_t nmax = state.nmax();
  const auto dim = static_cast<Eigen::Index>(nmax + 1);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  // rho(j, j') = sum_l C(j, l) conj(C(j', l)), C(j, l) = c(n = j + l, k = j).
  for (std::size_t l = 0; l <= nmax; ++l) {
    for (std::size_t j = 0; j + l <= nmax; ++j) {
      const cplx cj = state.at(j + l, j);
      if (cj == cplx{}) continue;
      for (std::size_t jp = 0; jp + l <= nmax; ++jp) {
        rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(jp)) +=
            cj * std::conj(state.at(jp + l, jp));
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double p = solver.eigenvalues()[i];
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

double conservation_residual(const ObservableSet& obs) {
  const auto total = obs.total();
  if (total.empty()) return 0.0;
  double worst = 0.0;
  for (double v : total) worst = std::max(worst, std::abs(v - total.front()));
  return worst;
}

}  // namespace kerr
