#include "kerr/model.hpp"

#include <cmath>
#include <string>
#include <algorithm>
#include <exception>
#include <optional>
#include <thread>

#include "kerr/error.hpp"
#include "kerr/tridiagonal.hpp"

namespace kerr {

void ModelParams::validate() const {
  for (double v : {omega, omega0, gamma, g}) {
    if (!std::isfinite(v)) throw InvalidArgument("ModelParams: non-finite field");
  }
  if (gamma < 0.0) throw InvalidArgument("ModelParams: gamma must be >= 0");
  if (g < 0.0) throw InvalidArgument("ModelParams: g must be >= 0");
}

SectorBlock::SectorBlock(std::size_t n, const ModelParams& params) : n_(n) {
  if (n > kMaxSector) {
    throw InvalidArgument("build_sector_block: sector " + std::to_string(n) +
                          " exceeds the cap of " + std::to_string(kMaxSector));
  }
  params.validate();
  const std::size_t dim = sector_dimension(n);
  diag_.resize(dim);
  off_.resize(dim - 1);
  for (std::size_t k = 0; k < dim; ++k) {
    const double field = static_cast<double>(k);
    const double atom = static_cast<double>(n - k);
    diag_[k] = params.omega * field + params.omega0 * atom +
               params.gamma * atom * (atom - 1.0);
    if (k + 1 < dim) {
      off_[k] = params.g * std::sqrt((field + 1.0) * atom);
    }
  }
  auto eig = solve_tridiagonal(diag_, off_);
  values_ = std::move(eig.values);
  vectors_ = std::move(eig.vectors);
}

Eigen::MatrixXd SectorBlock::dense() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    h(k, k) = diag_[k];
    if (k + 1 < d) {
      h(k, k + 1) = off_[k];
      h(k + 1, k) = off_[k];
    }
  }
  return h;
}

double SectorBlock::reconstruction_error() const {
  const Eigen::MatrixXd h = dense();
  const Eigen::MatrixXd r =
      vectors_ * values_.asDiagonal() * vectors_.transpose() - h;
  const double norm = h.norm();
  return norm == 0.0 ? r.norm() : r.norm() / norm;
}

SectorBlock build_sector_block(std::size_t n, const ModelParams& params) {
  return SectorBlock(n, params);
}

std::vector<SectorBlock> build_sector_blocks(std::size_t nmax,
                                             const ModelParams& params,
                                             unsigned threads) {
  params.validate();
  if (nmax > kMaxSector) {
    throw InvalidArgument("build_sector_blocks: nmax exceeds sector cap");
  }
  const std::size_t count = nmax + 1;
  std::vector<std::optional<SectorBlock>> slots(count);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t n = 0; n < count; ++n) slots[n].emplace(n, params);
  } else {
    // Strided assignment: every sector is built by exactly one worker.
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t n = w; n < count; n += workers) slots[n].emplace(n, params);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<SectorBlock> blocks;
  blocks.reserve(count);
  for (auto& s : slots) blocks.push_back(std::move(*s));
  return blocks;
}

}  // namespace kerr
