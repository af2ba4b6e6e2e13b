#include "kerr/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kerr/error.hpp"
#include "kerr/kdtree.hpp"
#include "kerr/spectrum.hpp"
#include "kerr/stats.hpp"

namespace kerr {

Embedding::Embedding(std::span<const double> series, std::size_t delay, std::size_t dim)
    : series_(series), delay_(delay), dim_(dim) {
  if (dim_ == 0) throw InvalidArgument("Embedding: dim must be >= 1");
  if (delay_ == 0) throw InvalidArgument("Embedding: delay must be >= 1");
  const std::size_t span = (dim_ - 1) * delay_;
  if (series_.size() <= span) throw InsufficientData("Embedding: series shorter than the delay span");
  count_ = series_.size() - span;
}

std::vector<double> Embedding::flatten(std::size_t count) const {
  count = std::min(count, count_);
  std::vector<double> out(count * dim_);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t c = 0; c < dim_; ++c) out[i * dim_ + c] = at(i, c);
  }
  return out;
}

namespace {

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

std::vector<std::uint16_t> rank_bins(std::span<const double> x, std::size_t bins) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<std::uint16_t> out(x.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out[order[r]] = static_cast<std::uint16_t>(r * bins / x.size());
  }
  return out;
}

}  // namespace

std::vector<double> average_mutual_information(std::span<const double> x,
                                               std::size_t max_lag, std::size_t bins) {
  if (bins < 2 || bins > 1024) throw InvalidArgument("average_mutual_information: bins out of range");
  if (max_lag + 2 > x.size()) throw InvalidArgument("average_mutual_information: max_lag too large");
  const auto b = rank_bins(x, bins);
  std::vector<double> ami(max_lag + 1);
  std::vector<double> joint(bins * bins), pa(bins), pb(bins);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    std::fill(joint.begin(), joint.end(), 0.0);
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    const std::size_t n = x.size() - lag;
    for (std::size_t i = 0; i < n; ++i) {
      joint[b[i] * bins + b[i + lag]] += 1.0;
      pa[b[i]] += 1.0;
      pb[b[i + lag]] += 1.0;
    }
    const double inv = 1.0 / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t u = 0; u < bins; ++u) {
      for (std::size_t v = 0; v < bins; ++v) {
        const double p = joint[u * bins + v] * inv;
        if (p > 0.0) s += p * std::log(p / (pa[u] * inv * pb[v] * inv));
      }
    }
    ami[lag] = s;
  }
  return ami;
}

std::size_t ami_delay(std::span<const double> x, std::size_t max_lag, std::size_t bins) {
  if (x.size() < 1000) throw InsufficientData("ami_delay: need at least 1000 samples");
  if (is_constant(x)) throw DegenerateSeries("ami_delay: constant series");
  max_lag = std::min(max_lag, x.size() / 2);
  if (max_lag < 2) throw InvalidArgument("ami_delay: max_lag must be >= 2");
  const auto ami = average_mutual_information(x, max_lag, bins);
  for (std::size_t lag = 1; lag < max_lag; ++lag) {
    const double bias = static_cast<double>((bins - 1) * (bins - 1)) /
                        (2.0 * static_cast<double>(x.size() - lag));
    if (ami[lag] <= 2.0 * bias || ami[lag] < ami[lag + 1]) return lag;
  }
  const auto r = autocorrelation(x, max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    if (r[lag] < r[0] / std::exp(1.0)) return lag;
  }
  return max_lag;
}

FnnResult false_nearest_neighbors(std::span<const double> x, std::size_t delay,
                                  std::size_t max_dim, const FnnOptions& opt) {
  if (max_dim < 2) throw InvalidArgument("fnn: max_dim must be >= 2");
  if (delay == 0) throw InvalidArgument("fnn: delay must be >= 1");
  if (x.size() <= max_dim * delay + 10) {
    throw InsufficientData("fnn: series too short for max_dim * delay");
  }
  if (is_constant(x)) throw DegenerateSeries("fnn: constant series");
  const double sigma = std::sqrt(variance(x));
  // Separations below this are rounding noise (e.g. exact repeats of a
  // periodic signal); the ratio test is evaluated at this floor instead.
  const double floor = 1e-9 * sigma;

  FnnResult result;
  for (std::size_t d = 1; d <= max_dim; ++d) {
    // Vectors whose (d+1)-th coordinate exists.
    const std::size_t count = x.size() - d * delay;
    const Embedding emb(x, delay, d);
    const KdTree tree(emb.flatten(count), d);
    const std::size_t refs = std::min(opt.max_refs, count);
    std::size_t false_count = 0;
    std::size_t tested = 0;
    for (std::size_t r = 0; r < refs; ++r) {
      const std::size_t i = refs == count ? r : r * (count - 1) / (refs - 1);
      const Neighbor nb = tree.nearest_to(i, opt.theiler);
      if (!nb.found()) continue;
      ++tested;
      const double rd = std::max(std::sqrt(nb.dist2), floor);
      const double extra = std::abs(x[i + d * delay] - x[nb.index + d * delay]);
      const bool ratio_test = extra / rd > opt.rtol;
      const bool lonely = std::sqrt(nb.dist2 + extra * extra) / sigma > opt.atol;
      if (ratio_test || lonely) ++false_count;
    }
    const double frac = tested ? static_cast<double>(false_count) / tested : 1.0;
    result.fractions.push_back(frac);
    if (!result.dim && frac < opt.accept_fraction) result.dim = d;
  }
  return result;
}

std::optional<std::size_t> fnn_embedding_dim(std::span<const double> x, std::size_t delay,
                                             std::size_t max_dim, const FnnOptions& options) {
  return false_nearest_neighbors(x, delay, max_dim, options).dim;
}

}  // namespace kerr
