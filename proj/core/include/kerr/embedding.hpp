#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kerr {

/// Delay-coordinate view over a scalar series: vector i is
/// (x_i, x_{i+J}, ..., x_{i+(d-1)J}). Does not own the series.
class Embedding {
 public:
  Embedding(std::span<const double> series, std::size_t delay, std::size_t dim);

  std::size_t delay() const { return delay_; }
  std::size_t dim() const { return dim_; }
  /// Number of complete delay vectors: length - (dim-1) delay.
  std::size_t size() const { return count_; }
  double at(std::size_t i, std::size_t c) const { return series_[i + c * delay_]; }

  /// Row-major copy of the first `count` vectors.
  std::vector<double> flatten(std::size_t count) const;

 private:
  std::span<const double> series_;
  std::size_t delay_;
  std::size_t dim_;
  std::size_t count_;
};

inline constexpr std::size_t kMiBins = 16;

/// Average mutual information I(lag), lag = 0..max_lag, from equiprobable
/// (rank-based) histograms with `bins` cells per axis.
std::vector<double> average_mutual_information(std::span<const double> x,
                                               std::size_t max_lag,
                                               std::size_t bins = kMiBins);

/// First local minimum of the AMI curve (I(lag) < I(lag+1)). A lag whose
/// AMI is already within twice the histogram estimator's bias
/// (bins-1)^2 / 2N of zero also counts, so independent samples give 1.
/// Falls back to the first lag where the autocorrelation drops below 1/e,
/// and finally to max_lag.
///
/// Requires at least 1000 samples; throws DegenerateSeries for a constant
/// series.
std::size_t ami_delay(std::span<const double> x, std::size_t max_lag,
                      std::size_t bins = kMiBins);

struct FnnOptions {
  double rtol = 15.0;  // distance-ratio threshold
  double atol = 2.0;   // loneliness threshold, in units of the series std
  std::size_t max_refs = 5000;
  std::size_t theiler = 0;
  double accept_fraction = 0.01;
};

struct FnnResult {
  std::vector<double> fractions;  // fractions[d-1] for d = 1..max_dim
  std::optional<std::size_t> dim;  // smallest d with fraction < accept_fraction
};

/// False-nearest-neighbour fractions for d = 1..max_dim (Kennel's two tests).
/// Throws InsufficientData when the series cannot hold max_dim * delay lags.
FnnResult false_nearest_neighbors(std::span<const double> x, std::size_t delay,
                                  std::size_t max_dim, const FnnOptions& options = {});

std::optional<std::size_t> fnn_embedding_dim(std::span<const double> x, std::size_t delay,
                                             std::size_t max_dim,
                                             const FnnOptions& options = {});

}  // namespace kerr
