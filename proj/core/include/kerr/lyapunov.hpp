#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kerr/table.hpp"
#include "kerr/time_series.hpp"

namespace kerr {

struct RosensteinOptions {
  std::size_t delay = 1;
  std::size_t dim = 5;
  std::size_t theiler = 1;       // minimum |i - j| for neighbour pairs is theiler + 1
  std::size_t kmax = 500;        // evolution steps tracked
  std::size_t max_refs = 5000;   // reference points, spread uniformly
  std::size_t min_fit_points = 20;
  double min_r2 = 0.995;
  /// Pairs starting farther apart than this fraction of the attractor
  /// diameter are not "nearby" and are dropped.
  double max_initial_fraction = 0.1;
  /// Saturation onset: first k where <ln d> has covered this fraction of
  /// its total rise to the plateau.
  double saturation_fraction = 0.9;
  std::optional<std::pair<std::size_t, std::size_t>> fit_override;
  /// Saturation test: the late plateau must lie within this many e-folds of
  /// the decorrelation scale sqrt(2 dim) sigma ...
  double max_plateau_gap = 1.0;
  /// ... and the log-log slope of <ln d> against k over [kmax/10, kmax]
  /// must be below this (no residual algebraic growth).
  double max_late_growth = 0.25;
};

inline constexpr std::size_t kMinNeighborPairs = 100;

/// <ln d_j(k)> against k, and the exponent read off its linear region.
struct LyapunovCurve {
  double dt = 1.0;
  std::size_t delay = 1;
  std::size_t dim = 1;
  std::size_t theiler = 0;

  std::vector<std::size_t> k_values;
  std::vector<double> mean_log_sep;
  std::vector<std::size_t> pair_counts;  // pairs contributing at each k

  std::pair<std::size_t, std::size_t> fit_range{0, 0};  // inclusive k range
  bool fit_overridden = false;
  std::size_t saturation_k = 0;
  double slope_per_step = 0.0;
  double lambda_max = 0.0;  // slope / dt, inverse time
  double lambda_stderr = 0.0;
  double fit_r2 = 0.0;

  // Divergence law. Exponential divergence carries neighbours out to the
  // separation of unrelated points and stops there; bounded or algebraic
  // separation does not.
  double decorrelation_log = 0.0;  // ln(sqrt(2 dim) sigma)
  double plateau_log = 0.0;        // mean <ln d> over the second half
  double late_growth = 0.0;        // d<ln d>/d ln k over [kmax/10, kmax]
  bool saturated = false;

  std::size_t valid_pairs = 0;
  bool unreliable = false;  // fewer than kMinNeighborPairs pairs
};

struct FitWindow {
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t saturation_k = 0;
};

/// Linear-region selection on a <ln d(k)> curve: restrict to k <= the
/// saturation onset, then take the longest window of at least
/// min_fit_points with R^2 >= min_r2 (ties: higher R^2), or the best-R^2
/// window of minimum length when none qualifies. When the pre-saturation
/// region is shorter than min_fit_points the whole region is the window.
FitWindow select_fit_range(const std::vector<double>& mean_log_sep,
                           const RosensteinOptions& options);

/// Rosenstein's estimator of the maximal Lyapunov exponent. Each reference
/// vector is paired with its nearest neighbour outside the Theiler window;
/// d_j(k) is tracked for k = 0..kmax and <ln d_j(k)> averaged over pairs.
LyapunovCurve rosenstein_lambda(const TimeSeries& series, const RosensteinOptions& options);

/// Refits an existing curve over [lo, hi].
void refit(LyapunovCurve& curve, std::size_t lo, std::size_t hi);

/// Fig.-2 style data: one row per k with t = k dt, t g, and one
/// <ln d(k)> column per curve (all curves must share dt and kmax). Rows are
/// tagged transient / linear / saturation from the first curve's fit range.
Table curve_for_plot(const std::vector<LyapunovCurve>& curves, double g = 1.0);

}  // namespace kerr
