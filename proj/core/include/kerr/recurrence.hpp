#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kerr/time_series.hpp"

namespace kerr {

inline constexpr double kDefaultCellWidth = 1e-2;

/// Histogram estimate of the invariant density over [min, max].
struct InvariantDensity {
  std::vector<double> bin_edges;  // size = bins + 1
  std::vector<std::size_t> counts;
  std::vector<double> rho;        // counts / (N width)
  double bin_width = 0.0;
  std::size_t total = 0;

  std::size_t bins() const { return counts.size(); }
  /// Bin holding v, consistent with edge comparisons; the top edge belongs
  /// to the last bin. Values outside the range return bins().
  std::size_t bin_of(double v) const;
};

/// Requires 0 < bin_width <= (max - min) / 10; throws DegenerateSeries for
/// a constant series.
InvariantDensity invariant_density(std::span<const double> x, double bin_width = kDefaultCellWidth);

/// Coarse-graining cell C = [lo, hi) (closed on the right when it is the
/// density's top bin).
struct Cell {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_right = false;

  bool contains(double v) const { return v >= lo && (v < hi || (closed_right && v == hi)); }
};

struct ModeCell {};           // bin of maximal measure; ties go to the lowest bin
struct MedianSupportCell {};  // bin containing the sample median
struct ExplicitCell {
  double lo = 0.0;
  double hi = 0.0;
  bool closed_right = false;  // written "explicit(lo,hi]"
};
using CellPolicy = std::variant<ModeCell, MedianSupportCell, ExplicitCell>;

std::string describe(const CellPolicy& policy);
CellPolicy cell_policy_from_string(const std::string& text);

/// Throws InvalidArgument for an empty density.
Cell select_cell(const InvariantDensity& density, const CellPolicy& policy,
                 std::span<const double> series = {});

struct RecurrenceOptions {
  /// Count a run of consecutive in-cell samples as a single visit (entry
  /// time). Off by default: every in-cell sample is a visit.
  bool collapse_runs = false;
};

struct RecurrenceReport {
  Cell cell;
  double dt = 1.0;
  std::size_t length = 0;
  double mu = 0.0;          // fraction of samples inside C
  double visit_rate = 0.0;  // visits / length; equals mu unless runs are collapsed
  std::size_t visits = 0;
  std::vector<std::size_t> taus;  // return times in samples
  double mean_tau = 0.0;          // samples
  double mean_tau_time = 0.0;     // mean_tau * dt
  double kac_ratio = 0.0;         // mean_tau * visit_rate
  bool collapsed_runs = false;

  /// (tau, count) pairs in increasing tau.
  std::vector<std::pair<std::size_t, std::size_t>> histogram() const;
};

/// First-return times to `cell`. Throws InsufficientData for fewer than 2
/// visits.
RecurrenceReport recurrence_times(const TimeSeries& series, const Cell& cell,
                                  const RecurrenceOptions& options = {});

enum class ReturnLaw { Exponential, Discrete, Neither };
std::string to_string(ReturnLaw law);

struct ReturnFitOptions {
  std::size_t min_returns = 500;
  std::size_t top_values = 10;
  double discrete_mass = 0.9;
  double ks_alpha = 0.01;
};

struct ReturnFit {
  ReturnLaw verdict = ReturnLaw::Neither;
  double rate = 0.0;  // per sample, fixed to the visit rate
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  double top_mass = 0.0;  // probability mass on the top_values most frequent taus
  std::size_t distinct = 0;
  std::size_t returns = 0;
};

/// Compares the return times with the discrete-time exponential law
/// P(tau) = mu (1-mu)^(tau-1) (rate fixed, not fitted) by a KS test, and
/// flags discrete support when the most frequent values carry most of the
/// mass. Discrete support takes precedence in the verdict.
ReturnFit fit_return_distribution(const RecurrenceReport& report,
                                  const ReturnFitOptions& options = {});

struct SuccessiveReturnOptions {
  std::size_t min_visits = 10'000;
  double ks_alpha = 0.01;
};

struct SuccessiveReturnFit {
  bool accepted = false;
  double rate = 0.0;
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  double serial_correlation = 0.0;  // Pearson r of (tau_i, tau_{i+1})
  std::size_t sums = 0;
};

/// Distribution of tau_{2i} + tau_{2i+1} (disjoint pairs) against the
/// discrete Erlang-2 law P(s) = (s-1) mu^2 (1-mu)^(s-2), rate fixed to mu.
SuccessiveReturnFit successive_return_test(const RecurrenceReport& report,
                                           const SuccessiveReturnOptions& options = {});

/// Moment-matched Gaussian against the binned density.
struct GaussianFit {
  double mean = 0.0;
  double stddev = 0.0;
  double r2 = 0.0;  // of rho against the Gaussian density, over bins
  double jarque_bera = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};
GaussianFit gaussian_fit(const InvariantDensity& density, std::span<const double> series);

}  // namespace kerr
