#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kerr/classical.hpp"
#include "kerr/config.hpp"
#include "kerr/embedding.hpp"
#include "kerr/evolve.hpp"
#include "kerr/lyapunov.hpp"
#include "kerr/recurrence.hpp"
#include "kerr/spectrum.hpp"
#include "kerr/table.hpp"

namespace kerr {

enum class Verdict { Regular, Chaotic, Indeterminate, Failed };
std::string to_string(Verdict v);

/// Operational reading of "lambda_max = 0": regular when |lambda| is below
/// both `sigmas` standard errors and `max_abs`; chaotic when lambda exceeds
/// `sigmas` standard errors; otherwise indeterminate.
struct VerdictRule {
  double sigmas = 3.0;
  double max_abs = 0.02;
  /// When set, a curve that never saturates at the decorrelation scale is
  /// read as non-exponential divergence (regular) whatever its fitted slope.
  bool require_saturation = true;
};

Verdict classify_lambda(double lambda, double stderr_, const VerdictRule& rule = {});

/// classify_lambda on the curve's fit, gated by the saturation test.
Verdict classify_curve(const LyapunovCurve& curve, const VerdictRule& rule = {});

struct SimulationResult {
  ObservableSet observables;
  std::size_t nmax = 0;
  double norm_deficit = 0.0;
  double residual = 0.0;  // conservation_residual
  double seconds = 0.0;
};

SimulationResult simulate(const RunConfig& config);

/// Series selected by `analysis.observable`.
const TimeSeries& observable(const SimulationResult& result, const RunConfig& config);

struct LyapunovSummary {
  std::vector<LyapunovCurve> curves;  // d_emb, d_emb + 1, ...
  double lambda = 0.0;                // at d_emb, inverse time
  double lambda_g = 0.0;              // in units of g (lambda / g), when g > 0
  double stderr_ = 0.0;
  double spread = 0.0;                // max |lambda_d - lambda| / |lambda| over extra dims
};

struct RecurrenceSummary {
  InvariantDensity density;
  RecurrenceReport report;
  std::optional<ReturnFit> fit;
  std::optional<SuccessiveReturnFit> successive;
  std::optional<GaussianFit> gaussian;
  std::vector<std::string> notes;  // analyses skipped for lack of data
};

struct AnalysisResult {
  std::size_t samples = 0;
  double dt = 0.0;
  // Auto-selected parameters (pinned in the manifest).
  std::size_t max_lag = 0;
  std::size_t theiler = 0;
  std::size_t delay = 0;
  std::size_t d_emb = 0;
  std::vector<std::pair<std::size_t, std::size_t>> fit_ranges;
  std::optional<ExplicitCell> cell;

  std::optional<PowerSpectrum> spectrum;
  std::size_t peak_count = 0;
  double dominant_frequency = 0.0;
  std::vector<double> ami;
  std::optional<FnnResult> fnn;
  std::optional<LyapunovSummary> lyapunov;
  std::optional<RecurrenceSummary> recurrence;

  VerdictRule rule;
  Verdict verdict = Verdict::Failed;
  std::vector<std::string> errors;
  std::map<std::string, double> seconds;

  /// True when every requested analysis produced a result.
  bool complete = false;
};

/// Runs the requested analyses on `series` (after dropping the configured
/// prefix). Failures are recorded in `errors`; nothing throws past here
/// except for an invalid series.
AnalysisResult analyze(const TimeSeries& series, const RunConfig& config,
                       const VerdictRule& rule = {});

/// Copy of `config` with every automatically chosen parameter fixed to the
/// value used in `result`, so a re-run reproduces it exactly.
RunConfig pinned_config(const RunConfig& config, const AnalysisResult& result,
                        double dt, std::size_t steps);

struct Table1Row {
  std::string name;
  double gamma_over_g = 0.0;
  std::string state;
  unsigned m = 0;
  double nu = 0.0;
  double lambda = 0.0;
  double lambda_g = 0.0;
  double stderr_ = 0.0;
  bool saturated = false;
  double plateau_gap = 0.0;
  double late_growth = 0.0;
  Verdict verdict = Verdict::Failed;
  std::string error;
};

/// Runs every case; a failed case yields a "failed" row.
std::vector<Table1Row> run_table1(const std::vector<RunConfig>& cases,
                                  const VerdictRule& rule = {}, std::size_t parallel = 1);
Table table1_table(const std::vector<Table1Row>& rows);

// Plot-ready tables.
Table spectrum_table(const PowerSpectrum& s, double g);
Table ami_table(const std::vector<double>& ami);
Table fnn_table(const FnnResult& fnn);
Table density_table(const InvariantDensity& d);
Table return_time_table(const RecurrenceReport& r);

struct ClassicalResult {
  Trajectory trajectory;
  ClassicalLyapunov exponents;
  TimeSeries h1;
  AnalysisResult h1_analysis;
};

/// Integrates, computes the tangent-space exponents, and runs the
/// spectrum/embedding/Lyapunov chain on H1(t).
ClassicalResult run_classical(const ClassicalConfig& config, const VerdictRule& rule = {});

}  // namespace kerr
