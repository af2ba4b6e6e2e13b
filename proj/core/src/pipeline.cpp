#include "kerr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "kerr/error.hpp"
#include "kerr/fingerprint.hpp"
#include "kerr/states.hpp"

namespace kerr {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Regular:
      return "regular";
    case Verdict::Chaotic:
      return "chaotic";
    case Verdict::Indeterminate:
      return "indeterminate";
    case Verdict::Failed:
      return "failed";
  }
  return "failed";
}

Verdict classify_lambda(double lambda, double stderr_, const VerdictRule& rule) {
  if (!std::isfinite(lambda) || !std::isfinite(stderr_)) return Verdict::Failed;
  const double band = rule.sigmas * stderr_;
  if (std::abs(lambda) < band && std::abs(lambda) < rule.max_abs) return Verdict::Regular;
  if (lambda > band) return Verdict::Chaotic;
  return Verdict::Indeterminate;
}

Verdict classify_curve(const LyapunovCurve& curve, const VerdictRule& rule) {
  const Verdict v = classify_lambda(curve.lambda_max, curve.lambda_stderr, rule);
  if (v == Verdict::Failed || !rule.require_saturation || curve.saturated) return v;
  return Verdict::Regular;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

SimulationResult simulate(const RunConfig& config) {
  config.validate();
  const auto start = Clock::now();
  SimulationResult r;
  const QuantumState psi0 = make_state(config.state, config.eps_trunc);
  r.nmax = psi0.nmax();
  r.norm_deficit = psi0.norm_deficit();
  EvolveOptions opt;
  opt.dt = config.resolved_dt();
  opt.steps = config.resolved_steps();
  opt.want_entropy = config.analyses.entropy;
  opt.entropy_stride = config.entropy_stride;
  opt.threads = static_cast<unsigned>(config.threads);
  r.observables = evolve_series(psi0, config.model, opt);
  const Fingerprint fp = fingerprint(config.model, config.state);
  r.observables.mean_N.params_hash = fp;
  r.observables.mean_b.params_hash = fp;
  if (r.observables.entropy) r.observables.entropy->params_hash = fp;
  r.residual = conservation_residual(r.observables);
  r.seconds = since(start);
  return r;
}

const TimeSeries& observable(const SimulationResult& result, const RunConfig& config) {
  return config.analysis.observable == "mean_b" ? result.observables.mean_b
                                                : result.observables.mean_N;
}

AnalysisResult analyze(const TimeSeries& input, const RunConfig& config, const VerdictRule& rule) {
  config.validate();
  input.validate();
  const TimeSeries series =
      config.discard_prefix > 0 ? input.drop_prefix(config.discard_prefix) : input;
  series.validate();
  const auto& a = config.analysis;
  const auto& flags = config.analyses;

  AnalysisResult out;
  out.rule = rule;
  out.samples = series.size();
  out.dt = series.dt;
  bool ok = true;
  auto record = [&](const std::string& stage, const std::exception& e) {
    out.errors.push_back(stage + ": " + e.what());
    ok = false;
  };

  // Spectrum; also needed for the default Theiler window.
  const bool need_spectrum = flags.spectrum || (flags.embed && !a.theiler);
  if (need_spectrum) {
    const auto start = Clock::now();
    try {
      const std::size_t n = series.size();
      out.max_lag = a.max_lag ? *a.max_lag : std::min<std::size_t>(n / 4, 8192);
      out.spectrum = power_spectrum(series, out.max_lag, a.taper);
      if (!out.spectrum->degenerate) {
        out.peak_count = find_peaks(*out.spectrum, a.peak_threshold_db).size();
        out.dominant_frequency = dominant_frequency(*out.spectrum);
      }
    } catch (const std::exception& e) {
      record("spectrum", e);
    }
    out.seconds["spectrum"] = since(start);
  }

  if (flags.embed) {
    const auto start = Clock::now();
    try {
      if (a.theiler) {
        out.theiler = *a.theiler;
      } else {
        if (!out.spectrum || out.spectrum->degenerate) {
          throw DegenerateSeries("no spectral peak to set the Theiler window");
        }
        out.theiler = mean_period_samples(*out.spectrum);
      }
      if (a.delay) {
        out.delay = *a.delay;
      } else {
        out.ami = average_mutual_information(series.view(), a.ami_max_lag);
        out.delay = ami_delay(series.view(), a.ami_max_lag);
      }
      if (a.d_emb) {
        out.d_emb = *a.d_emb;
      } else {
        FnnOptions fo;
        fo.rtol = a.fnn_rtol;
        fo.atol = a.fnn_atol;
        fo.theiler = out.theiler;
        out.fnn = false_nearest_neighbors(series.view(), out.delay, a.max_dim, fo);
        if (!out.fnn->dim) {
          throw InsufficientData("no embedding dimension up to " + std::to_string(a.max_dim) +
                                 " has a false-neighbour fraction below 1%");
        }
        out.d_emb = *out.fnn->dim;
      }
    } catch (const std::exception& e) {
      record("embedding", e);
    }
    out.seconds["embedding"] = since(start);
  }

  if (flags.lyapunov && out.d_emb > 0) {
    const auto start = Clock::now();
    try {
      LyapunovSummary ls;
      for (std::size_t extra = 0; extra <= a.extra_dims; ++extra) {
        RosensteinOptions ro;
        ro.delay = out.delay;
        ro.dim = out.d_emb + extra;
        ro.theiler = out.theiler;
        ro.kmax = a.kmax;
        ro.max_refs = a.max_refs;
        if (a.fit_range.size() == 1) ro.fit_override = a.fit_range.front();
        if (a.fit_range.size() > 1) ro.fit_override = a.fit_range[extra];
        ls.curves.push_back(rosenstein_lambda(series, ro));
        out.fit_ranges.push_back(ls.curves.back().fit_range);
      }
      const auto& primary = ls.curves.front();
      ls.lambda = primary.lambda_max;
      ls.stderr_ = primary.lambda_stderr;
      ls.lambda_g = config.model.g > 0.0 ? ls.lambda / config.model.g : ls.lambda;
      for (std::size_t i = 1; i < ls.curves.size(); ++i) {
        const double rel = std::abs(ls.curves[i].lambda_max - ls.lambda) /
                           std::max(std::abs(ls.lambda), 1e-300);
        ls.spread = std::max(ls.spread, rel);
      }
      if (primary.unreliable) {
        out.errors.push_back("lyapunov: only " + std::to_string(primary.valid_pairs) +
                             " valid neighbour pairs");
        out.verdict = Verdict::Failed;
        ok = false;
      } else {
        out.verdict = classify_curve(primary, rule);
      }
      out.lyapunov = std::move(ls);
    } catch (const std::exception& e) {
      record("lyapunov", e);
    }
    out.seconds["lyapunov"] = since(start);
  } else if (flags.lyapunov) {
    ok = false;
  }

  if (flags.recurrence) {
    const auto start = Clock::now();
    try {
      RecurrenceSummary rs;
      rs.density = invariant_density(series.view(), a.bin_width);
      const Cell cell = select_cell(rs.density, a.cell, series.view());
      out.cell = ExplicitCell{cell.lo, cell.hi, cell.closed_right};
      rs.report = recurrence_times(series, cell, RecurrenceOptions{a.collapse_runs});
      try {
        rs.fit = fit_return_distribution(rs.report);
      } catch (const InsufficientData& e) {
        rs.notes.push_back(e.what());
      }
      try {
        rs.successive = successive_return_test(rs.report);
      } catch (const InsufficientData& e) {
        rs.notes.push_back(e.what());
      }
      rs.gaussian = gaussian_fit(rs.density, series.view());
      out.recurrence = std::move(rs);
    } catch (const std::exception& e) {
      record("recurrence", e);
    }
    out.seconds["recurrence"] = since(start);
  }

  out.complete = ok;
  return out;
}

RunConfig pinned_config(const RunConfig& config, const AnalysisResult& r, double dt,
                        std::size_t steps) {
  RunConfig c = config;
  c.dt = dt;
  c.steps = steps;
  auto& a = c.analysis;
  if (r.spectrum) a.max_lag = r.max_lag;
  if (config.analyses.embed && r.d_emb > 0) {
    a.theiler = r.theiler;
    a.delay = r.delay;
    a.d_emb = r.d_emb;
  }
  if (!r.fit_ranges.empty()) a.fit_range = r.fit_ranges;
  if (r.cell) a.cell = *r.cell;
  return c;
}

std::vector<Table1Row> run_table1(const std::vector<RunConfig>& cases, const VerdictRule& rule,
                                  std::size_t parallel) {
  std::vector<Table1Row> rows(cases.size());
  auto run_one = [&](std::size_t i) {
    const auto& c = cases[i];
    Table1Row& row = rows[i];
    row.name = c.name;
    row.gamma_over_g = c.model.g > 0.0 ? c.model.gamma / c.model.g : INFINITY;
    row.state = c.state.kind == StateKind::Coherent ? "CS" : "PACS";
    row.m = c.state.m;
    row.nu = c.state.nu();
    try {
      const auto sim = simulate(c);
      const auto res = analyze(observable(sim, c), c, rule);
      if (res.lyapunov) {
        row.lambda = res.lyapunov->lambda;
        row.lambda_g = res.lyapunov->lambda_g;
        row.stderr_ = res.lyapunov->stderr_;
        const auto& curve = res.lyapunov->curves.front();
        row.saturated = curve.saturated;
        row.plateau_gap = curve.decorrelation_log - curve.plateau_log;
        row.late_growth = curve.late_growth;
      }
      row.verdict = res.verdict;
      if (!res.errors.empty()) row.error = res.errors.front();
      if (!res.lyapunov) row.verdict = Verdict::Failed;
    } catch (const std::exception& e) {
      row.verdict = Verdict::Failed;
      row.error = e.what();
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(parallel, 1, std::max<std::size_t>(1, cases.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) run_one(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) run_one(i);
      });
    }
  }
  return rows;
}

Table table1_table(const std::vector<Table1Row>& rows) {
  Table t;
  t.columns = {"gamma_over_g", "m",           "nu",          "lambda_max", "lambda_max_g",
               "lambda_stderr", "plateau_gap", "late_growth", "saturated"};
  t.tag_column = "case,state,verdict";
  for (const auto& r : rows) {
    t.rows.push_back({r.gamma_over_g, static_cast<double>(r.m), r.nu, r.lambda, r.lambda_g,
                      r.stderr_, r.plateau_gap, r.late_growth, r.saturated ? 1.0 : 0.0});
    t.tags.push_back(r.name + "," + r.state + "," + to_string(r.verdict));
  }
  return t;
}

Table spectrum_table(const PowerSpectrum& s, double g) {
  Table t;
  t.columns = {"f", "omega_over_g", "power", "power_db"};
  const auto w = s.angular_in_units_of(g > 0.0 ? g : 1.0);
  const double peak = *std::max_element(s.power.begin(), s.power.end());
  for (std::size_t i = 0; i < s.freqs.size(); ++i) {
    const double db = peak > 0.0 && s.power[i] > 0.0 ? 10.0 * std::log10(s.power[i] / peak)
                                                     : -INFINITY;
    t.rows.push_back({s.freqs[i], w[i], s.power[i], db});
  }
  t.metadata.emplace_back("taper", to_string(s.taper));
  t.metadata.emplace_back("max_lag", std::to_string(s.max_lag));
  return t;
}

Table ami_table(const std::vector<double>& ami) {
  Table t;
  t.columns = {"lag", "mutual_information"};
  for (std::size_t i = 0; i < ami.size(); ++i) t.rows.push_back({static_cast<double>(i), ami[i]});
  return t;
}

Table fnn_table(const FnnResult& fnn) {
  Table t;
  t.columns = {"dim", "false_fraction"};
  for (std::size_t i = 0; i < fnn.fractions.size(); ++i) {
    t.rows.push_back({static_cast<double>(i + 1), fnn.fractions[i]});
  }
  return t;
}

Table density_table(const InvariantDensity& d) {
  Table t;
  t.columns = {"lo", "hi", "count", "rho"};
  for (std::size_t b = 0; b < d.bins(); ++b) {
    t.rows.push_back({d.bin_edges[b], d.bin_edges[b + 1], static_cast<double>(d.counts[b]),
                      d.rho[b]});
  }
  return t;
}

Table return_time_table(const RecurrenceReport& r) {
  Table t;
  t.columns = {"tau", "tau_time", "count", "F"};
  const double n = static_cast<double>(r.taus.size());
  for (const auto& [tau, count] : r.histogram()) {
    t.rows.push_back({static_cast<double>(tau), static_cast<double>(tau) * r.dt,
                      static_cast<double>(count), static_cast<double>(count) / n});
  }
  return t;
}

ClassicalResult run_classical(const ClassicalConfig& config, const VerdictRule& rule) {
  ClassicalResult r;
  r.trajectory = integrate(config.start, config.params, config.integrator);
  IntegratorOptions lo = config.integrator;
  lo.steps = config.lyapunov_steps;
  r.exponents = classical_lyapunov(config.start, config.params, lo, config.reorth);
  r.h1 = r.trajectory.h1_series(config.params);
  RunConfig rc;
  rc.name = config.name;
  rc.model.g = config.params.g;
  rc.analyses.recurrence = false;
  rc.dt = r.h1.dt;
  rc.steps = std::max<std::size_t>(r.h1.size(), 2);
  r.h1_analysis = analyze(r.h1, rc, rule);
  return r;
}

}  // namespace kerr
