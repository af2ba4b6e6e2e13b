// kerr: simulate the Kerr-coupled field and run the ergodicity analyses.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kerr/config.hpp"
#include "kerr/error.hpp"
#include "kerr/fixtures.hpp"
#include "kerr/manifest.hpp"
#include "kerr/pipeline.hpp"
#include "kerr/series_io.hpp"

namespace fs = std::filesystem;

namespace {

// Command-line overrides of RunConfig keys.
struct Overrides {
  std::optional<double> omega, omega0, gamma, g, nu, dt, bin_width;
  std::optional<std::string> kind, cell, observable, output, fit_range;
  std::optional<unsigned> m;
  std::optional<std::size_t> steps, discard_prefix, theiler, delay, d_emb, kmax, max_lag, threads;
  bool paper_scale = false;
  bool entropy = false;

  void attach(CLI::App* app) {
    app->add_option("--omega", omega, "field frequency");
    app->add_option("--omega0", omega0, "atomic-oscillator frequency");
    app->add_option("--gamma", gamma, "Kerr strength");
    app->add_option("--g", g, "coupling");
    app->add_option("--kind", kind, "initial state: CS or PACS");
    app->add_option("--nu", nu, "|alpha|^2");
    app->add_option("--m", m, "photon-addition order");
    app->add_option("--dt", dt, "sample interval");
    app->add_option("--steps", steps, "number of samples");
    app->add_option("--discard-prefix", discard_prefix, "samples dropped before analysis");
    app->add_option("--bin-width", bin_width, "recurrence cell width");
    app->add_option("--cell", cell, "mode, median-support or explicit(lo,hi)");
    app->add_option("--theiler", theiler, "Theiler window (samples)");
    app->add_option("--delay", delay, "embedding delay (samples)");
    app->add_option("--d-emb", d_emb, "embedding dimension");
    app->add_option("--kmax", kmax, "Lyapunov evolution steps");
    app->add_option("--fit-range", fit_range, "Lyapunov fit window lo,hi");
    app->add_option("--max-lag", max_lag, "autocorrelation lags for the spectrum");
    app->add_option("--observable", observable, "mean_N or mean_b");
    app->add_option("--threads", threads, "worker threads for propagation");
    app->add_option("-o,--output", output, "output directory");
    app->add_flag("--paper-scale", paper_scale, "10^6 samples unless steps is set (minutes)");
    app->add_flag("--entropy", entropy, "also record the entanglement entropy");
  }

  void apply(kerr::RunConfig& c) const {
    if (omega) c.model.omega = *omega;
    if (omega0) c.model.omega0 = *omega0;
    if (gamma) c.model.gamma = *gamma;
    if (g) c.model.g = *g;
    if (kind || nu || m) {
      const auto k = kind.value_or(c.state.kind == kerr::StateKind::Coherent ? "CS" : "PACS");
      if (k != "CS" && k != "PACS") throw kerr::ConfigError("--kind must be CS or PACS");
      const auto sk = k == "CS" ? kerr::StateKind::Coherent : kerr::StateKind::PhotonAdded;
      c.state = kerr::StateSpec::from_nu(sk, nu.value_or(c.state.nu()),
                                         sk == kerr::StateKind::Coherent ? 0 : m.value_or(c.state.m));
    }
    if (dt) c.dt = *dt;
    if (steps) c.steps = *steps;
    if (discard_prefix) c.discard_prefix = *discard_prefix;
    if (bin_width) c.analysis.bin_width = *bin_width;
    if (cell) c.analysis.cell = kerr::cell_policy_from_string(*cell);
    if (theiler) c.analysis.theiler = *theiler;
    if (delay) c.analysis.delay = *delay;
    if (d_emb) c.analysis.d_emb = *d_emb;
    if (kmax) c.analysis.kmax = *kmax;
    if (fit_range) {
      std::size_t lo = 0, hi = 0;
      if (std::sscanf(fit_range->c_str(), "%zu,%zu", &lo, &hi) != 2) {
        throw kerr::ConfigError("--fit-range expects lo,hi");
      }
      c.analysis.fit_range = {{lo, hi}};
    }
    if (max_lag) c.analysis.max_lag = *max_lag;
    if (observable) c.analysis.observable = *observable;
    if (threads) c.threads = *threads;
    if (output) c.output = *output;
    if (paper_scale) c.paper_scale = true;
    if (entropy) c.analyses.entropy = true;
    c.validate();
  }
};

kerr::RunConfig load_run_config(const std::string& path, const Overrides& o) {
  kerr::RunConfig c = path.empty() ? kerr::RunConfig{} : kerr::load_config(path);
  o.apply(c);
  return c;
}

void write_table(const fs::path& path, const kerr::Table& t) {
  kerr::write_text_atomic(path, t.to_csv());
}

// Writes the analysis tables; returns file digests.
std::map<std::string, std::string> write_analysis(const fs::path& dir, const kerr::AnalysisResult& r,
                                                  double g) {
  std::map<std::string, std::string> files;
  auto put = [&](const std::string& name, const kerr::Table& t) {
    write_table(dir / name, t);
    files[name] = kerr::file_digest(dir / name);
  };
  if (r.spectrum) put("spectrum.csv", kerr::spectrum_table(*r.spectrum, g));
  if (!r.ami.empty()) put("ami.csv", kerr::ami_table(r.ami));
  if (r.fnn) put("fnn.csv", kerr::fnn_table(*r.fnn));
  if (r.lyapunov) put("lyapunov.csv", kerr::curve_for_plot(r.lyapunov->curves, g));
  if (r.recurrence) {
    put("density.csv", kerr::density_table(r.recurrence->density));
    put("return_times.csv", kerr::return_time_table(r.recurrence->report));
  }
  return files;
}

void print_summary(const std::string& name, const kerr::AnalysisResult& r) {
  std::printf("%s: verdict=%s", name.c_str(), kerr::to_string(r.verdict).c_str());
  if (r.lyapunov) {
    std::printf(" lambda_max=%.6g +- %.3g (units of g: %.6g) d_emb=%zu delay=%zu theiler=%zu",
                r.lyapunov->lambda, r.lyapunov->stderr_, r.lyapunov->lambda_g, r.d_emb, r.delay,
                r.theiler);
    const auto& c = r.lyapunov->curves.front();
    std::printf(" saturated=%s (gap %.3g, late growth %.3g)", c.saturated ? "yes" : "no",
                c.decorrelation_log - c.plateau_log, c.late_growth);
  }
  if (r.spectrum) std::printf(" peaks=%zu", r.peak_count);
  if (r.recurrence) {
    const auto& rs = *r.recurrence;
    std::printf(" mu=%.4g kac=%.4f", rs.report.mu, rs.report.kac_ratio);
    if (rs.fit) std::printf(" returns=%s", kerr::to_string(rs.fit->verdict).c_str());
    if (rs.successive) std::printf(" erlang2=%s", rs.successive->accepted ? "accepted" : "rejected");
  }
  std::printf("\n");
  for (const auto& e : r.errors) std::fprintf(stderr, "  error: %s\n", e.c_str());
}

int cmd_simulate(const std::string& config_path, const Overrides& o, bool analyze_too, bool csv) {
  const auto config = load_run_config(config_path, o);
  const fs::path dir = config.output;
  fs::create_directories(dir);
  const auto sim = kerr::simulate(config);
  std::map<std::string, std::string> files;
  auto put_series = [&](const std::string& stem, const kerr::TimeSeries& s) {
    kerr::write_series(dir / (stem + ".series"), s);
    files[stem + ".series"] = kerr::file_digest(dir / (stem + ".series"));
    if (csv) kerr::write_text_atomic(dir / (stem + ".csv"), kerr::series_to_csv(s));
  };
  put_series("mean_N", sim.observables.mean_N);
  put_series("mean_b", sim.observables.mean_b);
  if (sim.observables.entropy) put_series("entropy", *sim.observables.entropy);
  std::printf("%s: %zu samples, nmax=%zu, conservation_residual=%.3e (%.2f s)\n",
              config.name.c_str(), sim.observables.mean_N.size(), sim.nmax, sim.residual,
              sim.seconds);

  kerr::RunManifest m;
  m.simulation = &sim;
  m.seconds["simulate"] = sim.seconds;
  std::optional<kerr::AnalysisResult> ana;
  int rc = 0;
  if (analyze_too) {
    ana = kerr::analyze(kerr::observable(sim, config), config);
    for (const auto& [k, v] : write_analysis(dir, *ana, config.model.g)) files[k] = v;
    for (const auto& [k, v] : ana->seconds) m.seconds[k] = v;
    m.analysis = &*ana;
    m.config = kerr::pinned_config(config, *ana, config.resolved_dt(), config.resolved_steps());
    print_summary(config.name, *ana);
    if (!ana->complete) rc = 1;
  } else {
    m.config = config;
    m.config.dt = config.resolved_dt();
    m.config.steps = config.resolved_steps();
  }
  m.files = files;
  kerr::write_text_atomic(dir / "manifest.yaml", kerr::render_manifest(m));
  return rc;
}

int cmd_analyze(const std::string& series_path, const std::string& config_path,
                const Overrides& o) {
  const auto series = kerr::read_series(series_path);
  auto config = load_run_config(config_path, o);
  // The series fixes dt and length.
  config.dt = series.dt;
  config.steps = series.size();
  config.validate();
  const fs::path dir = config.output;
  fs::create_directories(dir);
  const auto r = kerr::analyze(series, config);
  kerr::RunManifest m;
  m.analysis = &r;
  m.files = write_analysis(dir, r, config.model.g);
  m.files["input"] = kerr::file_digest(series_path);
  m.seconds = r.seconds;
  m.config = kerr::pinned_config(config, r, series.dt, series.size());
  kerr::write_text_atomic(dir / "manifest.yaml", kerr::render_manifest(m));
  print_summary(series.label.empty() ? config.name : series.label, r);
  return r.complete ? 0 : 1;
}

int cmd_table1(const std::string& config_path, const Overrides& o, std::size_t parallel) {
  auto cases = config_path.empty() ? kerr::default_table_grid(o.paper_scale)
                                   : kerr::load_table_config(config_path);
  for (auto& c : cases) {
    if (o.paper_scale) c.paper_scale = true;
    if (o.steps) c.steps = *o.steps;
    if (o.threads) c.threads = *o.threads;
  }
  const fs::path dir = o.output.value_or("out");
  fs::create_directories(dir);
  const auto rows = kerr::run_table1(cases, {}, parallel);
  std::printf("%-20s %10s %5s %3s %6s %12s %12s %10s %5s  %s\n", "case", "gamma/g", "state", "m",
              "nu", "lambda_max", "lambda/g", "stderr", "sat", "verdict");
  bool all = true;
  for (const auto& r : rows) {
    std::printf("%-20s %10.3g %5s %3u %6.3g %12.5g %12.5g %10.3g %5s  %s\n", r.name.c_str(),
                r.gamma_over_g, r.state.c_str(), r.m, r.nu, r.lambda, r.lambda_g, r.stderr_,
                r.saturated ? "yes" : "no", kerr::to_string(r.verdict).c_str());
    if (!r.error.empty()) std::fprintf(stderr, "  %s: %s\n", r.name.c_str(), r.error.c_str());
    if (r.verdict == kerr::Verdict::Failed) all = false;
  }
  auto table = kerr::table1_table(rows);
  const kerr::VerdictRule rule;
  table.metadata.emplace_back("regular_rule", "|lambda| < " + std::to_string(rule.sigmas) +
                                                  " stderr and |lambda| < " +
                                                  std::to_string(rule.max_abs));
  table.metadata.emplace_back("chaotic_rule", "lambda > " + std::to_string(rule.sigmas) + " stderr");
  table.metadata.emplace_back("saturation_gate",
                              "unsaturated divergence curves are classified regular");
  write_table(dir / "table1.csv", table);
  return all ? 0 : 1;
}

int cmd_classical(const std::string& config_path, const std::optional<std::string>& output) {
  auto config = config_path.empty() ? kerr::ClassicalConfig{}
                                    : kerr::load_classical_config(config_path);
  if (output) config.output = *output;
  const fs::path dir = config.output;
  fs::create_directories(dir);
  const auto r = kerr::run_classical(config);
  std::map<std::string, std::string> files;
  kerr::write_series(dir / "h1.series", r.h1);
  files["h1.series"] = kerr::file_digest(dir / "h1.series");
  kerr::Table traj;
  traj.columns = {"t", "x", "px", "y", "py", "H", "N_tot"};
  for (std::size_t i = 0; i < r.trajectory.points.size(); ++i) {
    const auto& p = r.trajectory.points[i];
    traj.rows.push_back({static_cast<double>(i) * r.trajectory.dt, p.x, p.px, p.y, p.py,
                         kerr::h_classical(p, config.params),
                         kerr::n_tot_classical(p, config.params)});
  }
  write_table(dir / "trajectory.csv", traj);
  files["trajectory.csv"] = kerr::file_digest(dir / "trajectory.csv");
  for (const auto& [k, v] : write_analysis(dir, r.h1_analysis, config.params.g)) files[k] = v;
  kerr::write_text_atomic(dir / "manifest.yaml", kerr::render_classical_manifest(config, r, files));
  const auto& e = r.exponents.exponents;
  std::printf("H drift %.3e, N_tot drift %.3e, exponents [%.3e %.3e %.3e %.3e] sum %.3e\n",
              r.trajectory.max_h_drift, r.trajectory.max_n_drift, e[0], e[1], e[2], e[3],
              r.exponents.sum);
  print_summary("H1", r.h1_analysis);
  return r.h1_analysis.complete ? 0 : 1;
}

int cmd_fixtures(const std::string& kind, std::size_t length, std::uint64_t seed,
                 const std::string& output, bool csv) {
  const auto s = kerr::make_fixture(kind, length, seed);
  kerr::write_series(output, s);
  if (csv) kerr::write_text_atomic(output + ".csv", kerr::series_to_csv(s));
  std::printf("wrote %s (%zu samples, dt=%g)\n", output.c_str(), s.size(), s.dt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr-medium field simulation and ergodicity analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kerr::version_string());

  std::string config_path;
  std::string series_path;
  Overrides overrides;
  bool analyze_too = false;
  bool csv = false;

  auto* sim = app.add_subcommand("simulate", "propagate and write <N>, <b^dag b> series");
  sim->add_option("-c,--config", config_path, "YAML run config or manifest");
  sim->add_flag("--analyze", analyze_too, "run the configured analyses on the result");
  sim->add_flag("--csv", csv, "also write lossless CSV copies");
  overrides.attach(sim);

  auto* ana = app.add_subcommand("analyze", "spectrum, embedding, Lyapunov and recurrence analysis");
  ana->add_option("series", series_path, "binary series file")->required()->check(CLI::ExistingFile);
  ana->add_option("-c,--config", config_path, "YAML run config or manifest");
  Overrides ana_overrides;
  ana_overrides.attach(ana);

  std::size_t parallel = 1;
  auto* tab = app.add_subcommand("table1", "regime table over the (gamma/g, state) grid");
  tab->add_option("-c,--config", config_path, "YAML table config (base + cases)");
  tab->add_option("-j,--parallel", parallel, "cases run concurrently");
  Overrides tab_overrides;
  tab->add_flag("--paper-scale", tab_overrides.paper_scale, "10^6 samples per case");
  tab->add_option("--steps", tab_overrides.steps, "samples per case");
  tab->add_option("--threads", tab_overrides.threads, "propagation threads per case");
  tab->add_option("-o,--output", tab_overrides.output, "output directory");

  std::optional<std::string> classical_output;
  auto* cls = app.add_subcommand("classical", "classical-limit trajectory, invariants and exponents");
  cls->add_option("-c,--config", config_path, "YAML classical config");
  cls->add_option("-o,--output", classical_output, "output directory");

  std::string fixture_kind;
  std::size_t fixture_length = 100'000;
  std::uint64_t seed = 1;
  std::string fixture_output;
  auto* fix = app.add_subcommand("fixtures", "write a synthetic test signal");
  fix->add_option("kind", fixture_kind, "sine, two-tone, logistic or iid")
      ->required()
      ->check(CLI::IsMember({"sine", "two-tone", "logistic", "iid"}));
  fix->add_option("-n,--length", fixture_length, "samples");
  fix->add_option("--seed", seed, "RNG seed (iid)");
  fix->add_option("-o,--output", fixture_output, "series file")->required();
  fix->add_flag("--csv", csv, "also write a CSV copy");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config_path, overrides, analyze_too, csv);
    if (*ana) return cmd_analyze(series_path, config_path, ana_overrides);
    if (*tab) return cmd_table1(config_path, tab_overrides, parallel);
    if (*cls) return cmd_classical(config_path, classical_output);
    if (*fix) return cmd_fixtures(fixture_kind, fixture_length, seed, fixture_output, csv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kerr: %s\n", e.what());
    return 2;
  }
  return 2;
}
