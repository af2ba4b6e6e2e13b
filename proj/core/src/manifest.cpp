#include "kerr/manifest.hpp"

#include <fstream>
#include <iterator>

#include <yaml-cpp/yaml.h>

#include "kerr/error.hpp"
#include "kerr/fingerprint.hpp"

namespace kerr {

std::string version_string() { return KERR_VERSION; }

namespace {

YAML::Node window_node(const std::pair<std::size_t, std::size_t>& w) {
  YAML::Node n(YAML::NodeType::Sequence);
  n.SetStyle(YAML::EmitterStyle::Flow);
  n.push_back(w.first);
  n.push_back(w.second);
  return n;
}

YAML::Node results_node(const AnalysisResult& r) {
  YAML::Node n;
  n["samples"] = r.samples;
  n["dt"] = r.dt;
  if (r.spectrum) {
    n["spectrum"]["max_lag"] = r.max_lag;
    n["spectrum"]["peak_count"] = r.peak_count;
    n["spectrum"]["dominant_frequency"] = r.dominant_frequency;
    n["spectrum"]["degenerate"] = r.spectrum->degenerate;
  }
  if (r.d_emb > 0) {
    n["embedding"]["theiler"] = r.theiler;
    n["embedding"]["delay"] = r.delay;
    n["embedding"]["d_emb"] = r.d_emb;
  }
  if (r.lyapunov) {
    const auto& l = *r.lyapunov;
    YAML::Node ln;
    ln["lambda_max"] = l.lambda;
    ln["lambda_max_units_of_g"] = l.lambda_g;
    ln["lambda_stderr"] = l.stderr_;
    ln["dimension_spread"] = l.spread;
    for (const auto& c : l.curves) {
      YAML::Node d;
      d["dim"] = c.dim;
      d["lambda_max"] = c.lambda_max;
      d["slope_per_step"] = c.slope_per_step;
      d["lambda_stderr"] = c.lambda_stderr;
      d["fit_range"] = window_node(c.fit_range);
      d["fit_r2"] = c.fit_r2;
      d["saturation_k"] = c.saturation_k;
      d["plateau_gap"] = c.decorrelation_log - c.plateau_log;
      d["late_growth"] = c.late_growth;
      d["saturated"] = c.saturated;
      d["valid_pairs"] = c.valid_pairs;
      ln["per_dimension"].push_back(d);
    }
    n["lyapunov"] = ln;
  }
  if (r.recurrence) {
    const auto& rs = *r.recurrence;
    YAML::Node rn;
    rn["cell"] = describe(CellPolicy{ExplicitCell{rs.report.cell.lo, rs.report.cell.hi,
                                                  rs.report.cell.closed_right}});
    rn["mu"] = rs.report.mu;
    rn["visits"] = rs.report.visits;
    rn["mean_tau_samples"] = rs.report.mean_tau;
    rn["mean_tau_time"] = rs.report.mean_tau_time;
    rn["kac_ratio"] = rs.report.kac_ratio;
    if (rs.fit) {
      rn["return_law"] = to_string(rs.fit->verdict);
      rn["ks_statistic"] = rs.fit->ks_statistic;
      rn["ks_pvalue"] = rs.fit->ks_pvalue;
      rn["top10_mass"] = rs.fit->top_mass;
    }
    if (rs.successive) {
      rn["erlang2_accepted"] = rs.successive->accepted;
      rn["erlang2_ks_pvalue"] = rs.successive->ks_pvalue;
      rn["serial_correlation"] = rs.successive->serial_correlation;
    }
    if (rs.gaussian) {
      rn["gaussian_r2"] = rs.gaussian->r2;
      rn["jarque_bera"] = rs.gaussian->jarque_bera;
    }
    for (const auto& note : rs.notes) rn["notes"].push_back(note);
    n["recurrence"] = rn;
  }
  n["verdict"] = to_string(r.verdict);
  n["complete"] = r.complete;
  for (const auto& e : r.errors) n["errors"].push_back(e);
  return n;
}

std::string emit(const YAML::Node& root) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << root;
  return std::string(e.c_str()) + "\n";
}

}  // namespace

std::string render_manifest(const RunManifest& m) {
  YAML::Node root;
  root["kind"] = "run-manifest";
  root["version"] = version_string();
  root["config"] = YAML::Load(to_yaml(m.config));
  root["fingerprint"] = to_hex(fingerprint(m.config.model, m.config.state));
  if (m.analysis != nullptr) {
    root["verdict_rule"]["sigmas"] = m.analysis->rule.sigmas;
    root["verdict_rule"]["max_abs"] = m.analysis->rule.max_abs;
    root["verdict_rule"]["require_saturation"] = m.analysis->rule.require_saturation;
  }
  if (m.simulation != nullptr) {
    const auto& s = *m.simulation;
    root["simulation"]["nmax"] = s.nmax;
    root["simulation"]["norm_deficit"] = s.norm_deficit;
    root["simulation"]["conservation_residual"] = s.residual;
    root["simulation"]["samples"] = s.observables.mean_N.size();
  }
  if (m.analysis != nullptr) root["results"] = results_node(*m.analysis);
  for (const auto& [name, digest] : m.files) root["files"][name] = digest;
  for (const auto& [name, secs] : m.seconds) root["seconds"][name] = secs;
  return emit(root);
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return to_hex(sha256(bytes));
}

std::string render_classical_manifest(const ClassicalConfig& config, const ClassicalResult& r,
                                      const std::map<std::string, std::string>& files) {
  YAML::Node root;
  root["kind"] = "classical-manifest";
  root["version"] = version_string();
  root["config"] = YAML::Load(to_yaml(config));
  root["invariants"]["h0"] = r.trajectory.h0;
  root["invariants"]["n_tot0"] = r.trajectory.n0;
  root["invariants"]["max_relative_h_drift"] = r.trajectory.max_h_drift;
  root["invariants"]["max_relative_n_tot_drift"] = r.trajectory.max_n_drift;
  root["invariants"]["max_radius"] = r.trajectory.max_radius;
  for (double e : r.exponents.exponents) root["lyapunov"]["exponents"].push_back(e);
  root["lyapunov"]["sum"] = r.exponents.sum;
  root["lyapunov"]["time"] = r.exponents.time;
  root["h1_analysis"] = results_node(r.h1_analysis);
  for (const auto& [name, digest] : files) root["files"][name] = digest;
  return emit(root);
}

}  // namespace kerr
