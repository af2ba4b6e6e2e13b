#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kerr/classical.hpp"
#include "kerr/model.hpp"
#include "kerr/recurrence.hpp"
#include "kerr/spectrum.hpp"
#include "kerr/states.hpp"

namespace kerr {

struct AnalysisFlags {
  bool spectrum = true;
  bool embed = true;
  bool lyapunov = true;
  bool recurrence = true;
  bool entropy = false;
};

/// Analysis parameters; unset optionals are selected automatically and
/// pinned in the run manifest.
struct AnalysisParams {
  std::string observable = "mean_N";  // or "mean_b"
  std::optional<std::size_t> max_lag;
  Taper taper = Taper::Hann;
  double peak_threshold_db = 60.0;
  std::optional<std::size_t> delay;
  std::size_t ami_max_lag = 200;
  std::optional<std::size_t> d_emb;
  std::size_t max_dim = 10;
  double fnn_rtol = 15.0;
  double fnn_atol = 2.0;
  std::optional<std::size_t> theiler;
  std::size_t kmax = 500;
  std::size_t max_refs = 5000;
  /// Empty: automatic. One window: used for every dimension. Otherwise one
  /// window per dimension d_emb, d_emb + 1, ...
  std::vector<std::pair<std::size_t, std::size_t>> fit_range;
  std::size_t extra_dims = 5;  // robustness check over d_emb + 1 .. d_emb + extra_dims
  double bin_width = kDefaultCellWidth;
  CellPolicy cell = ModeCell{};
  bool collapse_runs = false;
};

struct RunConfig {
  std::string name = "run";
  ModelParams model;
  StateSpec state;
  double eps_trunc = kDefaultTruncation;
  std::optional<double> dt;
  std::optional<std::size_t> steps;
  std::size_t discard_prefix = 0;
  bool paper_scale = false;
  std::size_t entropy_stride = 100;
  std::size_t threads = 1;
  AnalysisFlags analyses;
  AnalysisParams analysis;
  std::filesystem::path output = "out";

  /// dt = 1e-2 when gamma/g < 0.1, otherwise 1e-1, unless set.
  double resolved_dt() const;
  /// 10^5 by default, 10^6 with paper_scale, unless set.
  std::size_t resolved_steps() const;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

inline constexpr std::size_t kDeskSteps = 100'000;
inline constexpr std::size_t kPaperSteps = 1'000'000;

/// Parses a YAML run config. A run manifest is accepted too: its `config`
/// section is used. Errors carry `source:line:` prefixes.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Canonical YAML rendering; parse_config(to_yaml(c)) == c.
std::string to_yaml(const RunConfig& config);

/// Cases of a regime sweep: every entry of `cases` is deep-merged over `base`.
std::vector<RunConfig> parse_table_config(const std::string& text,
                                          const std::string& source = "<table>");
std::vector<RunConfig> load_table_config(const std::filesystem::path& path);

/// The eight-case regime grid (gamma/g in {1e-2, 5}).
std::vector<RunConfig> default_table_grid(bool paper_scale = false);

struct ClassicalConfig {
  ClassicalParams params{1.0, 1.0, 1.0, 1.0, 0.5, 0.2};
  PhasePoint start{1.0, 0.0, 0.5, 0.3};
  IntegratorOptions integrator{0.01, 1'000'000, 10, 1e-8};
  std::size_t reorth = 10;
  std::size_t lyapunov_steps = 1'000'000;
  std::filesystem::path output = "out";
  std::string name = "classical";
};

ClassicalConfig parse_classical_config(const std::string& text,
                                       const std::string& source = "<classical>");
ClassicalConfig load_classical_config(const std::filesystem::path& path);
std::string to_yaml(const ClassicalConfig& config);

}  // namespace kerr
