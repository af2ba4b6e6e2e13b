#include "kerr/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "kerr/error.hpp"

namespace kerr {

double RunConfig::resolved_dt() const {
  if (dt) return *dt;
  const bool weak = model.g > 0.0 && model.gamma / model.g < 0.1;
  return weak ? 1e-2 : 1e-1;
}

std::size_t RunConfig::resolved_steps() const {
  if (steps) return *steps;
  return paper_scale ? kPaperSteps : kDeskSteps;
}

void RunConfig::validate() const {
  auto fail = [&](const std::string& msg) { throw ConfigError(name + ": " + msg); };
  try {
    model.validate();
    state.validate();
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
  if (!(eps_trunc > 0.0) || eps_trunc > 1e-6) fail("eps_trunc must lie in (0, 1e-6]");
  if (!(resolved_dt() > 0.0) || !std::isfinite(resolved_dt())) fail("dt must be > 0");
  if (resolved_steps() < 2) fail("steps must be >= 2");
  if (discard_prefix + 2 > resolved_steps()) fail("discard_prefix leaves fewer than 2 samples");
  if (entropy_stride == 0) fail("entropy_stride must be >= 1");
  if (threads == 0) fail("threads must be >= 1");
  if (output.empty()) fail("output must be non-empty");
  if (analyses.lyapunov && !analyses.embed) fail("analyses.lyapunov requires analyses.embed");
  const auto& a = analysis;
  if (a.observable != "mean_N" && a.observable != "mean_b") {
    fail("observable must be mean_N or mean_b");
  }
  if (a.delay && *a.delay == 0) fail("delay must be >= 1");
  if (a.d_emb && *a.d_emb == 0) fail("d_emb must be >= 1");
  if (a.max_dim < 2) fail("max_dim must be >= 2");
  if (a.kmax < 2) fail("kmax must be >= 2");
  if (a.max_refs == 0) fail("max_refs must be >= 1");
  for (const auto& [lo, hi] : a.fit_range) {
    if (lo >= hi) fail("fit_range must satisfy lo < hi");
    if (hi > a.kmax) fail("fit_range exceeds kmax");
  }
  if (a.fit_range.size() > 1 && a.fit_range.size() != a.extra_dims + 1) {
    fail("fit_range lists " + std::to_string(a.fit_range.size()) + " windows; expected 1 or " +
         std::to_string(a.extra_dims + 1));
  }
  if (!(a.bin_width > 0.0)) fail("bin_width must be > 0");
  if (!(a.peak_threshold_db > 0.0)) fail("peak_threshold_db must be > 0");
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const auto mark = node.Mark();
    if (mark.is_null()) throw ConfigError(source_ + ": " + msg);
    throw ConfigError(source_ + ":" + std::to_string(mark.line + 1) + ": " + msg);
  }

  void require_map(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allow_keys(const YAML::Node& node, std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  template <class T>
  T as(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, "'" + key + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "cannot parse '" + key + "' from '" + node.Scalar() + "'");
    }
  }

  template <class T>
  void read(const YAML::Node& map, const char* key, T& out) const {
    if (const auto n = map[key]) out = as<T>(n, key);
  }

  template <class T>
  void read(const YAML::Node& map, const char* key, std::optional<T>& out) const {
    if (const auto n = map[key]) {
      if (n.IsNull() || (n.IsScalar() && n.Scalar() == "auto")) {
        out.reset();
      } else {
        out = as<T>(n, key);
      }
    }
  }

  void read_size(const YAML::Node& map, const char* key, std::size_t& out) const {
    if (const auto n = map[key]) out = non_negative(n, key);
  }

  void read_size(const YAML::Node& map, const char* key, std::optional<std::size_t>& out) const {
    if (const auto n = map[key]) {
      if (n.IsNull() || (n.IsScalar() && n.Scalar() == "auto")) {
        out.reset();
      } else {
        out = non_negative(n, key);
      }
    }
  }

  std::size_t non_negative(const YAML::Node& n, const std::string& key) const {
    const auto v = as<long long>(n, key);
    if (v < 0) fail(n, "'" + key + "' must be >= 0");
    return static_cast<std::size_t>(v);
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

StateSpec read_state(const Reader& r, const YAML::Node& n) {
  r.require_map(n, "state");
  r.allow_keys(n, {"kind", "alpha", "nu", "phase", "m"});
  StateSpec s;
  std::string kind = "CS";
  r.read(n, "kind", kind);
  if (kind == "CS") {
    s.kind = StateKind::Coherent;
  } else if (kind == "PACS") {
    s.kind = StateKind::PhotonAdded;
  } else {
    r.fail(n["kind"], "state.kind must be CS or PACS");
  }
  long long m = 0;
  r.read(n, "m", m);
  if (m < 0) r.fail(n["m"], "state.m must be >= 0");
  if (s.kind == StateKind::Coherent && m != 0) r.fail(n["m"], "state.m must be 0 for CS");
  s.m = static_cast<unsigned>(m);
  const auto alpha = n["alpha"];
  const auto nu = n["nu"];
  if (alpha && nu) r.fail(nu, "give either state.alpha or state.nu, not both");
  if (alpha) {
    if (n["phase"]) r.fail(n["phase"], "state.phase only applies with state.nu");
    if (alpha.IsSequence()) {
      if (alpha.size() != 2) r.fail(alpha, "state.alpha must be [re, im]");
      s.alpha = {r.as<double>(alpha[0], "alpha"), r.as<double>(alpha[1], "alpha")};
    } else {
      s.alpha = {r.as<double>(alpha, "alpha"), 0.0};
    }
  } else {
    double v = 0.0;
    double phase = 0.0;
    r.read(n, "nu", v);
    r.read(n, "phase", phase);
    if (!(v >= 0.0)) r.fail(nu, "state.nu must be >= 0");
    s.alpha = std::polar(std::sqrt(v), phase);
  }
  return s;
}

ModelParams read_model(const Reader& r, const YAML::Node& n) {
  r.require_map(n, "model");
  r.allow_keys(n, {"omega", "omega0", "gamma", "g"});
  ModelParams p;
  r.read(n, "omega", p.omega);
  r.read(n, "omega0", p.omega0);
  r.read(n, "gamma", p.gamma);
  r.read(n, "g", p.g);
  return p;
}

void read_analyses(const Reader& r, const YAML::Node& n, AnalysisFlags& f) {
  r.require_map(n, "analyses");
  r.allow_keys(n, {"spectrum", "embed", "lyapunov", "recurrence", "entropy"});
  r.read(n, "spectrum", f.spectrum);
  r.read(n, "embed", f.embed);
  r.read(n, "lyapunov", f.lyapunov);
  r.read(n, "recurrence", f.recurrence);
  r.read(n, "entropy", f.entropy);
}

RunConfig read_run(const Reader& r, const YAML::Node& root) {
  r.require_map(root, "config");
  r.allow_keys(root, {"name", "model", "state", "eps_trunc", "dt", "steps", "discard_prefix",
                      "paper_scale", "entropy_stride", "threads", "analyses", "output",
                      "observable", "max_lag", "taper", "peak_threshold_db", "delay",
                      "ami_max_lag", "d_emb", "max_dim", "fnn_rtol", "fnn_atol", "theiler",
                      "kmax", "max_refs", "fit_range", "extra_dims", "bin_width", "cell",
                      "collapse_runs"});
  RunConfig c;
  r.read(root, "name", c.name);
  if (const auto n = root["model"]) c.model = read_model(r, n);
  if (const auto n = root["state"]) c.state = read_state(r, n);
  r.read(root, "eps_trunc", c.eps_trunc);
  r.read(root, "dt", c.dt);
  r.read_size(root, "steps", c.steps);
  r.read_size(root, "discard_prefix", c.discard_prefix);
  r.read(root, "paper_scale", c.paper_scale);
  r.read_size(root, "entropy_stride", c.entropy_stride);
  r.read_size(root, "threads", c.threads);
  if (const auto n = root["analyses"]) read_analyses(r, n, c.analyses);
  if (const auto n = root["output"]) c.output = r.as<std::string>(n, "output");

  auto& a = c.analysis;
  r.read(root, "observable", a.observable);
  r.read_size(root, "max_lag", a.max_lag);
  if (const auto n = root["taper"]) {
    try {
      a.taper = taper_from_string(r.as<std::string>(n, "taper"));
    } catch (const InvalidArgument& e) {
      r.fail(n, e.what());
    }
  }
  r.read(root, "peak_threshold_db", a.peak_threshold_db);
  r.read_size(root, "delay", a.delay);
  r.read_size(root, "ami_max_lag", a.ami_max_lag);
  r.read_size(root, "d_emb", a.d_emb);
  r.read_size(root, "max_dim", a.max_dim);
  r.read(root, "fnn_rtol", a.fnn_rtol);
  r.read(root, "fnn_atol", a.fnn_atol);
  r.read_size(root, "theiler", a.theiler);
  r.read_size(root, "kmax", a.kmax);
  r.read_size(root, "max_refs", a.max_refs);
  if (const auto n = root["fit_range"]) {
    a.fit_range.clear();
    auto window = [&](const YAML::Node& w) {
      if (!w.IsSequence() || w.size() != 2) r.fail(w, "fit_range windows must be [lo, hi]");
      return std::make_pair(r.non_negative(w[0], "fit_range"), r.non_negative(w[1], "fit_range"));
    };
    if (n.IsNull() || (n.IsScalar() && n.Scalar() == "auto")) {
      // automatic
    } else if (n.IsSequence() && n.size() > 0 && n[0].IsSequence()) {
      for (const auto& w : n) a.fit_range.push_back(window(w));
    } else {
      a.fit_range.push_back(window(n));
    }
  }
  r.read_size(root, "extra_dims", a.extra_dims);
  r.read(root, "bin_width", a.bin_width);
  if (const auto n = root["cell"]) {
    try {
      a.cell = cell_policy_from_string(r.as<std::string>(n, "cell"));
    } catch (const InvalidArgument& e) {
      r.fail(n, e.what());
    }
  }
  r.read(root, "collapse_runs", a.collapse_runs);

  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(r.source() + ": " + e.what());
  }
  return c;
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Deep merge: maps merge key by key, everything else is replaced.
YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!base || !base.IsMap() || !over.IsMap()) return over;
  YAML::Node out(YAML::NodeType::Map);
  for (const auto& kv : base) out[kv.first.as<std::string>()] = kv.second;
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    out[key] = out[key] ? merge(out[key], kv.second) : kv.second;
  }
  return out;
}

template <class T>
void emit_optional(YAML::Emitter& e, const char* key, const std::optional<T>& v) {
  e << YAML::Key << key << YAML::Value;
  if (v) {
    e << *v;
  } else {
    e << "auto";
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root = load_yaml(text, source);
  if (root.IsMap() && root["config"]) root = root["config"];
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  return read_run(r, root);
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(slurp(path), path.string());
}

std::string to_yaml(const RunConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << c.name;
  e << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "omega" << YAML::Value << c.model.omega;
  e << YAML::Key << "omega0" << YAML::Value << c.model.omega0;
  e << YAML::Key << "gamma" << YAML::Value << c.model.gamma;
  e << YAML::Key << "g" << YAML::Value << c.model.g;
  e << YAML::EndMap;
  e << YAML::Key << "state" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value
    << (c.state.kind == StateKind::Coherent ? "CS" : "PACS");
  e << YAML::Key << "alpha" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.state.alpha.real()
    << c.state.alpha.imag() << YAML::EndSeq;
  e << YAML::Key << "m" << YAML::Value << c.state.m;
  e << YAML::EndMap;
  e << YAML::Key << "eps_trunc" << YAML::Value << c.eps_trunc;
  emit_optional(e, "dt", c.dt);
  emit_optional(e, "steps", c.steps);
  e << YAML::Key << "discard_prefix" << YAML::Value << c.discard_prefix;
  e << YAML::Key << "paper_scale" << YAML::Value << c.paper_scale;
  e << YAML::Key << "entropy_stride" << YAML::Value << c.entropy_stride;
  e << YAML::Key << "threads" << YAML::Value << c.threads;
  e << YAML::Key << "analyses" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "spectrum" << YAML::Value << c.analyses.spectrum;
  e << YAML::Key << "embed" << YAML::Value << c.analyses.embed;
  e << YAML::Key << "lyapunov" << YAML::Value << c.analyses.lyapunov;
  e << YAML::Key << "recurrence" << YAML::Value << c.analyses.recurrence;
  e << YAML::Key << "entropy" << YAML::Value << c.analyses.entropy;
  e << YAML::EndMap;
  e << YAML::Key << "output" << YAML::Value << c.output.string();
  const auto& a = c.analysis;
  e << YAML::Key << "observable" << YAML::Value << a.observable;
  emit_optional(e, "max_lag", a.max_lag);
  e << YAML::Key << "taper" << YAML::Value << to_string(a.taper);
  e << YAML::Key << "peak_threshold_db" << YAML::Value << a.peak_threshold_db;
  emit_optional(e, "delay", a.delay);
  e << YAML::Key << "ami_max_lag" << YAML::Value << a.ami_max_lag;
  emit_optional(e, "d_emb", a.d_emb);
  e << YAML::Key << "max_dim" << YAML::Value << a.max_dim;
  e << YAML::Key << "fnn_rtol" << YAML::Value << a.fnn_rtol;
  e << YAML::Key << "fnn_atol" << YAML::Value << a.fnn_atol;
  emit_optional(e, "theiler", a.theiler);
  e << YAML::Key << "kmax" << YAML::Value << a.kmax;
  e << YAML::Key << "max_refs" << YAML::Value << a.max_refs;
  e << YAML::Key << "fit_range" << YAML::Value;
  if (a.fit_range.empty()) {
    e << "auto";
  } else {
    e << YAML::Flow << YAML::BeginSeq;
    for (const auto& [lo, hi] : a.fit_range) {
      e << YAML::Flow << YAML::BeginSeq << lo << hi << YAML::EndSeq;
    }
    e << YAML::EndSeq;
  }
  e << YAML::Key << "extra_dims" << YAML::Value << a.extra_dims;
  e << YAML::Key << "bin_width" << YAML::Value << a.bin_width;
  e << YAML::Key << "cell" << YAML::Value << describe(a.cell);
  e << YAML::Key << "collapse_runs" << YAML::Value << a.collapse_runs;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::vector<RunConfig> parse_table_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  const YAML::Node root = load_yaml(text, source);
  r.require_map(root, "table config");
  r.allow_keys(root, {"base", "cases"});
  const YAML::Node base = root["base"] ? root["base"] : YAML::Node(YAML::NodeType::Map);
  const auto cases = root["cases"];
  if (!cases || !cases.IsSequence() || cases.size() == 0) {
    r.fail(root, "table config needs a non-empty 'cases' list");
  }
  std::vector<RunConfig> out;
  for (const auto& entry : cases) {
    r.require_map(entry, "case");
    out.push_back(read_run(r, merge(base, entry)));
  }
  return out;
}

std::vector<RunConfig> load_table_config(const std::filesystem::path& path) {
  return parse_table_config(slurp(path), path.string());
}

std::vector<RunConfig> default_table_grid(bool paper_scale) {
  struct Case {
    const char* name;
    double gamma, g;
    StateKind kind;
    unsigned m;
    double nu;
  };
  constexpr Case cases[] = {
      {"weak_cs_nu1", 1.0, 100.0, StateKind::Coherent, 0, 1.0},
      {"weak_pacs1_nu1", 1.0, 100.0, StateKind::PhotonAdded, 1, 1.0},
      {"weak_pacs5_nu1", 1.0, 100.0, StateKind::PhotonAdded, 5, 1.0},
      {"strong_cs_nu1", 5.0, 1.0, StateKind::Coherent, 0, 1.0},
      {"strong_pacs5_nu1", 5.0, 1.0, StateKind::PhotonAdded, 5, 1.0},
      {"strong_cs_nu10", 5.0, 1.0, StateKind::Coherent, 0, 10.0},
      {"strong_pacs1_nu10", 5.0, 1.0, StateKind::PhotonAdded, 1, 10.0},
      {"strong_pacs5_nu10", 5.0, 1.0, StateKind::PhotonAdded, 5, 10.0},
  };
  std::vector<RunConfig> out;
  for (const auto& k : cases) {
    RunConfig c;
    c.name = k.name;
    c.model.gamma = k.gamma;
    c.model.g = k.g;
    c.state = StateSpec::from_nu(k.kind, k.nu, k.m);
    c.paper_scale = paper_scale;
    c.analyses.recurrence = false;
    out.push_back(c);
  }
  return out;
}

namespace {

void read_point(const Reader& r, const YAML::Node& n, PhasePoint& p) {
  r.require_map(n, "start");
  r.allow_keys(n, {"x", "px", "y", "py"});
  r.read(n, "x", p.x);
  r.read(n, "px", p.px);
  r.read(n, "y", p.y);
  r.read(n, "py", p.py);
}

}  // namespace

ClassicalConfig parse_classical_config(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root = load_yaml(text, source);
  if (root.IsMap() && root["config"]) root = root["config"];
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  r.require_map(root, "classical config");
  r.allow_keys(root, {"name", "classical", "start", "dt", "steps", "stride", "drift_tolerance",
                      "reorth", "lyapunov_steps", "output"});
  ClassicalConfig c;
  r.read(root, "name", c.name);
  if (const auto n = root["classical"]) {
    r.require_map(n, "classical");
    r.allow_keys(n, {"m", "M", "omega", "omega0", "lambda_cl", "g"});
    r.read(n, "m", c.params.m);
    r.read(n, "M", c.params.M);
    r.read(n, "omega", c.params.omega);
    r.read(n, "omega0", c.params.omega0);
    r.read(n, "lambda_cl", c.params.lambda_cl);
    r.read(n, "g", c.params.g);
  }
  if (const auto n = root["start"]) read_point(r, n, c.start);
  r.read(root, "dt", c.integrator.dt);
  r.read_size(root, "steps", c.integrator.steps);
  r.read_size(root, "stride", c.integrator.stride);
  r.read(root, "drift_tolerance", c.integrator.drift_tolerance);
  r.read_size(root, "reorth", c.reorth);
  r.read_size(root, "lyapunov_steps", c.lyapunov_steps);
  if (const auto n = root["output"]) c.output = r.as<std::string>(n, "output");
  try {
    c.params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  if (!(c.integrator.dt > 0.0)) throw ConfigError(source + ": dt must be > 0");
  if (c.integrator.steps == 0 || c.integrator.stride == 0 || c.reorth == 0 ||
      c.lyapunov_steps == 0) {
    throw ConfigError(source + ": steps, stride, reorth and lyapunov_steps must be >= 1");
  }
  return c;
}

ClassicalConfig load_classical_config(const std::filesystem::path& path) {
  return parse_classical_config(slurp(path), path.string());
}

std::string to_yaml(const ClassicalConfig& c) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << c.name;
  e << YAML::Key << "classical" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "m" << YAML::Value << c.params.m;
  e << YAML::Key << "M" << YAML::Value << c.params.M;
  e << YAML::Key << "omega" << YAML::Value << c.params.omega;
  e << YAML::Key << "omega0" << YAML::Value << c.params.omega0;
  e << YAML::Key << "lambda_cl" << YAML::Value << c.params.lambda_cl;
  e << YAML::Key << "g" << YAML::Value << c.params.g;
  e << YAML::EndMap;
  e << YAML::Key << "start" << YAML::Value << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "x" << YAML::Value << c.start.x;
  e << YAML::Key << "px" << YAML::Value << c.start.px;
  e << YAML::Key << "y" << YAML::Value << c.start.y;
  e << YAML::Key << "py" << YAML::Value << c.start.py;
  e << YAML::EndMap;
  e << YAML::Key << "dt" << YAML::Value << c.integrator.dt;
  e << YAML::Key << "steps" << YAML::Value << c.integrator.steps;
  e << YAML::Key << "stride" << YAML::Value << c.integrator.stride;
  e << YAML::Key << "drift_tolerance" << YAML::Value << c.integrator.drift_tolerance;
  e << YAML::Key << "reorth" << YAML::Value << c.reorth;
  e << YAML::Key << "lyapunov_steps" << YAML::Value << c.lyapunov_steps;
  e << YAML::Key << "output" << YAML::Value << c.output.string();
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace kerr
