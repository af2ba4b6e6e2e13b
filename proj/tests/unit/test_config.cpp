#include <gtest/gtest.h>

#include <string>

#include "kerr/config.hpp"
#include "kerr/error.hpp"

namespace {

std::string error_of(const std::string& text) {
  try {
    kerr::parse_config(text, "run.yaml");
  } catch (const kerr::ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, DefaultsAndResolvedTiming) {
  const auto c = kerr::parse_config("model: {gamma: 1, g: 100}\n");
  EXPECT_DOUBLE_EQ(c.resolved_dt(), 1e-2);
  EXPECT_EQ(c.resolved_steps(), kerr::kDeskSteps);
  const auto s = kerr::parse_config("model: {gamma: 5, g: 1}\npaper_scale: true\n");
  EXPECT_DOUBLE_EQ(s.resolved_dt(), 1e-1);
  EXPECT_EQ(s.resolved_steps(), kerr::kPaperSteps);
}

TEST(Config, StateForms) {
  auto c = kerr::parse_config("state: {kind: PACS, nu: 10, m: 1}\n");
  EXPECT_EQ(c.state.kind, kerr::StateKind::PhotonAdded);
  EXPECT_NEAR(c.state.nu(), 10.0, 1e-12);
  EXPECT_EQ(c.state.m, 1u);
  c = kerr::parse_config("state: {alpha: [0.6, 0.8]}\n");
  EXPECT_NEAR(c.state.nu(), 1.0, 1e-15);
  EXPECT_EQ(c.state.kind, kerr::StateKind::Coherent);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_of("name: x\nmodel:\n  gamma: 1\n  bogus: 2\n").find("run.yaml:4"), std::string::npos);
  EXPECT_NE(error_of("name: x\nsteps: -5\n").find("run.yaml:2"), std::string::npos);
  EXPECT_NE(error_of("\n\nstate: {kind: FOCK}\n").find("run.yaml:3"), std::string::npos);
  EXPECT_NE(error_of("state: {kind: CS, m: 2}\n").find("run.yaml:1"), std::string::npos);
  EXPECT_NE(error_of("model: [1, 2]\n").find("run.yaml:1"), std::string::npos);
  EXPECT_FALSE(error_of("model: {gamma: 1\n").empty());
}

TEST(Config, PrerequisitesValidated) {
  EXPECT_FALSE(error_of("analyses: {embed: false, lyapunov: true}\n").empty());
  EXPECT_FALSE(error_of("steps: 1\n").empty());
  EXPECT_TRUE(error_of("analyses: {embed: false, lyapunov: false}\n").empty());
}

TEST(Config, YamlRoundTrip) {
  const auto c = kerr::parse_config(
      "name: strong\nmodel: {omega: 1.25, omega0: 0.75, gamma: 5, g: 1}\n"
      "state: {kind: PACS, nu: 10, phase: 0.3, m: 5}\ndt: 0.1\nsteps: 12345\n"
      "delay: 3\nd_emb: 5\ntheiler: 11\nfit_range: [[3, 25]]\ncell: explicit(0.1,0.2]\n"
      "collapse_runs: true\nbin_width: 0.02\n");
  const auto text = kerr::to_yaml(c);
  const auto d = kerr::parse_config(text);
  EXPECT_EQ(kerr::to_yaml(d), text);
  EXPECT_EQ(d.state.alpha, c.state.alpha);
  EXPECT_EQ(d.analysis.fit_range, c.analysis.fit_range);
  EXPECT_EQ(*d.dt, 0.1);
}

TEST(Config, ManifestIsAcceptedAsConfig) {
  const auto c = kerr::parse_config("name: m\nsteps: 777\n");
  const std::string manifest = "kind: run-manifest\nversion: x\nconfig:\n" + [&] {
    std::string indented;
    const auto text = kerr::to_yaml(c);
    std::size_t start = 0;
    while (start < text.size()) {
      const auto end = text.find('\n', start);
      indented += "  " + text.substr(start, end - start) + "\n";
      start = end == std::string::npos ? text.size() : end + 1;
    }
    return indented;
  }();
  EXPECT_EQ(kerr::to_yaml(kerr::parse_config(manifest)), kerr::to_yaml(c));
}

TEST(TableConfig, CasesMergeOverBase) {
  const auto cases = kerr::parse_table_config(
      "base:\n  model: {gamma: 5, g: 1}\n  steps: 1000\ncases:\n"
      "  - {name: a, state: {kind: CS, nu: 1}}\n"
      "  - {name: b, state: {kind: PACS, nu: 10, m: 1}, model: {gamma: 1}}\n");
  ASSERT_EQ(cases.size(), 2u);
  EXPECT_EQ(cases[0].model.gamma, 5.0);
  EXPECT_EQ(cases[1].model.gamma, 1.0);
  EXPECT_EQ(cases[1].model.g, 1.0);
  EXPECT_EQ(*cases[1].steps, 1000u);
}

TEST(TableConfig, DefaultGrid) {
  const auto grid = kerr::default_table_grid();
  ASSERT_EQ(grid.size(), 8u);
  for (const auto& c : grid) {
    EXPECT_FALSE(c.analyses.recurrence);
    const double ratio = c.model.gamma / c.model.g;
    EXPECT_TRUE(ratio == 0.01 || ratio == 5.0);
  }
}

TEST(ClassicalConfig, RoundTrip) {
  const auto c = kerr::parse_classical_config(
      "classical: {lambda_cl: 0.7, g: 0.3}\nstart: {x: 1, px: 0, y: 0.2, py: 0.1}\n");
  EXPECT_EQ(c.params.lambda_cl, 0.7);
  const auto text = kerr::to_yaml(c);
  EXPECT_EQ(kerr::to_yaml(kerr::parse_classical_config(text)), text);
}

}  // namespace
