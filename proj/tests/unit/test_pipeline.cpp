#include <gtest/gtest.h>

#include <cmath>

#include <yaml-cpp/yaml.h>

#include "kerr/fixtures.hpp"
#include "kerr/manifest.hpp"
#include "kerr/pipeline.hpp"

namespace {

using kerr::Verdict;

TEST(Verdict, LiteralRule) {
  EXPECT_EQ(kerr::classify_lambda(0.001, 0.01), Verdict::Regular);
  EXPECT_EQ(kerr::classify_lambda(0.8, 0.05), Verdict::Chaotic);
  EXPECT_EQ(kerr::classify_lambda(0.05, 0.05), Verdict::Indeterminate);
  EXPECT_EQ(kerr::classify_lambda(-0.5, 0.01), Verdict::Indeterminate);
  EXPECT_EQ(kerr::classify_lambda(NAN, 0.01), Verdict::Failed);
}

TEST(Verdict, SaturationGate) {
  kerr::LyapunovCurve c;
  c.lambda_max = 0.8;
  c.lambda_stderr = 0.05;
  c.saturated = true;
  EXPECT_EQ(kerr::classify_curve(c), Verdict::Chaotic);
  c.saturated = false;
  EXPECT_EQ(kerr::classify_curve(c), Verdict::Regular);
  kerr::VerdictRule literal;
  literal.require_saturation = false;
  EXPECT_EQ(kerr::classify_curve(c, literal), Verdict::Chaotic);
}

kerr::RunConfig fixture_config() {
  kerr::RunConfig c;
  c.analyses.recurrence = false;
  c.analysis.extra_dims = 1;
  return c;
}

TEST(Analyze, SineFixtureIsRegular) {
  const auto r = kerr::analyze(kerr::sine_fixture(50000), fixture_config());
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.verdict, Verdict::Regular);
  ASSERT_TRUE(r.lyapunov);
  EXPECT_LT(std::abs(r.lyapunov->lambda), 0.02);
  EXPECT_LE(r.d_emb, 2u);
}

TEST(Analyze, LogisticFixtureIsChaotic) {
  auto c = fixture_config();
  c.analysis.delay = 1;
  c.analysis.d_emb = 1;
  const auto r = kerr::analyze(kerr::logistic_fixture(50000), c);
  EXPECT_EQ(r.verdict, Verdict::Chaotic);
  EXPECT_NEAR(r.lyapunov->lambda, std::log(2.0), 0.05);
}

TEST(Analyze, PinnedConfigReproducesResult) {
  kerr::RunConfig c;
  c.model = {1.0, 1.0, 5.0, 1.0};
  c.state = kerr::StateSpec::from_nu(kerr::StateKind::PhotonAdded, 10.0, 1);
  c.steps = 20000;
  c.analysis.extra_dims = 1;
  c.analysis.max_refs = 1000;
  const auto sim = kerr::simulate(c);
  EXPECT_LT(sim.residual, 1e-8);
  const auto first = kerr::analyze(kerr::observable(sim, c), c);
  ASSERT_TRUE(first.lyapunov);
  const auto pinned = kerr::pinned_config(c, first, c.resolved_dt(), c.resolved_steps());
  const auto sim2 = kerr::simulate(pinned);
  EXPECT_EQ(sim2.observables.mean_N.values, sim.observables.mean_N.values);
  const auto second = kerr::analyze(kerr::observable(sim2, pinned), pinned);
  EXPECT_EQ(second.verdict, first.verdict);
  EXPECT_EQ(second.lyapunov->lambda, first.lyapunov->lambda);
  EXPECT_EQ(second.delay, first.delay);
  EXPECT_EQ(second.d_emb, first.d_emb);
  ASSERT_TRUE(second.recurrence && first.recurrence);
  EXPECT_EQ(second.recurrence->report.taus, first.recurrence->report.taus);

  kerr::RunManifest m{pinned, &sim, &first, {}, {}};
  const auto node = YAML::Load(kerr::render_manifest(m));
  EXPECT_EQ(node["kind"].as<std::string>(), "run-manifest");
  for (const char* key : {"delay", "d_emb", "theiler"})
    EXPECT_TRUE(node["config"][key].IsDefined()) << key;
  EXPECT_TRUE(node["results"]["lyapunov"]["lambda_max"].IsDefined());
}

TEST(Analyze, FailuresAreRecordedNotThrown) {
  const auto r = kerr::analyze(kerr::iid_fixture(5000, 3), fixture_config());
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.verdict, Verdict::Failed);
  EXPECT_FALSE(r.errors.empty());
}

TEST(Table1, FailedCaseDoesNotAbort) {
  auto ok = kerr::default_table_grid().front();
  ok.steps = 5000;
  ok.analysis.extra_dims = 0;
  ok.analysis.max_refs = 500;
  auto bad = ok;
  bad.name = "bad";
  bad.steps = 50;
  const auto rows = kerr::run_table1({bad, ok});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].verdict, Verdict::Failed);
  EXPECT_FALSE(rows[0].error.empty());
  EXPECT_NE(rows[1].verdict, Verdict::Failed);
  const auto t = kerr::table1_table(rows);
  EXPECT_EQ(t.rows.size(), 2u);
}

}  // namespace
