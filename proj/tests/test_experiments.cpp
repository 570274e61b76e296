#include "stackperc/experiments.hpp"

#include <gtest/gtest.h>

using namespace stackperc;

namespace {

ExperimentConfig config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.d = 2;
  c.n = {30};
  c.gamma = {0.2};
  c.trials = 3;
  c.seed = 17;
  return c;
}

}  // namespace

TEST(Experiments, FmtRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 2.5e-17, 123456.789}) EXPECT_EQ(std::stod(fmt(x)), x);
  EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(Experiments, CsvPreamble) {
  const auto out = render_sample(config("sample"));
  EXPECT_EQ(out.rfind("# stackperc 0.1.0\n# config: {", 0), 0u);
  const auto line = out.substr(out.find("# config: ") + 10, out.find('\n', 20) - out.find("# config: ") - 10);
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j.at("seed"), 17);
  EXPECT_EQ(j.at("command"), "sample");
  EXPECT_FALSE(j.contains("jobs"));
}

TEST(Experiments, TrialSeedsAndDensityAtZero) {
  const auto recs = run_sweep(2, {20, 25}, {0.0, 0.2}, 4, 3, 1, false);
  ASSERT_EQ(recs.size(), 16u);
  for (const auto& r : recs) {
    if (r.gamma == 0.0) {
      EXPECT_EQ(r.x_hat, 0.0);
      EXPECT_FALSE(r.percolated);
    }
    EXPECT_EQ(r.percolated, r.x_hat == 1.0);
    EXPECT_NEAR(r.p, p_of_gamma(2, r.n, r.gamma), 0.0);
  }
  // Trial t uses the same seed across every (n, γ).
  for (int t = 0; t < 4; ++t) EXPECT_EQ(recs[static_cast<std::size_t>(t)].seed, derive_seed(3, static_cast<std::uint64_t>(t)));
  EXPECT_EQ(recs[0].seed, recs[4].seed);
}

TEST(Experiments, ParallelSweepIsIdentical) {
  const auto a = run_sweep(2, {30}, {0.1, 0.3}, 6, 9, 1);
  const auto b = run_sweep(2, {30}, {0.1, 0.3}, 6, 9, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].seed, b[i].seed);
    EXPECT_EQ(a[i].infected, b[i].infected);
  }
  auto cfg = config("density-sweep");
  auto par = cfg;
  par.jobs = 3;
  EXPECT_EQ(render_density_sweep(cfg), render_density_sweep(par));
}

TEST(Experiments, SupercriticalSweepNeedsOptIn) {
  auto cfg = config("density-sweep");
  cfg.gamma = {critical_gamma(2) * 1.1};
  EXPECT_THROW(render_density_sweep(cfg), UsageError);
  cfg.allow_supercritical = true;
  cfg.trials = 1;
  EXPECT_NO_THROW(render_density_sweep(cfg));
  auto none = config("sample");
  none.gamma.clear();
  EXPECT_THROW(render_sample(none), UsageError);
}

TEST(Experiments, SummaryAgainstPrediction) {
  const auto recs = run_sweep(2, {40}, {0.2}, 5, 1, 1, false);
  const auto sum = summarize(2, recs);
  ASSERT_EQ(sum.size(), 1u);
  EXPECT_EQ(sum[0].trials, 5u);
  EXPECT_NEAR(sum[0].hat_gamma, hat_gamma(2, 0.2), 0.0);
  EXPECT_EQ(sum[0].percolation_frequency, 0.0);
}

TEST(Experiments, WitnessOutputs) {
  auto cfg = config("witness");
  cfg.gamma = {2.0};
  const auto [csv, ok] = render_witness(cfg);
  EXPECT_TRUE(ok);
  cfg.format = "json";
  const auto j = nlohmann::json::parse(render_witness(cfg).first);
  const auto w = pedigree_from_json(j.at("witness"));
  EXPECT_FALSE(validate(w).has_value());
  EXPECT_EQ(w.root_face(), (Face{1, 2, 3}));
  EXPECT_TRUE(j.at("stats").at("bound_ok").get<bool>());
  cfg.gamma = {0.0};
  EXPECT_FALSE(render_witness(cfg).second);
}

TEST(Experiments, ThresholdGrid) {
  const auto g = threshold_grid(2, 0.7, 1.5, 9);
  ASSERT_EQ(g.size(), 9u);
  EXPECT_NEAR(g.front(), 0.7 * critical_gamma(2), 1e-15);
  EXPECT_NEAR(g.back(), 1.5 * critical_gamma(2), 1e-15);
}
