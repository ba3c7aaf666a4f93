#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/verification.hpp"
#include "test_util.hpp"

using namespace sptd;

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK(median({5.0}) == 5.0);
  CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("refinement diagnostics validates level lists") {
  MarketPath finest = simulate_gbm(testutil::default_gbm(3, 64, 51));
  WeightRule rule = WeightRule::parse("entropy", 3);
  CHECK_THROWS_AS(refinement_diagnostics(finest, rule, {48, 64}), Error);  // 48 ∤ 64
  CHECK_THROWS_AS(refinement_diagnostics(finest, rule, {32, 32}), Error);
  CHECK_NOTHROW(refinement_diagnostics(finest, rule, {16, 32, 64}));
}

TEST_CASE("verify_prop2 produces finite shrinking residuals for entropy") {
  MarketPath finest = simulate_gbm(testutil::default_gbm(4, 256, 52));
  RefinementReport report = verify_prop2(finest, make_entropy_generator());
  REQUIRE(report.levels.size() == 3);
  CHECK(report.levels[0].steps == 64);
  CHECK(report.levels[2].steps == 256);
  for (const RefinementLevel& level : report.levels) {
    CHECK(std::isfinite(level.r1));
    CHECK(std::isfinite(level.r2));
    CHECK(level.r1 >= 0.0);
  }
}

TEST_CASE("verify_prop1 on a constant market has zero variation everywhere") {
  GbmSpec spec = testutil::default_gbm(3, 64, 53, 0.0);  // zero volatility
  MarketPath flat = simulate_gbm(spec);
  RefinementReport report = verify_prop1(flat, WeightRule::parse("entropy", 3));
  for (const RefinementLevel& level : report.levels) {
    CHECK(level.tv_rel <= 1e-12);  // weight slices sum to 1 only up to rounding
    CHECK(level.tv_trading <= 1e-12);
  }
}

TEST_CASE("per-path total variation of the relative return grows with refinement") {
  MarketPath finest = simulate_gbm(testutil::default_gbm(4, 256, 54, 0.09));
  RefinementReport report = verify_prop1(finest, WeightRule::parse("geom", 4));
  // Subsampling can only shrink the total variation of the same path.
  CHECK(report.levels[0].tv_rel <= report.levels[1].tv_rel);
  CHECK(report.levels[1].tv_rel <= report.levels[2].tv_rel);
}

TEST_CASE("study spec validation") {
  StudySpec spec;
  spec.market = testutil::default_gbm(3, 0, 1);
  spec.refinements = {16, 32};
  spec.seeds = {1, 2};
  spec.portfolio = "entropy";
  CHECK_NOTHROW(spec.validate());

  StudySpec bad = spec;
  bad.refinements = {24, 32};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.seeds.clear();
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = spec;
  bad.portfolio = "unknown-rule";
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("study results are deterministic across thread counts") {
  StudySpec spec;
  spec.market = testutil::default_gbm(3, 0, 1);
  spec.refinements = {16, 32, 64};
  spec.seeds = {1, 2, 3, 4, 5, 6};
  spec.portfolio = "entropy";

  spec.max_threads = 1;
  ConvergenceReport serial = run_convergence_study(spec);
  spec.max_threads = 4;
  ConvergenceReport parallel = run_convergence_study(spec);

  REQUIRE(serial.table.size() == parallel.table.size());
  for (const auto& [stat, rows] : serial.table) {
    const auto& other = parallel.table.at(stat);
    for (std::size_t s = 0; s < rows.size(); ++s)
      for (std::size_t l = 0; l < rows[s].size(); ++l) CHECK(rows[s][l] == other[s][l]);
  }
}

TEST_CASE("study table shapes and non-generated rules") {
  StudySpec spec;
  spec.market = testutil::default_gbm(3, 0, 1);
  spec.refinements = {16, 64};
  spec.seeds = {7, 8, 9};
  spec.portfolio = "buyhold:shares=1,2,3";
  ConvergenceReport report = run_convergence_study(spec);
  CHECK(report.table.count("r1") == 0);  // no generator residuals for buy-and-hold
  CHECK(report.table.at("sup_trading").size() == 3);
  CHECK(report.table.at("sup_trading")[0].size() == 2);
  CHECK(report.medians.at("tv_rel").size() == 2);
  CHECK(report.median_ratios.at("tv_rel").size() == 1);
  CHECK_THROWS_AS(report.median_at("r1", 0), Error);
  CHECK_NOTHROW(report.median_at("sup_trading", 1));

  const std::string table_csv = report.table_csv();
  CHECK(table_csv.rfind("stat,seed,steps,value\n", 0) == 0);
  const std::string medians_csv = report.medians_csv();
  CHECK(medians_csv.rfind("stat,steps,median,ratio_from_previous\n", 0) == 0);
  const std::string json = report.to_json({{"command", "test"}});
  CHECK(json.find("\"median_ratios\"") != std::string::npos);
}
