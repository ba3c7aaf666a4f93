#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/csv_io.hpp"
#include "core/errors.hpp"
#include "core/market.hpp"
#include "test_util.hpp"

using namespace sptd;
using testutil::close;

TEST_CASE("gbm spec validation") {
  GbmSpec spec = testutil::default_gbm(3, 10, 1);
  CHECK_NOTHROW(simulate_gbm(spec));

  GbmSpec bad = spec;
  bad.covariance(0, 1) = 0.5;  // asymmetric
  CHECK_THROWS_AS(simulate_gbm(bad), Error);

  bad = spec;
  bad.covariance = -0.01 * Eigen::MatrixXd::Identity(3, 3);  // negative definite
  CHECK_THROWS_AS(simulate_gbm(bad), Error);

  bad = spec;
  bad.initial_caps[1] = 0.0;
  CHECK_THROWS_AS(simulate_gbm(bad), Error);

  bad = spec;
  bad.steps = 0;
  CHECK_THROWS_AS(simulate_gbm(bad), Error);
}

TEST_CASE("zero covariance and drift give a constant market") {
  GbmSpec spec = testutil::default_gbm(3, 16, 7, 0.0);
  spec.initial_caps << 2.0, 3.0, 5.0;
  MarketPath m = simulate_gbm(spec);
  for (std::size_t k = 0; k < m.num_times(); ++k) {
    CHECK(m.cap(0, k) == doctest::Approx(2.0));
    CHECK(m.cap(1, k) == doctest::Approx(3.0));
    CHECK(m.cap(2, k) == doctest::Approx(5.0));
  }
}

TEST_CASE("same seed reproduces the path bit for bit") {
  GbmSpec spec = testutil::default_gbm(4, 64, 42);
  MarketPath a = simulate_gbm(spec);
  MarketPath b = simulate_gbm(spec);
  CHECK(a.caps() == b.caps());

  spec.seed = 43;
  MarketPath c = simulate_gbm(spec);
  CHECK(a.caps() != c.caps());
}

TEST_CASE("caps stay strictly positive") {
  GbmSpec spec = testutil::default_gbm(5, 500, 3, 0.25);
  spec.drift = Eigen::VectorXd::Constant(5, -0.5);
  MarketPath m = simulate_gbm(spec);
  CHECK(m.caps().minCoeff() > 0.0);
}

TEST_CASE("log-increment moments match the spec") {
  // Sample variance of per-step log increments over >= 1000 steps, within
  // three standard errors of variance * dt.
  const int steps = 2000;
  const double variance = 0.04;
  GbmSpec spec = testutil::default_gbm(5, steps, 2024, variance);
  MarketPath m = simulate_gbm(spec);
  const double dt = 1.0 / steps;
  const double expected = variance * dt;
  const double se = expected * std::sqrt(2.0 / (steps - 1));
  for (int i = 0; i < 5; ++i) {
    double mean = 0.0;
    std::vector<double> increments(steps);
    for (int k = 0; k < steps; ++k) {
      increments[static_cast<std::size_t>(k)] =
          std::log(m.cap(i, static_cast<std::size_t>(k) + 1)) -
          std::log(m.cap(i, static_cast<std::size_t>(k)));
      mean += increments[static_cast<std::size_t>(k)];
    }
    mean /= steps;
    double sample_var = 0.0;
    for (double inc : increments) sample_var += (inc - mean) * (inc - mean);
    sample_var /= (steps - 1);
    CHECK(std::abs(sample_var - expected) < 3.0 * se);
  }
}

TEST_CASE("cross-stock correlation is honored") {
  const int steps = 4000;
  GbmSpec spec = testutil::default_gbm(2, steps, 99);
  spec.covariance << 0.04, 0.03, 0.03, 0.04;
  MarketPath m = simulate_gbm(spec);
  const double dt = 1.0 / steps;
  double sum01 = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double d0 = std::log(m.cap(0, static_cast<std::size_t>(k) + 1) /
                               m.cap(0, static_cast<std::size_t>(k)));
    const double d1 = std::log(m.cap(1, static_cast<std::size_t>(k) + 1) /
                               m.cap(1, static_cast<std::size_t>(k)));
    sum01 += d0 * d1;
  }
  const double sample_cov = sum01 / steps;
  const double expected = 0.03 * dt;
  // SE of the sample covariance of bivariate normals.
  const double se = std::sqrt((0.04 * 0.04 + 0.03 * 0.03) / steps) * dt;
  CHECK(std::abs(sample_cov - expected) < 4.0 * se);
}

TEST_CASE("doubling steps preserves terminal marginals") {
  const int trials = 400;
  auto terminal_stats = [&](int steps) {
    double sum = 0.0, sum_sq = 0.0;
    for (int seed = 1; seed <= trials; ++seed) {
      GbmSpec spec = testutil::default_gbm(2, steps, static_cast<std::uint64_t>(seed), 0.09);
      const MarketPath m = simulate_gbm(spec);
      const double log_terminal = std::log(m.cap(0, m.num_times() - 1));
      sum += log_terminal;
      sum_sq += log_terminal * log_terminal;
    }
    const double mean = sum / trials;
    return std::pair{mean, sum_sq / trials - mean * mean};
  };
  auto [mean_coarse, var_coarse] = terminal_stats(8);
  auto [mean_fine, var_fine] = terminal_stats(16);
  // Exact values are mean -0.045, variance 0.09; both resolutions must agree
  // with them within sampling noise (SE(mean) ~ 0.015, SE(var) ~ 0.0064).
  CHECK(std::abs(mean_coarse + 0.045) < 0.05);
  CHECK(std::abs(mean_fine + 0.045) < 0.05);
  CHECK(std::abs(var_coarse - 0.09) < 0.022);
  CHECK(std::abs(var_fine - 0.09) < 0.022);
}

TEST_CASE("market weights") {
  TimeGrid grid({0.0, 1.0});
  Eigen::MatrixXd caps(2, 2);
  caps << 100.0, 100.0, 300.0, 100.0;
  WeightPath mu = market_weights(MarketPath(grid, caps));
  CHECK(mu.weight(0, 0) == doctest::Approx(0.25));
  CHECK(mu.weight(1, 0) == doctest::Approx(0.75));
  CHECK(mu.weight(0, 1) == doctest::Approx(0.5));

  MarketPath random_market = simulate_gbm(testutil::default_gbm(6, 100, 5));
  WeightPath weights = market_weights(random_market);
  for (std::size_t k = 0; k < weights.num_times(); ++k) {
    double sum = 0.0;
    for (int i = 0; i < 6; ++i) {
      CHECK(weights.weight(i, k) > 0.0);
      CHECK(weights.weight(i, k) < 1.0);
      sum += weights.weight(i, k);
    }
    CHECK(close(sum, 1.0, 1e-12));
  }
}

TEST_CASE("market subsample keeps shared points") {
  MarketPath fine = simulate_gbm(testutil::default_gbm(3, 32, 17));
  MarketPath coarse = fine.subsample(4);
  CHECK(coarse.num_times() == 9);
  for (std::size_t k = 0; k < coarse.num_times(); ++k)
    for (int i = 0; i < 3; ++i) CHECK(coarse.cap(i, k) == fine.cap(i, 4 * k));
}

TEST_CASE("weight path validation") {
  TimeGrid grid({0.0, 1.0});
  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.7, 0.4, 0.3;  // first slice sums to 0.9
  CHECK_THROWS_AS(WeightPath(grid, bad), Error);

  Eigen::MatrixXd shorted(2, 2);
  shorted << 1.5, 1.5, -0.5, -0.5;  // shorts are allowed when slices sum to 1
  CHECK_NOTHROW(WeightPath(grid, shorted));
}

TEST_CASE("leapfrog market construction") {
  Eigen::VectorXd caps(5);
  caps << 100.0, 80.0, 60.0, 50.0, 30.0;
  MarketPath m = leapfrog_market(caps, 3);
  CHECK(m.num_times() == 3);
  const double total = caps.sum();
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(close(m.caps().col(static_cast<Eigen::Index>(k)).sum(), total));
  CHECK(m.cap(2, 1) == doctest::Approx(55.0));
  CHECK(m.cap(3, 1) == doctest::Approx(55.0));
  CHECK(m.cap(2, 2) == doctest::Approx(50.0));
  CHECK(m.cap(3, 2) == doctest::Approx(60.0));
  CHECK(m.cap(0, 2) == doctest::Approx(100.0));

  CHECK_THROWS_AS(leapfrog_market(caps, 5), Error);
  CHECK_THROWS_AS(leapfrog_market(caps, 0), Error);
  Eigen::VectorXd unordered(3);
  unordered << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(leapfrog_market(unordered, 1), Error);
}

TEST_CASE("caps csv ingestion") {
  const std::string good =
      "date,ticker,cap\n"
      "2020-01-02,AAA,100\n"
      "2020-01-02,BBB,300\n"
      "2020-01-03,AAA,110\n"
      "2020-01-03,BBB,290\n"
      "2020-01-06,AAA,105\n"
      "2020-01-06,BBB,295\n";
  MarketPath m = ingest_caps_csv_string(good);
  CHECK(m.num_stocks() == 2);
  CHECK(m.num_times() == 3);
  CHECK(m.tickers()[0] == "AAA");
  CHECK(m.cap(1, 2) == doctest::Approx(295.0));
  CHECK(m.grid()[0] == 0.0);
  CHECK(m.grid()[1] == doctest::Approx(1.0 / 365.25));
  CHECK(m.grid()[2] == doctest::Approx(4.0 / 365.25));
}

TEST_CASE("caps csv rejects bad rows with the line number") {
  auto expect_ingest_error = [](const std::string& text, const std::string& needle) {
    try {
      ingest_caps_csv_string(text);
      FAIL_CHECK("expected an ingest error for: " << needle);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ingest);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_ingest_error(
      "date,ticker,cap\n2020-01-02,AAA,0\n2020-01-02,BBB,1\n2020-01-03,AAA,1\n2020-01-03,BBB,1\n",
      "line 2");
  expect_ingest_error(
      "date,ticker,cap\n2020-01-02,AAA,1\n2020-13-02,BBB,1\n", "line 3");
  expect_ingest_error("date,ticker,cap\n2020-01-02,AAA\n", "line 2");
  expect_ingest_error(
      "date,ticker,cap\n2020-01-02,AAA,1\n2020-01-02,AAA,2\n", "duplicate");
  // BBB missing on the second date
  expect_ingest_error(
      "date,ticker,cap\n2020-01-02,AAA,1\n2020-01-02,BBB,2\n2020-01-03,AAA,1\n",
      "no row");
  // single ticker / single date
  expect_ingest_error("date,ticker,cap\n2020-01-02,AAA,1\n2020-01-03,AAA,1\n", "ticker");
  expect_ingest_error("date,ticker,cap\n2020-01-02,AAA,1\n2020-01-02,BBB,1\n", "date");
  expect_ingest_error("ticker,date,cap\n", "header");
}

TEST_CASE("caps csv round-trips") {
  MarketPath simulated = simulate_gbm(testutil::default_gbm(3, 52, 8));
  const std::string csv = caps_csv_string(simulated);
  MarketPath back = ingest_caps_csv_string(csv);
  REQUIRE(back.num_stocks() == 3);
  REQUIRE(back.num_times() == simulated.num_times());
  for (std::size_t k = 0; k < back.num_times(); ++k)
    for (int i = 0; i < 3; ++i)
      CHECK(close(back.cap(i, k), simulated.cap(i, k), 1e-12));

  // Ingest -> export -> ingest is stable including dates.
  const std::string csv2 = caps_csv_string(back);
  MarketPath third = ingest_caps_csv_string(csv2);
  CHECK(third.caps() == back.caps());
  CHECK(third.grid().same_as(back.grid()));
}

TEST_CASE("sub-daily grids cannot be exported as dated csv") {
  MarketPath fine = simulate_gbm(testutil::default_gbm(2, 1000, 8));
  CHECK_THROWS_AS(caps_csv_string(fine), Error);
}
