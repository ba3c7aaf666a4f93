#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/market.hpp"
#include "core/portfolio.hpp"
#include "test_util.hpp"

using namespace sptd;
using testutil::close;

TEST_CASE("market portfolio tracks total capitalization exactly") {
  MarketPath m = simulate_gbm(testutil::default_gbm(5, 128, 21));
  ValuePath z = value_process(m, market_weights(m));
  const double total0 = m.caps().col(0).sum();
  for (std::size_t k = 0; k < m.num_times(); ++k)
    CHECK(close(z[k], m.caps().col(static_cast<Eigen::Index>(k)).sum() / total0));
}

TEST_CASE("hand-computed two-stock step") {
  TimeGrid grid({0.0, 1.0});
  Eigen::MatrixXd caps(2, 2);
  caps << 100.0, 150.0, 100.0, 50.0;
  MarketPath m(grid, caps);
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  ValuePath z = value_process(m, WeightPath(grid, half));
  CHECK(close(z[1], 1.0));  // 0.5 * 1.5 + 0.5 * 0.5

  ValuePath zm = value_process(m, market_weights(m));
  CumulativePath rel = relative_log_return(z, zm);
  CHECK(rel[0] == 0.0);
  CHECK(close(rel[1], 0.0));  // market ratio is also 1
}

TEST_CASE("single-stock portfolio tracks that stock") {
  MarketPath m = simulate_gbm(testutil::default_gbm(3, 64, 22));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, static_cast<Eigen::Index>(m.num_times()));
  w.row(1).setOnes();
  ValuePath z = value_process(m, WeightPath(m.grid(), w));
  for (std::size_t k = 0; k < m.num_times(); ++k)
    CHECK(close(z[k], m.cap(1, k) / m.cap(1, 0)));
}

TEST_CASE("value process is scale invariant in caps") {
  MarketPath m = simulate_gbm(testutil::default_gbm(4, 100, 23));
  MarketPath scaled(m.grid(), 7.5 * m.caps());
  WeightPath mu = market_weights(m);
  ValuePath a = value_process(m, mu);
  ValuePath b = value_process(scaled, mu);
  for (std::size_t k = 0; k < m.num_times(); ++k) CHECK(close(a[k], b[k], 1e-13));
}

TEST_CASE("nonpositive value is an error naming the step") {
  TimeGrid grid({0.0, 1.0, 2.0});
  Eigen::MatrixXd caps(2, 3);
  caps << 1.0, 0.1, 0.1, 1.0, 3.0, 3.0;
  MarketPath m(grid, caps);
  Eigen::MatrixXd w(2, 3);
  w << 2.0, 2.0, 2.0, -1.0, -1.0, -1.0;  // short the winner
  try {
    value_process(m, WeightPath(grid, w));
    FAIL_CHECK("expected a numeric error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::numeric);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("relative log return of a path against itself is zero") {
  MarketPath m = simulate_gbm(testutil::default_gbm(3, 32, 24));
  ValuePath z = value_process(m, market_weights(m));
  CumulativePath rel = relative_log_return(z, z);
  for (std::size_t k = 0; k < rel.size(); ++k) CHECK(rel[k] == 0.0);
}

TEST_CASE("excess growth rate hand cases") {
  // Two stocks moving +a and -a in log with equal weights: increment a^2 / 2.
  const double a = 0.05;
  TimeGrid grid({0.0, 1.0});
  Eigen::MatrixXd caps(2, 2);
  caps << 1.0, std::exp(a), 1.0, std::exp(-a);
  MarketPath m(grid, caps);
  Eigen::MatrixXd half = Eigen::MatrixXd::Constant(2, 2, 0.5);
  RatePath gamma = excess_growth_rate(m, WeightPath(grid, half));
  CHECK(close(gamma.increments()[0], a * a / 2.0));

  // All stocks moving identically: no diversity, no excess growth.
  Eigen::MatrixXd same(3, 2);
  same << 1.0, 1.3, 2.0, 2.6, 5.0, 6.5;
  MarketPath identical(grid, same);
  Eigen::MatrixXd third = Eigen::MatrixXd::Constant(3, 2, 1.0 / 3.0);
  RatePath zero = excess_growth_rate(identical, WeightPath(grid, third));
  CHECK(close(zero.increments()[0], 0.0));

  // All weight on one stock: dq_ii - dq_ii = 0 exactly.
  Eigen::MatrixXd solo = Eigen::MatrixXd::Zero(2, 2);
  solo.row(0).setOnes();
  RatePath single = excess_growth_rate(m, WeightPath(grid, solo));
  CHECK(single.increments()[0] == 0.0);
}

TEST_CASE("excess growth increments are nonnegative for long-only weights") {
  std::mt19937_64 rng(25);
  MarketPath m = simulate_gbm(testutil::default_gbm(5, 200, 26, 0.09));
  Eigen::VectorXd fixed = testutil::interior_point(rng, 5);
  Eigen::MatrixXd w(5, static_cast<Eigen::Index>(m.num_times()));
  for (Eigen::Index k = 0; k < w.cols(); ++k) w.col(k) = fixed;
  RatePath gamma = excess_growth_rate(m, WeightPath(m.grid(), w));
  for (double inc : gamma.increments()) CHECK(inc >= 0.0);
  CumulativePath cumulative = gamma.cumulative();
  CHECK(cumulative.final() > 0.0);
}

TEST_CASE("value process composes over concatenated grids") {
  MarketPath m = simulate_gbm(testutil::default_gbm(3, 40, 27));
  WeightPath mu = market_weights(m);
  ValuePath whole = value_process(m, mu);
  const std::size_t split = 15;

  auto restrict_market = [&](std::size_t from, std::size_t to) {
    std::vector<double> times(m.grid().times().begin() + static_cast<long>(from),
                              m.grid().times().begin() + static_cast<long>(to + 1));
    return MarketPath(TimeGrid(std::move(times)),
                      m.caps().middleCols(static_cast<Eigen::Index>(from),
                                          static_cast<Eigen::Index>(to - from + 1)));
  };
  MarketPath first = restrict_market(0, split);
  MarketPath second = restrict_market(split, m.num_times() - 1);
  ValuePath z1 = value_process(first, market_weights(first));
  ValuePath z2 = value_process(second, market_weights(second));

  for (std::size_t k = 0; k <= split; ++k) CHECK(close(whole[k], z1[k], 1e-13));
  for (std::size_t k = split; k < m.num_times(); ++k)
    CHECK(close(whole[k], z1[split] * z2[k - split], 1e-13));
}

TEST_CASE("rate path cumulative") {
  TimeGrid grid({0.0, 0.5, 1.0});
  RatePath rate(grid, {0.25, -0.1});
  CumulativePath c = rate.cumulative();
  CHECK(c[0] == 0.0);
  CHECK(close(c[1], 0.25));
  CHECK(close(c[2], 0.15));
}
