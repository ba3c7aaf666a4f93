#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/integrate.hpp"
#include "test_util.hpp"

using namespace sptd;
using testutil::close;

namespace {

ScalarPath path3(std::vector<double> values) {
  return {TimeGrid({0.0, 1.0, 2.0}), std::move(values)};
}

}  // namespace

TEST_CASE("ito integral: left-endpoint sums") {
  ScalarPath x = path3({1.0, 1.5, 1.2});
  ScalarPath two = path3({2.0, 2.0, 2.0});
  CumulativePath constant_integrand = ito_integral(two, x);
  CHECK(close(constant_integrand.final(), 0.4));

  CumulativePath self = ito_integral(x, x);
  CHECK(self[0] == 0.0);
  CHECK(close(self[1], 0.5));
  CHECK(close(self.final(), 0.05));

  ScalarPath flat = path3({5.0, 5.0, 5.0});
  CumulativePath zero = ito_integral(x, flat);
  for (std::size_t k = 0; k < zero.size(); ++k) CHECK(zero[k] == 0.0);
}

TEST_CASE("fs integral: midpoint-averaged sums") {
  ScalarPath x = path3({1.0, 1.5, 1.2});
  CumulativePath self = fs_integral(x, x);
  CHECK(close(self.final(), 0.22));  // (1.2^2 - 1) / 2, telescoping

  ScalarPath c = path3({3.0, 3.0, 3.0});
  CumulativePath fs_const = fs_integral(c, x);
  CumulativePath ito_const = ito_integral(c, x);
  for (std::size_t k = 0; k < fs_const.size(); ++k)
    CHECK(fs_const[k] == ito_const[k]);

  CumulativePath hand = fs_integral(path3({0.0, 2.0, 2.0}), path3({0.0, 1.0, 3.0}));
  CHECK(close(hand.final(), 5.0));
}

TEST_CASE("cross variation") {
  ScalarPath x = path3({0.0, 1.0, 3.0});
  ScalarPath y = path3({0.0, 2.0, 2.0});
  CHECK(close(cross_variation(x, y).final(), 2.0));

  ScalarPath flat = path3({7.0, 7.0, 7.0});
  CumulativePath zero = cross_variation(flat, y);
  for (std::size_t k = 0; k < zero.size(); ++k) CHECK(zero[k] == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TimeGrid grid = testutil::random_grid(rng, 30);
    ScalarPath a = testutil::random_walk(rng, grid, 0.0, 0.3);
    ScalarPath b = testutil::random_walk(rng, grid, 1.0, 0.5);
    CumulativePath ab = cross_variation(a, b);
    CumulativePath ba = cross_variation(b, a);
    for (std::size_t k = 0; k < ab.size(); ++k) CHECK(ab[k] == ba[k]);
  }
}

TEST_CASE("quadratic variation is non-decreasing") {
  std::mt19937_64 rng(12);
  TimeGrid grid = testutil::random_grid(rng, 100);
  ScalarPath x = testutil::random_walk(rng, grid, 0.0, 0.4);
  CumulativePath qv = quadratic_variation(x);
  for (std::size_t k = 0; k + 1 < qv.size(); ++k) CHECK(qv[k + 1] >= qv[k]);
}

TEST_CASE("fs - ito = cross variation / 2, pointwise") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t points = 2 + static_cast<std::size_t>(rng() % 150);
    TimeGrid grid = trial % 2 == 0 ? testutil::random_grid(rng, points)
                                   : TimeGrid::uniform(1.0, static_cast<int>(points) - 1);
    ScalarPath y = testutil::random_walk(rng, grid, 2.0, 0.7);
    ScalarPath x = testutil::random_walk(rng, grid, -1.0, 0.4);
    CumulativePath fs = fs_integral(y, x);
    CumulativePath ito = ito_integral(y, x);
    CumulativePath cv = cross_variation(x, y);
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK(close(fs[k] - ito[k], 0.5 * cv[k]));
  }
}

TEST_CASE("linearity in the integrand") {
  std::mt19937_64 rng(14);
  TimeGrid grid = testutil::random_grid(rng, 60);
  ScalarPath y1 = testutil::random_walk(rng, grid, 0.0, 0.5);
  ScalarPath y2 = testutil::random_walk(rng, grid, 1.0, 0.3);
  ScalarPath x = testutil::random_walk(rng, grid, 0.0, 0.6);
  const double a = 2.5, b = -1.25;
  std::vector<double> combined(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) combined[k] = a * y1[k] + b * y2[k];
  ScalarPath y(grid, std::move(combined));

  for (auto integral : {ito_integral, fs_integral}) {
    CumulativePath lhs = integral(y, x);
    CumulativePath p1 = integral(y1, x);
    CumulativePath p2 = integral(y2, x);
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK(close(lhs[k], a * p1[k] + b * p2[k], 1e-11));
  }
}

TEST_CASE("additivity over time-interval concatenation") {
  std::mt19937_64 rng(15);
  TimeGrid grid = testutil::random_grid(rng, 41);
  ScalarPath y = testutil::random_walk(rng, grid, 0.5, 0.4);
  ScalarPath x = testutil::random_walk(rng, grid, 0.0, 0.4);
  const std::size_t split = 17;

  auto restrict = [&](const ScalarPath& p, std::size_t from, std::size_t to) {
    std::vector<double> times(p.grid().times().begin() + static_cast<long>(from),
                              p.grid().times().begin() + static_cast<long>(to + 1));
    std::vector<double> values(p.values().begin() + static_cast<long>(from),
                               p.values().begin() + static_cast<long>(to + 1));
    return ScalarPath(TimeGrid(std::move(times)), std::move(values));
  };

  for (auto integral : {ito_integral, fs_integral, cross_variation}) {
    const double whole = integral(y, x).final();
    const double first = integral(restrict(y, 0, split), restrict(x, 0, split)).final();
    const double second =
        integral(restrict(y, split, grid.size() - 1), restrict(x, split, grid.size() - 1))
            .final();
    CHECK(close(whole, first + second));
  }
}

TEST_CASE("chain rule residual vanishes for quadratic and identity functions") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    TimeGrid grid = testutil::random_grid(rng, 200);
    ScalarPath x = testutil::random_walk(rng, grid, 1.0, 0.3);
    CumulativePath quad = fs_chain_rule_residual(
        [](double v) { return 0.5 * v * v; }, [](double v) { return v; }, x);
    for (std::size_t k = 0; k < quad.size(); ++k) CHECK(close(quad[k], 0.0));
    CumulativePath ident = fs_chain_rule_residual(
        [](double v) { return v; }, [](double) { return 1.0; }, x);
    for (std::size_t k = 0; k < ident.size(); ++k) CHECK(close(ident[k], 0.0));
  }
}

TEST_CASE("chain rule residual for log shrinks under refinement") {
  int improved = 0;
  const int seeds = 21;
  std::vector<double> ratios;
  for (int seed = 1; seed <= seeds; ++seed) {
    ScalarPath fine = testutil::gbm_scalar_path(static_cast<std::uint64_t>(seed), 512);
    ScalarPath coarse(fine.grid().subsample(2), [&] {
      std::vector<double> v;
      for (std::size_t k = 0; k < fine.size(); k += 2) v.push_back(fine[k]);
      return v;
    }());
    auto log_f = [](double v) { return std::log(v); };
    auto log_df = [](double v) { return 1.0 / v; };
    const double err_fine = testutil::sup_abs(fs_chain_rule_residual(log_f, log_df, fine));
    const double err_coarse =
        testutil::sup_abs(fs_chain_rule_residual(log_f, log_df, coarse));
    ratios.push_back(err_fine / err_coarse);
    if (err_fine < err_coarse) ++improved;
  }
  std::sort(ratios.begin(), ratios.end());
  CHECK(ratios[ratios.size() / 2] < 1.0);  // median ratio
  CHECK(improved > seeds / 2);
}

TEST_CASE("chain rule rejects functions that blow up on the path") {
  ScalarPath x = path3({1.0, -2.0, 3.0});
  CHECK_THROWS_AS(fs_chain_rule_residual([](double v) { return std::log(v); },
                                         [](double v) { return 1.0 / v; }, x),
                  Error);
}

TEST_CASE("grid mismatch raises an alignment error") {
  ScalarPath a({TimeGrid({0.0, 1.0, 2.0})}, {1.0, 2.0, 3.0});
  ScalarPath b({TimeGrid({0.0, 1.0, 2.5})}, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(ito_integral(a, b), Error);
  CHECK_THROWS_AS(fs_integral(a, b), Error);
  CHECK_THROWS_AS(cross_variation(a, b), Error);
  try {
    ito_integral(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::alignment);
  }
}
