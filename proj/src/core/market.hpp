#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/time_grid.hpp"

namespace sptd {

// Strictly positive capitalizations of n > 1 stocks along a time grid.
// caps(i, k) is the capitalization of stock i at grid point k.
class MarketPath {
 public:
  MarketPath(TimeGrid grid, Eigen::MatrixXd caps, std::vector<std::string> tickers = {},
             std::vector<std::string> dates = {});

  int num_stocks() const { return static_cast<int>(caps_.rows()); }
  std::size_t num_times() const { return grid_.size(); }
  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& caps() const { return caps_; }
  double cap(int stock, std::size_t k) const { return caps_(stock, static_cast<Eigen::Index>(k)); }

  const std::vector<std::string>& tickers() const { return tickers_; }
  // ISO dates as ingested; empty for simulated or constructed paths.
  const std::vector<std::string>& dates() const { return dates_; }

  // Keeps every stride-th time point; same underlying path on a coarser grid.
  MarketPath subsample(std::size_t stride) const;

 private:
  TimeGrid grid_;
  Eigen::MatrixXd caps_;
  std::vector<std::string> tickers_;
  std::vector<std::string> dates_;
};

// Portfolio or market weight vectors along a grid; every time slice sums to 1.
// Entries may be negative for general (short) portfolios.
class WeightPath {
 public:
  WeightPath(TimeGrid grid, Eigen::MatrixXd weights);

  int num_stocks() const { return static_cast<int>(weights_.rows()); }
  std::size_t num_times() const { return grid_.size(); }
  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(int stock, std::size_t k) const {
    return weights_(stock, static_cast<Eigen::Index>(k));
  }
  Eigen::VectorXd slice(std::size_t k) const {
    return weights_.col(static_cast<Eigen::Index>(k));
  }

  WeightPath subsample(std::size_t stride) const;

 private:
  TimeGrid grid_;
  Eigen::MatrixXd weights_;
};

// Correlated geometric Brownian market on a uniform grid. Log-cap increments
// over each step are jointly Gaussian with mean (drift - diag(cov)/2) * dt and
// covariance cov * dt.
struct GbmSpec {
  int num_stocks = 0;
  Eigen::VectorXd drift;        // per year
  Eigen::MatrixXd covariance;   // per year, symmetric PSD
  Eigen::VectorXd initial_caps; // > 0
  double horizon_years = 1.0;
  int steps = 252;
  std::uint64_t seed = 0;

  void validate() const;
};

MarketPath simulate_gbm(const GbmSpec& spec);

// mu_i(t) = X_i(t) / (X_1(t) + ... + X_n(t)); lies in the open unit simplex.
WeightPath market_weights(const MarketPath& m);

// Deterministic three-point path for the rank-swap experiment: caps start
// strictly descending, the stocks at ranks swap_rank and swap_rank+1 meet at
// their arithmetic mean, then finish with their caps exchanged. Nothing else
// moves, and total capitalization is constant at all three times. With
// swap = false the caps stay put (the no-trade control case).
MarketPath leapfrog_market(const Eigen::VectorXd& caps_descending, int swap_rank,
                           bool swap = true);

}  // namespace sptd
