#include "core/market.hpp"

#include <cmath>
#include <random>
#include <string>

#include "core/errors.hpp"

namespace sptd {

namespace {

constexpr double kWeightSumTolerance = 1e-9;

std::vector<std::string> default_tickers(int n) {
  std::vector<std::string> tickers(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) tickers[static_cast<std::size_t>(i)] = "S" + std::to_string(i + 1);
  return tickers;
}

// Factor L with L L^T = cov, tolerating semidefinite input.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  if (!cov.isApprox(cov.transpose(), 1e-12))
    throw Error::validation("covariance matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw Error::numeric("covariance eigendecomposition failed");
  Eigen::VectorXd lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] < -1e-10 * scale)
      throw Error::validation("covariance matrix is not positive semidefinite");
    lambda[i] = std::max(lambda[i], 0.0);
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
}

}  // namespace

MarketPath::MarketPath(TimeGrid grid, Eigen::MatrixXd caps, std::vector<std::string> tickers,
                       std::vector<std::string> dates)
    : grid_(std::move(grid)),
      caps_(std::move(caps)),
      tickers_(std::move(tickers)),
      dates_(std::move(dates)) {
  if (caps_.rows() < 2)
    throw Error::validation("market needs more than one stock, got " +
                            std::to_string(caps_.rows()));
  if (static_cast<std::size_t>(caps_.cols()) != grid_.size())
    throw Error::validation("cap matrix has " + std::to_string(caps_.cols()) +
                            " columns for " + std::to_string(grid_.size()) + " grid points");
  for (Eigen::Index k = 0; k < caps_.cols(); ++k)
    for (Eigen::Index i = 0; i < caps_.rows(); ++i)
      if (!(caps_(i, k) > 0.0) || !std::isfinite(caps_(i, k)))
        throw Error::validation("cap of stock " + std::to_string(i + 1) + " at time index " +
                                std::to_string(k) + " must be positive and finite");
  if (tickers_.empty()) tickers_ = default_tickers(num_stocks());
  if (tickers_.size() != static_cast<std::size_t>(num_stocks()))
    throw Error::validation("ticker count does not match stock count");
  if (!dates_.empty() && dates_.size() != grid_.size())
    throw Error::validation("date count does not match grid size");
}

MarketPath MarketPath::subsample(std::size_t stride) const {
  TimeGrid coarse = grid_.subsample(stride);
  Eigen::MatrixXd caps(caps_.rows(), static_cast<Eigen::Index>(coarse.size()));
  std::vector<std::string> dates;
  if (!dates_.empty()) dates.reserve(coarse.size());
  for (std::size_t k = 0, src = 0; k < coarse.size(); ++k, src += stride) {
    caps.col(static_cast<Eigen::Index>(k)) = caps_.col(static_cast<Eigen::Index>(src));
    if (!dates_.empty()) dates.push_back(dates_[src]);
  }
  return {std::move(coarse), std::move(caps), tickers_, std::move(dates)};
}

WeightPath::WeightPath(TimeGrid grid, Eigen::MatrixXd weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (weights_.rows() < 2) throw Error::validation("weight path needs more than one stock");
  if (static_cast<std::size_t>(weights_.cols()) != grid_.size())
    throw Error::validation("weight matrix has " + std::to_string(weights_.cols()) +
                            " columns for " + std::to_string(grid_.size()) + " grid points");
  for (Eigen::Index k = 0; k < weights_.cols(); ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
      if (!std::isfinite(weights_(i, k)))
        throw Error::validation("weight of stock " + std::to_string(i + 1) +
                                " at time index " + std::to_string(k) + " is not finite");
      sum += weights_(i, k);
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
      throw Error::validation("weights at time index " + std::to_string(k) +
                              " sum to " + std::to_string(sum) + ", expected 1");
  }
}

WeightPath WeightPath::subsample(std::size_t stride) const {
  TimeGrid coarse = grid_.subsample(stride);
  Eigen::MatrixXd w(weights_.rows(), static_cast<Eigen::Index>(coarse.size()));
  for (std::size_t k = 0, src = 0; k < coarse.size(); ++k, src += stride)
    w.col(static_cast<Eigen::Index>(k)) = weights_.col(static_cast<Eigen::Index>(src));
  return {std::move(coarse), std::move(w)};
}

void GbmSpec::validate() const {
  if (num_stocks < 2) throw Error::validation("GBM spec needs at least 2 stocks");
  if (drift.size() != num_stocks) throw Error::validation("GBM drift has wrong length");
  if (covariance.rows() != num_stocks || covariance.cols() != num_stocks)
    throw Error::validation("GBM covariance has wrong shape");
  if (initial_caps.size() != num_stocks)
    throw Error::validation("GBM initial caps have wrong length");
  for (int i = 0; i < num_stocks; ++i) {
    if (!std::isfinite(drift[i])) throw Error::validation("GBM drift must be finite");
    if (!(initial_caps[i] > 0.0) || !std::isfinite(initial_caps[i]))
      throw Error::validation("GBM initial caps must be positive");
  }
  if (!(horizon_years > 0.0) || !std::isfinite(horizon_years))
    throw Error::validation("GBM horizon must be positive");
  if (steps < 1) throw Error::validation("GBM steps must be >= 1");
}

MarketPath simulate_gbm(const GbmSpec& spec) {
  spec.validate();
  const int n = spec.num_stocks;
  const Eigen::MatrixXd factor = psd_factor(spec.covariance);  // validates PSD
  const double dt = spec.horizon_years / spec.steps;
  const double sqrt_dt = std::sqrt(dt);
  const Eigen::VectorXd step_mean =
      (spec.drift - 0.5 * spec.covariance.diagonal()) * dt;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd log_caps(n, spec.steps + 1);
  log_caps.col(0) = spec.initial_caps.array().log().matrix();
  Eigen::VectorXd z(n);
  for (int k = 0; k < spec.steps; ++k) {
    for (int i = 0; i < n; ++i) z[i] = normal(rng);
    log_caps.col(k + 1) = log_caps.col(k) + step_mean + sqrt_dt * (factor * z);
  }

  return {TimeGrid::uniform(spec.horizon_years, spec.steps),
          log_caps.array().exp().matrix()};
}

WeightPath market_weights(const MarketPath& m) {
  const Eigen::MatrixXd& caps = m.caps();
  Eigen::MatrixXd weights(caps.rows(), caps.cols());
  for (Eigen::Index k = 0; k < caps.cols(); ++k)
    weights.col(k) = caps.col(k) / caps.col(k).sum();
  return {m.grid(), std::move(weights)};
}

MarketPath leapfrog_market(const Eigen::VectorXd& caps_descending, int swap_rank, bool swap) {
  const int n = static_cast<int>(caps_descending.size());
  if (n < 2) throw Error::validation("leapfrog market needs at least 2 stocks");
  if (swap_rank < 1 || swap_rank >= n)
    throw Error::validation("leapfrog swap rank must be in [1, n-1]");
  for (int i = 0; i < n; ++i) {
    if (!(caps_descending[i] > 0.0) || !std::isfinite(caps_descending[i]))
      throw Error::validation("leapfrog caps must be positive");
    if (i > 0 && !(caps_descending[i] < caps_descending[i - 1]))
      throw Error::validation("leapfrog caps must be strictly decreasing");
  }
  const int a = swap_rank - 1;  // zero-based indices of the swapped pair
  const int b = swap_rank;
  Eigen::MatrixXd caps(n, 3);
  caps.col(0) = caps_descending;
  caps.col(1) = caps_descending;
  caps.col(2) = caps_descending;
  if (swap) {
    const double mid = 0.5 * (caps_descending[a] + caps_descending[b]);
    caps(a, 1) = mid;
    caps(b, 1) = mid;
    caps(a, 2) = caps_descending[b];
    caps(b, 2) = caps_descending[a];
  }
  return {TimeGrid({0.0, 0.5, 1.0}), std::move(caps)};
}

}  // namespace sptd
