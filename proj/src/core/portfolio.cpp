#include "core/portfolio.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace sptd {

ValuePath value_process(const MarketPath& m, const WeightPath& w) {
  require_same_grid(m.grid(), w.grid(), "value_process");
  if (m.num_stocks() != w.num_stocks())
    throw Error::validation("value_process: market and weights disagree on stock count");
  const Eigen::MatrixXd& caps = m.caps();
  std::vector<double> values(m.num_times());
  values[0] = 1.0;
  for (std::size_t k = 0; k + 1 < m.num_times(); ++k) {
    const Eigen::Index ek = static_cast<Eigen::Index>(k);
    const double growth =
        w.weights().col(ek).dot((caps.col(ek + 1).array() / caps.col(ek).array()).matrix());
    const double next = values[k] * growth;
    if (!(next > 0.0) || !std::isfinite(next))
      throw Error::numeric("portfolio value driven nonpositive over step " +
                           std::to_string(k + 1));
    values[k + 1] = next;
  }
  return {m.grid(), std::move(values)};
}

CumulativePath relative_log_return(const ValuePath& zp, const ValuePath& zm) {
  require_same_grid(zp.grid(), zm.grid(), "relative_log_return");
  std::vector<double> values(zp.size());
  for (std::size_t k = 0; k < zp.size(); ++k)
    values[k] = std::log(zp[k]) - std::log(zm[k]);
  values[0] = 0.0;
  return {zp.grid(), std::move(values)};
}

RatePath excess_growth_rate(const MarketPath& m, const WeightPath& w) {
  require_same_grid(m.grid(), w.grid(), "excess_growth_rate");
  if (m.num_stocks() != w.num_stocks())
    throw Error::validation("excess_growth_rate: market and weights disagree on stock count");
  const Eigen::MatrixXd log_caps = m.caps().array().log().matrix();
  std::vector<double> increments(m.grid().intervals());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    const Eigen::Index ek = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd dlog = log_caps.col(ek + 1) - log_caps.col(ek);
    const Eigen::VectorXd wk = w.weights().col(ek);
    const double weighted_var = wk.dot(dlog.cwiseProduct(dlog));
    const double portfolio_dlog = wk.dot(dlog);
    increments[k] = 0.5 * (weighted_var - portfolio_dlog * portfolio_dlog);
  }
  return {m.grid(), std::move(increments)};
}

}  // namespace sptd
