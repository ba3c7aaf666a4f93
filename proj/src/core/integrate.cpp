#include "core/integrate.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace sptd {

CumulativePath ito_integral(const ScalarPath& y, const ScalarPath& x) {
  require_same_grid(y.grid(), x.grid(), "ito_integral");
  std::vector<double> values(x.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    acc += y[k] * (x[k + 1] - x[k]);
    values[k + 1] = acc;
  }
  return {x.grid(), std::move(values)};
}

CumulativePath fs_integral(const ScalarPath& y, const ScalarPath& x) {
  require_same_grid(y.grid(), x.grid(), "fs_integral");
  std::vector<double> values(x.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    acc += 0.5 * (y[k] + y[k + 1]) * (x[k + 1] - x[k]);
    values[k + 1] = acc;
  }
  return {x.grid(), std::move(values)};
}

CumulativePath cross_variation(const ScalarPath& x, const ScalarPath& y) {
  require_same_grid(x.grid(), y.grid(), "cross_variation");
  std::vector<double> values(x.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    acc += (x[k + 1] - x[k]) * (y[k + 1] - y[k]);
    values[k + 1] = acc;
  }
  return {x.grid(), std::move(values)};
}

CumulativePath quadratic_variation(const ScalarPath& x) { return cross_variation(x, x); }

CumulativePath fs_chain_rule_residual(const std::function<double(double)>& f,
                                      const std::function<double(double)>& df,
                                      const ScalarPath& x) {
  std::vector<double> fx(x.size()), dfx(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    fx[k] = f(x[k]);
    dfx[k] = df(x[k]);
    if (!std::isfinite(fx[k]) || !std::isfinite(dfx[k]))
      throw Error::domain("function not evaluable at path value " + std::to_string(x[k]) +
                          " (grid point " + std::to_string(k) + ")");
  }
  CumulativePath integral = fs_integral(ScalarPath(x.grid(), std::move(dfx)), x);
  std::vector<double> values(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    values[k] = fx[k] - fx[0] - integral[k];
  values[0] = 0.0;
  return {x.grid(), std::move(values)};
}

}  // namespace sptd
