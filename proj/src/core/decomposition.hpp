#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/generators.hpp"
#include "core/market.hpp"
#include "core/paths.hpp"
#include "core/portfolio.hpp"

namespace sptd {

// Average-weight log-return: the increment over [t_k, t_{k+1}] is
//   sum_i (w(i,k) + w(i,k+1)) / 2 * (log mu_i(t_{k+1}) - log mu_i(t_k)),
// the midpoint sum applied component-wise. Measures stock-selection efficacy.
CumulativePath structural_process(const WeightPath& w, const WeightPath& mu);

// Relative log-return minus the structural process, pointwise. Exact by
// construction, so the decomposition identity holds for any weight path and
// every discretization artifact lands here.
CumulativePath trading_process(const CumulativePath& rel, const CumulativePath& structural);

// Sum of absolute increments.
double total_variation(const CumulativePath& p);
double total_variation(const std::vector<double>& values);

struct DecompositionReport {
  TimeGrid grid;
  CumulativePath relative_log_return;
  CumulativePath structural;
  CumulativePath trading;
  std::optional<CumulativePath> drift;                 // Theta, when a generator is supplied
  std::optional<CumulativePath> generator_log_change;  // log S(mu(t)) - log S(mu(0))
  std::map<std::string, double> diagnostics;
  // False when a generator was supplied but the weights are not the ones it
  // generates; a warning, not an error.
  bool weights_match_generator = true;

  std::vector<std::pair<std::string, const CumulativePath*>> paths() const;

  // {meta, grid, paths, diagnostics}; meta entries are caller-supplied.
  std::string to_json(const std::vector<std::pair<std::string, std::string>>& meta) const;
  // Wide layout: time,rel,structural,trading[,drift,generator_log_change].
  std::string to_csv() const;
};

// Full decomposition of the portfolio's return relative to the market. When a
// generator is supplied, also computes its drift process and log-change, plus
// the residuals comparing them with the structural/trading pair.
DecompositionReport decompose(const MarketPath& m, const WeightPath& w,
                              const GeneratorPtr& g = nullptr);

}  // namespace sptd
