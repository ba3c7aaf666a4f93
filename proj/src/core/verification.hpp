#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/decomposition.hpp"
#include "core/market.hpp"
#include "core/weight_rules.hpp"

namespace sptd {

// Per-level diagnostics of one market path decomposed under one weight rule.
// Levels share the underlying driver: coarser grids are subsamples of the
// finest path.
struct RefinementLevel {
  int steps = 0;
  // Generator residuals; NaN unless the rule is functionally generated.
  double r1 = std::numeric_limits<double>::quiet_NaN();  // sup|structural - dlog S(mu)|
  double r2 = std::numeric_limits<double>::quiet_NaN();  // sup|trading - Theta|
  double tv_rel = 0.0;
  double tv_trading = 0.0;
  double sup_trading = 0.0;
  double sup_trading_minus_gamma = 0.0;  // vs cumulative excess growth rate
};

struct RefinementReport {
  std::vector<RefinementLevel> levels;  // coarse to fine
  double stat(const std::string& name, std::size_t level) const;
};

// Decomposes subsamples of `finest` at the requested step counts. Every level
// must divide the finest grid's interval count.
RefinementReport refinement_diagnostics(const MarketPath& finest, const WeightRule& rule,
                                        const std::vector<int>& level_steps);

// Bounded-variation signature of the trading process: its total variation
// should stabilize under dyadic refinement while the total variation of the
// relative log-return keeps growing. Uses >= 3 dyadic levels ending at the
// given path's resolution.
RefinementReport verify_prop1(const MarketPath& finest, const WeightRule& rule);

// Residuals of the generated-portfolio decomposition against the generator's
// log-change and drift process, across the same dyadic levels.
RefinementReport verify_prop2(const MarketPath& finest, const GeneratorPtr& generator);

// Multi-seed convergence study over a list of refinements of a GBM market.
struct StudySpec {
  GbmSpec market;  // `steps` is overridden by the finest refinement
  std::vector<int> refinements;
  std::vector<std::uint64_t> seeds;
  std::string portfolio;
  int max_threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

struct ConvergenceReport {
  std::vector<int> levels;
  std::vector<std::uint64_t> seeds;
  std::string portfolio;
  // stat name -> [seed index][level index]
  std::map<std::string, std::vector<std::vector<double>>> table;
  // stat name -> per-level median across seeds
  std::map<std::string, std::vector<double>> medians;
  // stat name -> median[level+1] / median[level]
  std::map<std::string, std::vector<double>> median_ratios;

  double median_at(const std::string& stat, std::size_t level) const;

  std::string to_json(const std::vector<std::pair<std::string, std::string>>& meta) const;
  std::string table_csv() const;
  std::string medians_csv() const;
};

ConvergenceReport run_convergence_study(const StudySpec& spec);

// Middle order statistic; averages the two central values for even sizes.
double median(std::vector<double> values);

inline const std::vector<std::string>& refinement_stat_names() {
  static const std::vector<std::string> names{
      "r1", "r2", "tv_rel", "tv_trading", "sup_trading", "sup_trading_minus_gamma"};
  return names;
}

}  // namespace sptd
