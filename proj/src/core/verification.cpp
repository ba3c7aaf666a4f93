#include "core/verification.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/portfolio.hpp"

namespace sptd {

namespace {

double sup_abs_difference(const CumulativePath& a, const CumulativePath& b) {
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sup = std::max(sup, std::abs(a[k] - b[k]));
  return sup;
}

RefinementLevel level_diagnostics(const MarketPath& market, const WeightRule& rule) {
  const WeightPath w = rule.weights(market);
  const DecompositionReport report = decompose(market, w, rule.generator());

  RefinementLevel level;
  level.steps = static_cast<int>(market.grid().intervals());
  level.tv_rel = report.diagnostics.at("tv_rel");
  level.tv_trading = report.diagnostics.at("tv_trading");
  level.sup_trading = report.diagnostics.at("sup_trading");
  if (rule.generator()) {
    level.r1 = report.diagnostics.at("sup_structural_minus_generator_log_change");
    level.r2 = report.diagnostics.at("sup_trading_minus_drift");
  }
  const CumulativePath gamma = excess_growth_rate(market, w).cumulative();
  level.sup_trading_minus_gamma = sup_abs_difference(report.trading, gamma);
  return level;
}

void check_levels(const MarketPath& finest, const std::vector<int>& level_steps) {
  const int finest_steps = static_cast<int>(finest.grid().intervals());
  if (level_steps.empty()) throw Error::validation("need at least one refinement level");
  for (std::size_t i = 0; i < level_steps.size(); ++i) {
    if (level_steps[i] < 1) throw Error::validation("refinement step counts must be >= 1");
    if (i > 0 && level_steps[i] <= level_steps[i - 1])
      throw Error::validation("refinements must be strictly increasing");
    if (finest_steps % level_steps[i] != 0)
      throw Error::validation("refinement " + std::to_string(level_steps[i]) +
                              " does not divide the finest grid (" +
                              std::to_string(finest_steps) + " steps)");
  }
}

}  // namespace

double RefinementReport::stat(const std::string& name, std::size_t level) const {
  if (level >= levels.size()) throw Error::validation("refinement level out of range");
  const RefinementLevel& l = levels[level];
  if (name == "r1") return l.r1;
  if (name == "r2") return l.r2;
  if (name == "tv_rel") return l.tv_rel;
  if (name == "tv_trading") return l.tv_trading;
  if (name == "sup_trading") return l.sup_trading;
  if (name == "sup_trading_minus_gamma") return l.sup_trading_minus_gamma;
  throw Error::validation("unknown refinement statistic '" + name + "'");
}

RefinementReport refinement_diagnostics(const MarketPath& finest, const WeightRule& rule,
                                        const std::vector<int>& level_steps) {
  check_levels(finest, level_steps);
  const int finest_steps = static_cast<int>(finest.grid().intervals());
  RefinementReport report;
  report.levels.reserve(level_steps.size());
  for (int steps : level_steps) {
    const std::size_t stride = static_cast<std::size_t>(finest_steps / steps);
    report.levels.push_back(level_diagnostics(finest.subsample(stride), rule));
  }
  return report;
}

namespace {

std::vector<int> dyadic_levels(const MarketPath& finest) {
  const int finest_steps = static_cast<int>(finest.grid().intervals());
  if (finest_steps % 4 != 0)
    throw Error::validation(
        "refinement verification needs the finest step count divisible by 4, got " +
        std::to_string(finest_steps));
  return {finest_steps / 4, finest_steps / 2, finest_steps};
}

}  // namespace

RefinementReport verify_prop1(const MarketPath& finest, const WeightRule& rule) {
  return refinement_diagnostics(finest, rule, dyadic_levels(finest));
}

RefinementReport verify_prop2(const MarketPath& finest, const GeneratorPtr& generator) {
  if (!generator) throw Error::validation("verify_prop2 needs a generator");
  return refinement_diagnostics(finest, WeightRule::generated(generator, generator->name()),
                                dyadic_levels(finest));
}

void StudySpec::validate() const {
  if (refinements.empty()) throw Error::validation("study needs at least one refinement");
  for (std::size_t i = 0; i < refinements.size(); ++i) {
    if (refinements[i] < 1) throw Error::validation("refinements must be >= 1");
    if (i > 0 && refinements[i] <= refinements[i - 1])
      throw Error::validation("refinements must be strictly increasing");
    if (refinements.back() % refinements[i] != 0)
      throw Error::validation("refinement " + std::to_string(refinements[i]) +
                              " does not divide the finest refinement " +
                              std::to_string(refinements.back()));
  }
  if (seeds.empty()) throw Error::validation("study needs at least one seed");
  GbmSpec finest = market;
  finest.steps = refinements.back();
  finest.validate();
  WeightRule::parse(portfolio, market.num_stocks);  // validates the rule spec
  if (max_threads < 0) throw Error::validation("max_threads must be >= 0");
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error::validation("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

ConvergenceReport run_convergence_study(const StudySpec& spec) {
  spec.validate();
  const WeightRule rule = WeightRule::parse(spec.portfolio, spec.market.num_stocks);
  const bool generated = rule.generator() != nullptr;

  ConvergenceReport report;
  report.levels = spec.refinements;
  report.seeds = spec.seeds;
  report.portfolio = spec.portfolio;

  std::vector<RefinementReport> per_seed(spec.seeds.size(),
                                         RefinementReport{});

  // Seeds are independent; results land in a slot per seed, so the thread
  // schedule cannot change the output.
  unsigned threads = spec.max_threads > 0 ? static_cast<unsigned>(spec.max_threads)
                                          : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, spec.seeds.size()));

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= spec.seeds.size()) return;
      try {
        GbmSpec market = spec.market;
        market.steps = spec.refinements.back();
        market.seed = spec.seeds[idx];
        const MarketPath finest = simulate_gbm(market);
        per_seed[idx] = refinement_diagnostics(finest, rule, spec.refinements);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const std::string& stat : refinement_stat_names()) {
    if (!generated && (stat == "r1" || stat == "r2")) continue;
    auto& rows = report.table[stat];
    rows.resize(spec.seeds.size());
    for (std::size_t s = 0; s < spec.seeds.size(); ++s) {
      rows[s].resize(spec.refinements.size());
      for (std::size_t l = 0; l < spec.refinements.size(); ++l)
        rows[s][l] = per_seed[s].stat(stat, l);
    }
    auto& med = report.medians[stat];
    med.resize(spec.refinements.size());
    for (std::size_t l = 0; l < spec.refinements.size(); ++l) {
      std::vector<double> column(spec.seeds.size());
      for (std::size_t s = 0; s < spec.seeds.size(); ++s) column[s] = rows[s][l];
      med[l] = median(std::move(column));
    }
    auto& ratios = report.median_ratios[stat];
    ratios.resize(spec.refinements.size() > 0 ? spec.refinements.size() - 1 : 0);
    for (std::size_t l = 0; l + 1 < spec.refinements.size(); ++l)
      ratios[l] = med[l] != 0.0 ? med[l + 1] / med[l]
                                : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

double ConvergenceReport::median_at(const std::string& stat, std::size_t level) const {
  auto it = medians.find(stat);
  if (it == medians.end())
    throw Error::validation("study has no statistic '" + stat + "'");
  if (level >= it->second.size()) throw Error::validation("study level out of range");
  return it->second[level];
}

std::string ConvergenceReport::to_json(
    const std::vector<std::pair<std::string, std::string>>& meta) const {
  nlohmann::json doc;
  doc["meta"] = nlohmann::json::object();
  for (const auto& [key, value] : meta) doc["meta"][key] = value;
  doc["portfolio"] = portfolio;
  doc["levels"] = levels;
  doc["seeds"] = seeds;
  doc["table"] = table;
  doc["medians"] = medians;
  doc["median_ratios"] = median_ratios;
  return doc.dump(2) + "\n";
}

namespace {

void put_number(std::ostringstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

std::string ConvergenceReport::table_csv() const {
  std::ostringstream out;
  out << "stat,seed,steps,value\n";
  for (const auto& [stat, rows] : table)
    for (std::size_t s = 0; s < rows.size(); ++s)
      for (std::size_t l = 0; l < rows[s].size(); ++l) {
        out << stat << ',' << seeds[s] << ',' << levels[l] << ',';
        put_number(out, rows[s][l]);
        out << '\n';
      }
  return out.str();
}

std::string ConvergenceReport::medians_csv() const {
  std::ostringstream out;
  out << "stat,steps,median,ratio_from_previous\n";
  for (const auto& [stat, med] : medians)
    for (std::size_t l = 0; l < med.size(); ++l) {
      out << stat << ',' << levels[l] << ',';
      put_number(out, med[l]);
      out << ',';
      if (l == 0) {
        out << "";
      } else {
        put_number(out, median_ratios.at(stat)[l - 1]);
      }
      out << '\n';
    }
  return out.str();
}

}  // namespace sptd
