#include "core/decomposition.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace sptd {

namespace {

constexpr double kGeneratedWeightTolerance = 1e-9;

double sup_abs_difference(const CumulativePath& a, const CumulativePath& b) {
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sup = std::max(sup, std::abs(a[k] - b[k]));
  return sup;
}

double sup_abs(const CumulativePath& a) {
  double sup = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sup = std::max(sup, std::abs(a[k]));
  return sup;
}

}  // namespace

CumulativePath structural_process(const WeightPath& w, const WeightPath& mu) {
  require_same_grid(w.grid(), mu.grid(), "structural_process");
  if (w.num_stocks() != mu.num_stocks())
    throw Error::validation("structural_process: weight paths disagree on stock count");
  const int n = w.num_stocks();
  std::vector<double> increments(w.grid().intervals());
  for (std::size_t k = 0; k < increments.size(); ++k) {
    double inc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mu_now = mu.weight(i, k);
      const double mu_next = mu.weight(i, k + 1);
      if (!(mu_now >= kInteriorFloor) || !(mu_next >= kInteriorFloor))
        throw Error::domain("market weight of stock " + std::to_string(i + 1) +
                            " near time index " + std::to_string(k) +
                            " is below the interior floor");
      inc += 0.5 * (w.weight(i, k) + w.weight(i, k + 1)) * std::log(mu_next / mu_now);
    }
    increments[k] = inc;
  }
  return CumulativePath::from_increments(w.grid(), increments);
}

CumulativePath trading_process(const CumulativePath& rel, const CumulativePath& structural) {
  require_same_grid(rel.grid(), structural.grid(), "trading_process");
  std::vector<double> values(rel.size());
  for (std::size_t k = 0; k < rel.size(); ++k) values[k] = rel[k] - structural[k];
  return {rel.grid(), std::move(values)};
}

double total_variation(const CumulativePath& p) { return total_variation(p.values()); }

double total_variation(const std::vector<double>& values) {
  double tv = 0.0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) tv += std::abs(values[k + 1] - values[k]);
  return tv;
}

DecompositionReport decompose(const MarketPath& m, const WeightPath& w,
                              const GeneratorPtr& g) {
  const WeightPath mu = market_weights(m);
  const ValuePath zp = value_process(m, w);
  const ValuePath zm = value_process(m, mu);

  CumulativePath rel = relative_log_return(zp, zm);
  CumulativePath structural = structural_process(w, mu);
  CumulativePath trading = trading_process(rel, structural);

  DecompositionReport report{m.grid(),        std::move(rel), std::move(structural),
                             std::move(trading), std::nullopt,   std::nullopt,
                             {},              true};

  double identity_residual = 0.0;
  for (std::size_t k = 0; k < report.relative_log_return.size(); ++k)
    identity_residual = std::max(
        identity_residual, std::abs(report.relative_log_return[k] - report.structural[k] -
                                    report.trading[k]));
  report.diagnostics["sup_decomposition_residual"] = identity_residual;
  report.diagnostics["sup_trading"] = sup_abs(report.trading);
  report.diagnostics["tv_rel"] = total_variation(report.relative_log_return);
  report.diagnostics["tv_structural"] = total_variation(report.structural);
  report.diagnostics["tv_trading"] = total_variation(report.trading);

  if (g) {
    const WeightPath expected = generated_weights(*g, mu);
    double mismatch = 0.0;
    for (std::size_t k = 0; k < w.num_times(); ++k)
      for (int i = 0; i < w.num_stocks(); ++i)
        mismatch = std::max(mismatch, std::abs(w.weight(i, k) - expected.weight(i, k)));
    report.weights_match_generator = mismatch <= kGeneratedWeightTolerance;
    report.diagnostics["weight_mismatch_sup"] = mismatch;

    report.drift = drift_process(*g, mu);
    report.generator_log_change = generator_log_change(*g, mu);
    report.diagnostics["sup_structural_minus_generator_log_change"] =
        sup_abs_difference(report.structural, *report.generator_log_change);
    report.diagnostics["sup_trading_minus_drift"] =
        sup_abs_difference(report.trading, *report.drift);
    report.diagnostics["tv_drift"] = total_variation(*report.drift);
  }
  return report;
}

std::vector<std::pair<std::string, const CumulativePath*>> DecompositionReport::paths()
    const {
  std::vector<std::pair<std::string, const CumulativePath*>> out{
      {"relative_log_return", &relative_log_return},
      {"structural", &structural},
      {"trading", &trading}};
  if (drift) out.emplace_back("drift", &*drift);
  if (generator_log_change) out.emplace_back("generator_log_change", &*generator_log_change);
  return out;
}

std::string DecompositionReport::to_json(
    const std::vector<std::pair<std::string, std::string>>& meta) const {
  nlohmann::json doc;
  doc["meta"] = nlohmann::json::object();
  for (const auto& [key, value] : meta) doc["meta"][key] = value;
  doc["grid"] = grid.times();
  doc["paths"] = nlohmann::json::object();
  for (const auto& [name, path] : paths()) doc["paths"][name] = path->values();
  doc["diagnostics"] = diagnostics;
  return doc.dump(2) + "\n";
}

std::string DecompositionReport::to_csv() const {
  const bool with_generator = drift.has_value();
  std::ostringstream out;
  out << "time,rel,structural,trading";
  if (with_generator) out << ",drift,generator_log_change";
  out << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < grid.size(); ++k) {
    put(grid[k]);
    out << ',';
    put(relative_log_return[k]);
    out << ',';
    put(structural[k]);
    out << ',';
    put(trading[k]);
    if (with_generator) {
      out << ',';
      put((*drift)[k]);
      out << ',';
      put((*generator_log_change)[k]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace sptd
