#include "sptdecomp.h"

#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "core/csv_io.hpp"
#include "core/decomposition.hpp"
#include "core/errors.hpp"
#include "core/generators.hpp"
#include "core/integrate.hpp"
#include "core/market.hpp"
#include "core/paths.hpp"
#include "core/portfolio.hpp"
#include "core/time_grid.hpp"
#include "core/verification.hpp"
#include "core/weight_rules.hpp"

struct sptd_market {
  sptd::MarketPath path;
};
struct sptd_weights {
  sptd::WeightPath path;
};
struct sptd_series {
  sptd::TimeGrid grid;
  std::vector<double> values;
};
struct sptd_generator {
  sptd::GeneratorPtr generator;
};
struct sptd_report {
  sptd::DecompositionReport report;
};
struct sptd_refinement {
  sptd::RefinementReport report;
};
struct sptd_study {
  sptd::ConvergenceReport report;
};

namespace {

thread_local std::string g_last_error;

sptd_status fail(sptd_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

sptd_status map_error(const sptd::Error& e) {
  switch (e.code()) {
    case sptd::ErrorCode::validation:
      return fail(SPTD_ERR_VALIDATION, e.what());
    case sptd::ErrorCode::alignment:
      return fail(SPTD_ERR_ALIGNMENT, e.what());
    case sptd::ErrorCode::domain:
      return fail(SPTD_ERR_DOMAIN, e.what());
    case sptd::ErrorCode::ingest:
      return fail(SPTD_ERR_INGEST, e.what());
    case sptd::ErrorCode::numeric:
      return fail(SPTD_ERR_NUMERIC, e.what());
    case sptd::ErrorCode::io:
      return fail(SPTD_ERR_IO, e.what());
  }
  return fail(SPTD_ERR_INTERNAL, e.what());
}

template <typename Fn>
sptd_status guarded(Fn&& fn) {
  try {
    fn();
    return SPTD_OK;
  } catch (const sptd::Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    return fail(SPTD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPTD_ERR_INTERNAL, e.what());
  }
}

sptd_status require(bool ok, const char* what) {
  return ok ? SPTD_OK : fail(SPTD_ERR_INVALID_ARG, what);
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sptd::ScalarPath scalar_path_from(const double* values, size_t len) {
  std::vector<double> times(len);
  for (size_t k = 0; k < len; ++k) times[k] = static_cast<double>(k);
  return {sptd::TimeGrid(std::move(times)), std::vector<double>(values, values + len)};
}

sptd::GbmSpec gbm_spec_from(const sptd_gbm_spec& spec) {
  if (spec.num_stocks < 2) throw sptd::Error::validation("GBM spec needs at least 2 stocks");
  if (!spec.drift || !spec.covariance || !spec.initial_caps)
    throw sptd::Error::validation("GBM spec has a null buffer");
  const int n = spec.num_stocks;
  sptd::GbmSpec out;
  out.num_stocks = n;
  out.drift = Eigen::Map<const Eigen::VectorXd>(spec.drift, n);
  out.covariance = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                  Eigen::RowMajor>>(spec.covariance, n, n);
  out.initial_caps = Eigen::Map<const Eigen::VectorXd>(spec.initial_caps, n);
  out.horizon_years = spec.horizon_years;
  out.steps = spec.steps;
  out.seed = spec.seed;
  return out;
}

std::vector<std::pair<std::string, std::string>> meta_from(const char* const* keys,
                                                           const char* const* values,
                                                           size_t count) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    if (!keys[i] || !values[i]) throw sptd::Error::validation("meta entry is null");
    meta.emplace_back(keys[i], values[i]);
  }
  return meta;
}

}  // namespace

extern "C" {

const char* sptd_version(void) { return "0.1.0"; }

const char* sptd_last_error(void) { return g_last_error.c_str(); }

void sptd_string_free(char* s) { delete[] s; }

/* ---------- integration kernel ---------- */

static sptd_status integral_out(const sptd::CumulativePath& path, double* out) {
  const auto& values = path.values();
  std::memcpy(out, values.data(), values.size() * sizeof(double));
  return SPTD_OK;
}

sptd_status sptd_ito_integral(const double* y, const double* x, size_t len, double* out) {
  if (auto s = require(y && x && out && len >= 2, "ito_integral: bad arguments")) return s;
  return guarded([&] {
    integral_out(sptd::ito_integral(scalar_path_from(y, len), scalar_path_from(x, len)), out);
  });
}

sptd_status sptd_fs_integral(const double* y, const double* x, size_t len, double* out) {
  if (auto s = require(y && x && out && len >= 2, "fs_integral: bad arguments")) return s;
  return guarded([&] {
    integral_out(sptd::fs_integral(scalar_path_from(y, len), scalar_path_from(x, len)), out);
  });
}

sptd_status sptd_cross_variation(const double* x, const double* y, size_t len, double* out) {
  if (auto s = require(x && y && out && len >= 2, "cross_variation: bad arguments")) return s;
  return guarded([&] {
    integral_out(sptd::cross_variation(scalar_path_from(x, len), scalar_path_from(y, len)),
                 out);
  });
}

sptd_status sptd_total_variation(const double* values, size_t len, double* out) {
  if (auto s = require(values && out && len >= 1, "total_variation: bad arguments")) return s;
  double tv = 0.0;
  for (size_t k = 0; k + 1 < len; ++k) {
    const double inc = values[k + 1] - values[k];
    tv += inc < 0 ? -inc : inc;
  }
  *out = tv;
  return SPTD_OK;
}

/* ---------- market ---------- */

sptd_status sptd_market_simulate_gbm(const sptd_gbm_spec* spec, sptd_market** out) {
  if (auto s = require(spec && out, "simulate_gbm: bad arguments")) return s;
  return guarded([&] { *out = new sptd_market{sptd::simulate_gbm(gbm_spec_from(*spec))}; });
}

sptd_status sptd_market_from_csv(const char* data, size_t len, sptd_market** out) {
  if (auto s = require(data && out, "market_from_csv: bad arguments")) return s;
  return guarded([&] {
    *out = new sptd_market{sptd::ingest_caps_csv_string(std::string(data, len))};
  });
}

sptd_status sptd_market_from_csv_file(const char* path, sptd_market** out) {
  if (auto s = require(path && out, "market_from_csv_file: bad arguments")) return s;
  return guarded([&] { *out = new sptd_market{sptd::ingest_caps_csv_file(path)}; });
}

sptd_status sptd_market_to_csv(const sptd_market* m, char** out) {
  if (auto s = require(m && out, "market_to_csv: bad arguments")) return s;
  return guarded([&] { *out = copy_string(sptd::caps_csv_string(m->path)); });
}

sptd_status sptd_market_leapfrog(const double* caps_descending, int32_t num_stocks,
                                 int32_t swap_rank, int32_t swap, sptd_market** out) {
  if (auto s = require(caps_descending && out && num_stocks > 0, "leapfrog: bad arguments"))
    return s;
  return guarded([&] {
    *out = new sptd_market{
        sptd::leapfrog_market(Eigen::Map<const Eigen::VectorXd>(caps_descending, num_stocks),
                              swap_rank, swap != 0)};
  });
}

sptd_status sptd_market_subsample(const sptd_market* m, int32_t stride, sptd_market** out) {
  if (auto s = require(m && out && stride >= 1, "subsample: bad arguments")) return s;
  return guarded([&] {
    *out = new sptd_market{m->path.subsample(static_cast<size_t>(stride))};
  });
}

int32_t sptd_market_num_stocks(const sptd_market* m) { return m ? m->path.num_stocks() : 0; }

int32_t sptd_market_num_times(const sptd_market* m) {
  return m ? static_cast<int32_t>(m->path.num_times()) : 0;
}

sptd_status sptd_market_times(const sptd_market* m, double* out) {
  if (auto s = require(m && out, "market_times: bad arguments")) return s;
  const auto& times = m->path.grid().times();
  std::memcpy(out, times.data(), times.size() * sizeof(double));
  return SPTD_OK;
}

sptd_status sptd_market_caps(const sptd_market* m, double* out) {
  if (auto s = require(m && out, "market_caps: bad arguments")) return s;
  const auto& caps = m->path.caps();
  for (Eigen::Index i = 0; i < caps.rows(); ++i)
    for (Eigen::Index k = 0; k < caps.cols(); ++k) out[i * caps.cols() + k] = caps(i, k);
  return SPTD_OK;
}

const char* sptd_market_ticker(const sptd_market* m, int32_t stock) {
  if (!m || stock < 0 || stock >= m->path.num_stocks()) return nullptr;
  return m->path.tickers()[static_cast<size_t>(stock)].c_str();
}

void sptd_market_free(sptd_market* m) { delete m; }

/* ---------- weights ---------- */

sptd_status sptd_market_weights(const sptd_market* m, sptd_weights** out) {
  if (auto s = require(m && out, "market_weights: bad arguments")) return s;
  return guarded([&] { *out = new sptd_weights{sptd::market_weights(m->path)}; });
}

sptd_status sptd_weights_from_rule(const sptd_market* m, const char* rule,
                                   sptd_weights** out) {
  if (auto s = require(m && rule && out, "weights_from_rule: bad arguments")) return s;
  return guarded([&] {
    const sptd::WeightRule parsed = sptd::WeightRule::parse(rule, m->path.num_stocks());
    *out = new sptd_weights{parsed.weights(m->path)};
  });
}

sptd_status sptd_weights_create(const sptd_market* m, const double* weights,
                                sptd_weights** out) {
  if (auto s = require(m && weights && out, "weights_create: bad arguments")) return s;
  return guarded([&] {
    const Eigen::Index n = m->path.num_stocks();
    const Eigen::Index nu = static_cast<Eigen::Index>(m->path.num_times());
    Eigen::MatrixXd w(n, nu);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < nu; ++k) w(i, k) = weights[i * nu + k];
    *out = new sptd_weights{sptd::WeightPath(m->path.grid(), std::move(w))};
  });
}

int32_t sptd_weights_num_stocks(const sptd_weights* w) {
  return w ? w->path.num_stocks() : 0;
}

int32_t sptd_weights_num_times(const sptd_weights* w) {
  return w ? static_cast<int32_t>(w->path.num_times()) : 0;
}

sptd_status sptd_weights_values(const sptd_weights* w, double* out) {
  if (auto s = require(w && out, "weights_values: bad arguments")) return s;
  const auto& weights = w->path.weights();
  for (Eigen::Index i = 0; i < weights.rows(); ++i)
    for (Eigen::Index k = 0; k < weights.cols(); ++k)
      out[i * weights.cols() + k] = weights(i, k);
  return SPTD_OK;
}

void sptd_weights_free(sptd_weights* w) { delete w; }

/* ---------- generators ---------- */

sptd_status sptd_generator_create(const char* spec, int32_t num_stocks,
                                  sptd_generator** out) {
  if (auto s = require(spec && out, "generator_create: bad arguments")) return s;
  return guarded([&] {
    sptd::GeneratorPtr g = sptd::parse_generator(spec, num_stocks);
    // Spot-check the generation condition on a random interior lattice.
    sptd::generation_condition_sup(*g, num_stocks, 10000, 0x5eed);
    *out = new sptd_generator{std::move(g)};
  });
}

sptd_status sptd_generator_value(const sptd_generator* g, const double* x, int32_t n,
                                 double* out) {
  if (auto s = require(g && x && out && n >= 2, "generator_value: bad arguments")) return s;
  return guarded([&] { *out = g->generator->value(Eigen::Map<const Eigen::VectorXd>(x, n)); });
}

sptd_status sptd_generator_log_gradient(const sptd_generator* g, const double* x, int32_t n,
                                        double* out) {
  if (auto s = require(g && x && out && n >= 2, "generator_log_gradient: bad arguments"))
    return s;
  return guarded([&] {
    const Eigen::VectorXd grad =
        g->generator->log_gradient(Eigen::Map<const Eigen::VectorXd>(x, n));
    std::memcpy(out, grad.data(), static_cast<size_t>(n) * sizeof(double));
  });
}

sptd_status sptd_generator_hessian(const sptd_generator* g, const double* x, int32_t n,
                                   double* out) {
  if (auto s = require(g && x && out && n >= 2, "generator_hessian: bad arguments")) return s;
  return guarded([&] {
    const Eigen::MatrixXd h = g->generator->hessian(Eigen::Map<const Eigen::VectorXd>(x, n));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out[i * n + j] = h(i, j);
  });
}

sptd_status sptd_generated_weights(const sptd_generator* g, const sptd_weights* mu,
                                   sptd_weights** out) {
  if (auto s = require(g && mu && out, "generated_weights: bad arguments")) return s;
  return guarded([&] {
    *out = new sptd_weights{sptd::generated_weights(*g->generator, mu->path)};
  });
}

sptd_status sptd_drift_process(const sptd_generator* g, const sptd_weights* mu,
                               sptd_series** out) {
  if (auto s = require(g && mu && out, "drift_process: bad arguments")) return s;
  return guarded([&] {
    sptd::CumulativePath theta = sptd::drift_process(*g->generator, mu->path);
    *out = new sptd_series{theta.grid(), theta.values()};
  });
}

void sptd_generator_free(sptd_generator* g) { delete g; }

/* ---------- portfolio machinery ---------- */

sptd_status sptd_value_process(const sptd_market* m, const sptd_weights* w,
                               sptd_series** out) {
  if (auto s = require(m && w && out, "value_process: bad arguments")) return s;
  return guarded([&] {
    sptd::ValuePath z = sptd::value_process(m->path, w->path);
    *out = new sptd_series{z.grid(), z.values()};
  });
}

sptd_status sptd_relative_log_return(const sptd_series* zp, const sptd_series* zm,
                                     sptd_series** out) {
  if (auto s = require(zp && zm && out, "relative_log_return: bad arguments")) return s;
  return guarded([&] {
    sptd::CumulativePath rel =
        sptd::relative_log_return(sptd::ValuePath(zp->grid, zp->values),
                                  sptd::ValuePath(zm->grid, zm->values));
    *out = new sptd_series{rel.grid(), rel.values()};
  });
}

sptd_status sptd_excess_growth_cumulative(const sptd_market* m, const sptd_weights* w,
                                          sptd_series** out) {
  if (auto s = require(m && w && out, "excess_growth: bad arguments")) return s;
  return guarded([&] {
    sptd::CumulativePath gamma = sptd::excess_growth_rate(m->path, w->path).cumulative();
    *out = new sptd_series{gamma.grid(), gamma.values()};
  });
}

sptd_status sptd_structural_process(const sptd_weights* w, const sptd_weights* mu,
                                    sptd_series** out) {
  if (auto s = require(w && mu && out, "structural_process: bad arguments")) return s;
  return guarded([&] {
    sptd::CumulativePath structural = sptd::structural_process(w->path, mu->path);
    *out = new sptd_series{structural.grid(), structural.values()};
  });
}

int32_t sptd_series_length(const sptd_series* s) {
  return s ? static_cast<int32_t>(s->values.size()) : 0;
}

sptd_status sptd_series_times(const sptd_series* s, double* out) {
  if (auto st = require(s && out, "series_times: bad arguments")) return st;
  const auto& times = s->grid.times();
  std::memcpy(out, times.data(), times.size() * sizeof(double));
  return SPTD_OK;
}

sptd_status sptd_series_values(const sptd_series* s, double* out) {
  if (auto st = require(s && out, "series_values: bad arguments")) return st;
  std::memcpy(out, s->values.data(), s->values.size() * sizeof(double));
  return SPTD_OK;
}

void sptd_series_free(sptd_series* s) { delete s; }

/* ---------- decomposition ---------- */

sptd_status sptd_decompose(const sptd_market* m, const sptd_weights* w,
                           const sptd_generator* g, sptd_report** out) {
  if (auto s = require(m && w && out, "decompose: bad arguments")) return s;
  return guarded([&] {
    *out = new sptd_report{
        sptd::decompose(m->path, w->path, g ? g->generator : sptd::GeneratorPtr())};
  });
}

int32_t sptd_report_num_paths(const sptd_report* r) {
  return r ? static_cast<int32_t>(r->report.paths().size()) : 0;
}

const char* sptd_report_path_name(const sptd_report* r, int32_t index) {
  if (!r) return nullptr;
  const auto paths = r->report.paths();
  if (index < 0 || index >= static_cast<int32_t>(paths.size())) return nullptr;
  // Valid until the next call on this thread, like sptd_last_error.
  static thread_local std::string name;
  name = paths[static_cast<size_t>(index)].first;
  return name.c_str();
}

sptd_status sptd_report_path(const sptd_report* r, const char* name, sptd_series** out) {
  if (auto s = require(r && name && out, "report_path: bad arguments")) return s;
  return guarded([&] {
    for (const auto& [path_name, path] : r->report.paths()) {
      if (path_name == name) {
        *out = new sptd_series{path->grid(), path->values()};
        return;
      }
    }
    throw sptd::Error::validation("report has no path named '" + std::string(name) + "'");
  });
}

int32_t sptd_report_num_diagnostics(const sptd_report* r) {
  return r ? static_cast<int32_t>(r->report.diagnostics.size()) : 0;
}

const char* sptd_report_diagnostic_name(const sptd_report* r, int32_t index) {
  if (!r || index < 0 || index >= static_cast<int32_t>(r->report.diagnostics.size()))
    return nullptr;
  auto it = r->report.diagnostics.begin();
  std::advance(it, index);
  return it->first.c_str();
}

sptd_status sptd_report_diagnostic(const sptd_report* r, const char* name, double* out) {
  if (auto s = require(r && name && out, "report_diagnostic: bad arguments")) return s;
  auto it = r->report.diagnostics.find(name);
  if (it == r->report.diagnostics.end())
    return fail(SPTD_ERR_VALIDATION,
                "report has no diagnostic named '" + std::string(name) + "'");
  *out = it->second;
  return SPTD_OK;
}

int32_t sptd_report_weights_match(const sptd_report* r) {
  return r && r->report.weights_match_generator ? 1 : 0;
}

sptd_status sptd_report_to_json(const sptd_report* r, const char* const* meta_keys,
                                const char* const* meta_values, size_t meta_count,
                                char** out) {
  if (auto s = require(r && out && (meta_count == 0 || (meta_keys && meta_values)),
                       "report_to_json: bad arguments"))
    return s;
  return guarded([&] {
    *out = copy_string(r->report.to_json(meta_from(meta_keys, meta_values, meta_count)));
  });
}

sptd_status sptd_report_to_csv(const sptd_report* r, char** out) {
  if (auto s = require(r && out, "report_to_csv: bad arguments")) return s;
  return guarded([&] { *out = copy_string(r->report.to_csv()); });
}

void sptd_report_free(sptd_report* r) { delete r; }

/* ---------- verification ---------- */

sptd_status sptd_verify_prop1(const sptd_market* finest, const char* rule,
                              sptd_refinement** out) {
  if (auto s = require(finest && rule && out, "verify_prop1: bad arguments")) return s;
  return guarded([&] {
    const sptd::WeightRule parsed =
        sptd::WeightRule::parse(rule, finest->path.num_stocks());
    *out = new sptd_refinement{sptd::verify_prop1(finest->path, parsed)};
  });
}

sptd_status sptd_verify_prop2(const sptd_market* finest, const char* generator,
                              sptd_refinement** out) {
  if (auto s = require(finest && generator && out, "verify_prop2: bad arguments")) return s;
  return guarded([&] {
    *out = new sptd_refinement{sptd::verify_prop2(
        finest->path, sptd::parse_generator(generator, finest->path.num_stocks()))};
  });
}

int32_t sptd_refinement_num_levels(const sptd_refinement* r) {
  return r ? static_cast<int32_t>(r->report.levels.size()) : 0;
}

sptd_status sptd_refinement_steps(const sptd_refinement* r, int32_t level, int32_t* out) {
  if (auto s = require(r && out, "refinement_steps: bad arguments")) return s;
  if (level < 0 || level >= static_cast<int32_t>(r->report.levels.size()))
    return fail(SPTD_ERR_VALIDATION, "refinement level out of range");
  *out = r->report.levels[static_cast<size_t>(level)].steps;
  return SPTD_OK;
}

sptd_status sptd_refinement_stat(const sptd_refinement* r, const char* stat, int32_t level,
                                 double* out) {
  if (auto s = require(r && stat && out, "refinement_stat: bad arguments")) return s;
  return guarded([&] { *out = r->report.stat(stat, static_cast<size_t>(level)); });
}

void sptd_refinement_free(sptd_refinement* r) { delete r; }

sptd_status sptd_study_run(const sptd_study_spec* spec, sptd_study** out) {
  if (auto s = require(spec && out && spec->refinements && spec->seeds && spec->portfolio,
                       "study_run: bad arguments"))
    return s;
  return guarded([&] {
    sptd::StudySpec core;
    core.market = gbm_spec_from(spec->market);
    core.refinements.assign(spec->refinements, spec->refinements + spec->num_refinements);
    core.seeds.assign(spec->seeds, spec->seeds + spec->num_seeds);
    core.portfolio = spec->portfolio;
    core.max_threads = spec->max_threads;
    *out = new sptd_study{sptd::run_convergence_study(core)};
  });
}

sptd_status sptd_study_median(const sptd_study* s, const char* stat, int32_t level,
                              double* out) {
  if (auto st = require(s && stat && out, "study_median: bad arguments")) return st;
  return guarded([&] { *out = s->report.median_at(stat, static_cast<size_t>(level)); });
}

sptd_status sptd_study_value(const sptd_study* s, const char* stat, int32_t seed_index,
                             int32_t level, double* out) {
  if (auto st = require(s && stat && out, "study_value: bad arguments")) return st;
  auto it = s->report.table.find(stat);
  if (it == s->report.table.end())
    return fail(SPTD_ERR_VALIDATION, "study has no statistic '" + std::string(stat) + "'");
  if (seed_index < 0 || seed_index >= static_cast<int32_t>(it->second.size()))
    return fail(SPTD_ERR_VALIDATION, "study seed index out of range");
  const auto& row = it->second[static_cast<size_t>(seed_index)];
  if (level < 0 || level >= static_cast<int32_t>(row.size()))
    return fail(SPTD_ERR_VALIDATION, "study level out of range");
  *out = row[static_cast<size_t>(level)];
  return SPTD_OK;
}

sptd_status sptd_study_to_json(const sptd_study* s, const char* const* meta_keys,
                               const char* const* meta_values, size_t meta_count,
                               char** out) {
  if (auto st = require(s && out && (meta_count == 0 || (meta_keys && meta_values)),
                        "study_to_json: bad arguments"))
    return st;
  return guarded([&] {
    *out = copy_string(s->report.to_json(meta_from(meta_keys, meta_values, meta_count)));
  });
}

sptd_status sptd_study_table_csv(const sptd_study* s, char** out) {
  if (auto st = require(s && out, "study_table_csv: bad arguments")) return st;
  return guarded([&] { *out = copy_string(s->report.table_csv()); });
}

sptd_status sptd_study_medians_csv(const sptd_study* s, char** out) {
  if (auto st = require(s && out, "study_medians_csv: bad arguments")) return st;
  return guarded([&] { *out = copy_string(s->report.medians_csv()); });
}

void sptd_study_free(sptd_study* s) { delete s; }

}  // extern "C"
