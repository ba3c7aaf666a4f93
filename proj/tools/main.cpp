// Command-line surface over the sptdecomp C API: simulate markets, decompose
// portfolio returns, run convergence studies, and replay the rank-swap
// experiment. Everything is config-driven and deterministic per seed; the
// config file is copied into the output directory next to the results.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "sptdecomp.h"

namespace {

namespace fs = std::filesystem;
using sptcli::Config;
using sptcli::ConfigError;

struct CApiError : std::runtime_error {
  CApiError(sptd_status status, const std::string& message)
      : std::runtime_error(message), status(status) {}
  sptd_status status;
};

void check(sptd_status status) {
  if (status != SPTD_OK) throw CApiError(status, sptd_last_error());
}

template <typename T>
struct HandleDeleter;
template <>
struct HandleDeleter<sptd_market> {
  void operator()(sptd_market* p) const { sptd_market_free(p); }
};
template <>
struct HandleDeleter<sptd_weights> {
  void operator()(sptd_weights* p) const { sptd_weights_free(p); }
};
template <>
struct HandleDeleter<sptd_series> {
  void operator()(sptd_series* p) const { sptd_series_free(p); }
};
template <>
struct HandleDeleter<sptd_generator> {
  void operator()(sptd_generator* p) const { sptd_generator_free(p); }
};
template <>
struct HandleDeleter<sptd_report> {
  void operator()(sptd_report* p) const { sptd_report_free(p); }
};
template <>
struct HandleDeleter<sptd_study> {
  void operator()(sptd_study* p) const { sptd_study_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, HandleDeleter<T>>;

struct CString {
  char* data = nullptr;
  ~CString() { sptd_string_free(data); }
  std::string str() const { return data ? data : ""; }
};

struct Options {
  std::string config_path;
  std::string out_dir;     // overrides [run] out
  std::string seed_list;   // overrides [run] seeds
  std::string format;      // overrides [run] format
};

enum class Format { json, csv, both };

Format parse_format(const std::string& text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  if (text == "both") return Format::both;
  throw ConfigError("format must be json, csv or both, got '" + text + "'");
}

struct RunSettings {
  std::vector<uint64_t> seeds;
  std::string out_dir;
  Format format = Format::both;
  int max_threads = 0;
};

RunSettings run_settings(const Config& config, const Options& options) {
  RunSettings settings;
  if (!options.seed_list.empty())
    settings.seeds = Config::parse_string("[run]\nseeds = " + options.seed_list, "--seed")
                         .get_seeds("run", "seeds");
  else if (config.has("run", "seeds"))
    settings.seeds = config.get_seeds("run", "seeds");
  else
    settings.seeds = {1};
  settings.out_dir = !options.out_dir.empty() ? options.out_dir
                                              : config.get_string_or("run", "out", "out");
  settings.format = parse_format(
      !options.format.empty() ? options.format : config.get_string_or("run", "format", "both"));
  if (const char* env = std::getenv("SPT_DECOMP_THREADS")) {
    try {
      settings.max_threads = std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      throw ConfigError("SPT_DECOMP_THREADS must be an integer, got '" + std::string(env) +
                        "'");
    }
  }
  return settings;
}

std::vector<double> expanded(const Config& config, const std::string& key, int n,
                             double fallback) {
  if (!config.has("market", key)) return std::vector<double>(static_cast<size_t>(n), fallback);
  std::vector<double> values = config.get_doubles("market", key);
  if (values.size() == 1) return std::vector<double>(static_cast<size_t>(n), values[0]);
  if (static_cast<int>(values.size()) != n)
    throw ConfigError("[market] " + key + " needs 1 or " + std::to_string(n) + " entries");
  return values;
}

// "diag:v", "diag:v1,...,vn", or "full:r11,...,r1n;...;rn1,...,rnn".
std::vector<double> parse_covariance(const std::string& text, int n) {
  std::vector<double> cov(static_cast<size_t>(n) * n, 0.0);
  if (text.rfind("diag:", 0) == 0) {
    std::vector<double> diag = sptcli::parse_double_list(text.substr(5), "covariance");
    if (diag.size() == 1) diag.assign(static_cast<size_t>(n), diag[0]);
    if (static_cast<int>(diag.size()) != n)
      throw ConfigError("covariance diag needs 1 or " + std::to_string(n) + " entries");
    for (int i = 0; i < n; ++i) cov[static_cast<size_t>(i) * n + i] = diag[static_cast<size_t>(i)];
    return cov;
  }
  if (text.rfind("full:", 0) == 0) {
    std::string rows = text.substr(5);
    int row = 0;
    std::size_t start = 0;
    while (start <= rows.size()) {
      const auto semi = rows.find(';', start);
      const std::string row_text =
          semi == std::string::npos ? rows.substr(start) : rows.substr(start, semi - start);
      std::vector<double> entries = sptcli::parse_double_list(row_text, "covariance row");
      if (static_cast<int>(entries.size()) != n || row >= n)
        throw ConfigError("covariance full form needs " + std::to_string(n) + " x " +
                          std::to_string(n) + " entries");
      for (int j = 0; j < n; ++j) cov[static_cast<size_t>(row) * n + j] = entries[static_cast<size_t>(j)];
      ++row;
      if (semi == std::string::npos) break;
      start = semi + 1;
    }
    if (row != n)
      throw ConfigError("covariance full form needs " + std::to_string(n) + " rows");
    return cov;
  }
  throw ConfigError("covariance must start with diag: or full:, got '" + text + "'");
}

struct GbmConfig {
  int n = 0;
  std::vector<double> drift, covariance, initial_caps;
  double horizon = 1.0;
  int steps = 252;
};

GbmConfig gbm_config(const Config& config) {
  GbmConfig gbm;
  gbm.n = config.get_int("market", "n");
  if (gbm.n < 2) throw ConfigError("[market] n must be at least 2");
  gbm.drift = expanded(config, "drift", gbm.n, 0.0);
  gbm.covariance = parse_covariance(config.get_string("market", "covariance"), gbm.n);
  gbm.initial_caps = expanded(config, "initial_caps", gbm.n, 1.0);
  gbm.horizon = config.get_double_or("market", "horizon", 1.0);
  gbm.steps = config.get_int_or("market", "steps", 252);
  return gbm;
}

sptd_gbm_spec gbm_spec(const GbmConfig& gbm, uint64_t seed, int steps) {
  sptd_gbm_spec spec{};
  spec.num_stocks = gbm.n;
  spec.steps = steps;
  spec.horizon_years = gbm.horizon;
  spec.seed = seed;
  spec.drift = gbm.drift.data();
  spec.covariance = gbm.covariance.data();
  spec.initial_caps = gbm.initial_caps.data();
  return spec;
}

Handle<sptd_market> build_market(const Config& config, uint64_t seed) {
  const std::string kind = config.get_string("market", "kind");
  sptd_market* market = nullptr;
  if (kind == "gbm") {
    const GbmConfig gbm = gbm_config(config);
    const sptd_gbm_spec spec = gbm_spec(gbm, seed, gbm.steps);
    check(sptd_market_simulate_gbm(&spec, &market));
  } else if (kind == "csv") {
    check(sptd_market_from_csv_file(config.get_string("market", "path").c_str(), &market));
  } else {
    throw ConfigError("[market] kind must be gbm or csv, got '" + kind + "'");
  }
  return Handle<sptd_market>(market);
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CApiError(SPTD_ERR_IO, "cannot open '" + path.string() + "' for writing");
  out << data;
  if (!out) throw CApiError(SPTD_ERR_IO, "failed writing '" + path.string() + "'");
  std::cout << "wrote " << path.string() << "\n";
}

fs::path prepare_out_dir(const RunSettings& settings, const Config& config) {
  const fs::path dir(settings.out_dir);
  fs::create_directories(dir);
  write_file(dir / "config.ini", config.text());
  return dir;
}

std::vector<double> series_values(const sptd_series* series) {
  std::vector<double> values(static_cast<size_t>(sptd_series_length(series)));
  check(sptd_series_values(series, values.data()));
  return values;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Meta {
  std::vector<std::string> keys, values;
  std::vector<const char*> key_ptrs, value_ptrs;
  void add(const std::string& key, const std::string& value) {
    keys.push_back(key);
    values.push_back(value);
  }
  void finalize() {
    for (const auto& k : keys) key_ptrs.push_back(k.c_str());
    for (const auto& v : values) value_ptrs.push_back(v.c_str());
  }
};

Meta base_meta(const std::string& command, const Config& config) {
  Meta meta;
  meta.add("tool", std::string("sptdecomp ") + sptd_version());
  meta.add("command", command);
  if (config.has("portfolio", "rule")) meta.add("portfolio", config.get_string("portfolio", "rule"));
  return meta;
}

int cmd_simulate(const Config& config, const Options& options) {
  const RunSettings settings = run_settings(config, options);
  const fs::path dir = prepare_out_dir(settings, config);
  const std::string kind = config.get_string("market", "kind");
  for (uint64_t seed : settings.seeds) {
    Handle<sptd_market> market = build_market(config, seed);
    CString csv;
    check(sptd_market_to_csv(market.get(), &csv.data));
    const std::string name =
        kind == "csv" ? "market.csv" : "market_seed" + std::to_string(seed) + ".csv";
    write_file(dir / name, csv.str());
    if (kind == "csv") break;  // ingested data does not depend on the seed
  }
  return 0;
}

void report_outputs(const fs::path& dir, const std::string& stem, const sptd_report* report,
                    Meta meta, Format format) {
  meta.finalize();
  if (format != Format::csv) {
    CString json;
    check(sptd_report_to_json(report, meta.key_ptrs.data(), meta.value_ptrs.data(),
                              meta.key_ptrs.size(), &json.data));
    write_file(dir / (stem + ".json"), json.str());
  }
  if (format != Format::json) {
    CString csv;
    check(sptd_report_to_csv(report, &csv.data));
    write_file(dir / (stem + ".csv"), csv.str());
  }
}

int cmd_decompose(const Config& config, const Options& options) {
  const RunSettings settings = run_settings(config, options);
  const fs::path dir = prepare_out_dir(settings, config);
  const std::string rule = config.get_string("portfolio", "rule");
  const std::string kind = config.get_string("market", "kind");

  for (uint64_t seed : settings.seeds) {
    Handle<sptd_market> market = build_market(config, seed);
    sptd_weights* weights = nullptr;
    check(sptd_weights_from_rule(market.get(), rule.c_str(), &weights));
    Handle<sptd_weights> weights_handle(weights);

    // Functionally generated rules also get the generator-side paths.
    sptd_generator* generator = nullptr;
    if (sptd_generator_create(rule.c_str(), sptd_market_num_stocks(market.get()),
                              &generator) != SPTD_OK)
      generator = nullptr;
    Handle<sptd_generator> generator_handle(generator);

    sptd_report* report = nullptr;
    check(sptd_decompose(market.get(), weights, generator, &report));
    Handle<sptd_report> report_handle(report);

    if (!sptd_report_weights_match(report)) {
      double mismatch = 0.0;
      sptd_report_diagnostic(report, "weight_mismatch_sup", &mismatch);
      std::cerr << "warning: weights do not match the generator (sup mismatch "
                << format_double(mismatch) << ")\n";
    }

    double sup_trading = 0.0, identity = 0.0;
    check(sptd_report_diagnostic(report, "sup_trading", &sup_trading));
    check(sptd_report_diagnostic(report, "sup_decomposition_residual", &identity));
    std::cout << "seed " << seed << ": sup|trading| = " << format_double(sup_trading)
              << ", identity residual = " << format_double(identity) << "\n";

    Meta meta = base_meta("decompose", config);
    meta.add("market", kind);
    if (kind == "gbm") meta.add("seed", std::to_string(seed));
    const std::string stem =
        kind == "csv" ? "decomposition" : "decomposition_seed" + std::to_string(seed);
    report_outputs(dir, stem, report, std::move(meta), settings.format);
    if (kind == "csv") break;
  }
  return 0;
}

int cmd_convergence(const Config& config, const Options& options) {
  const RunSettings settings = run_settings(config, options);
  const fs::path dir = prepare_out_dir(settings, config);
  if (config.get_string("market", "kind") != "gbm")
    throw ConfigError("convergence studies need [market] kind = gbm");

  const GbmConfig gbm = gbm_config(config);
  std::vector<int> refinements = config.get_ints("run", "refinements");
  std::vector<int32_t> refinements32(refinements.begin(), refinements.end());

  sptd_study_spec spec{};
  spec.market = gbm_spec(gbm, 0, refinements.empty() ? 0 : refinements.back());
  spec.refinements = refinements32.data();
  spec.num_refinements = refinements32.size();
  spec.seeds = settings.seeds.data();
  spec.num_seeds = settings.seeds.size();
  const std::string rule = config.get_string("portfolio", "rule");
  spec.portfolio = rule.c_str();
  spec.max_threads = settings.max_threads;

  sptd_study* study = nullptr;
  check(sptd_study_run(&spec, &study));
  Handle<sptd_study> study_handle(study);

  for (const char* stat : {"r1", "r2", "tv_rel", "tv_trading", "sup_trading",
                           "sup_trading_minus_gamma"}) {
    std::string line = "median " + std::string(stat) + ":";
    bool available = true;
    for (size_t level = 0; level < refinements.size(); ++level) {
      double value = 0.0;
      if (sptd_study_median(study, stat, static_cast<int32_t>(level), &value) != SPTD_OK) {
        available = false;
        break;
      }
      line += (level ? " -> " : " ") + format_double(value);
    }
    if (available) std::cout << line << "\n";
  }

  Meta meta = base_meta("convergence", config);
  meta.finalize();
  if (settings.format != Format::csv) {
    CString json;
    check(sptd_study_to_json(study, meta.key_ptrs.data(), meta.value_ptrs.data(),
                             meta.key_ptrs.size(), &json.data));
    write_file(dir / "convergence.json", json.str());
  }
  if (settings.format != Format::json) {
    CString table, medians;
    check(sptd_study_table_csv(study, &table.data));
    write_file(dir / "residuals.csv", table.str());
    check(sptd_study_medians_csv(study, &medians.data));
    write_file(dir / "medians.csv", medians.str());
  }
  return 0;
}

int cmd_leapfrog(const Config& config, const Options& options) {
  const RunSettings settings = run_settings(config, options);
  const fs::path dir = prepare_out_dir(settings, config);

  const int n = config.get_int("leapfrog", "n");
  const int m = config.get_int("leapfrog", "m");
  if (m < 1 || m > n)
    throw ConfigError("[leapfrog] m must be between 1 and n");
  std::vector<double> caps = config.get_doubles("leapfrog", "caps");
  if (static_cast<int>(caps.size()) != n)
    throw ConfigError("[leapfrog] caps needs n entries");

  // With m = n the portfolio is the whole market; the swap then happens at
  // the deepest interior boundary so there is still a crossing to watch.
  const int swap_rank = std::min(m, n - 1);
  const std::string swap_text = config.get_string_or("leapfrog", "swap", "true");
  if (swap_text != "true" && swap_text != "false")
    throw ConfigError("[leapfrog] swap must be true or false");
  sptd_market* market = nullptr;
  check(sptd_market_leapfrog(caps.data(), n, swap_rank, swap_text == "true" ? 1 : 0, &market));
  Handle<sptd_market> market_handle(market);

  const std::string rule = "topindex:m=" + std::to_string(m);
  sptd_weights* weights = nullptr;
  check(sptd_weights_from_rule(market, rule.c_str(), &weights));
  Handle<sptd_weights> weights_handle(weights);

  sptd_report* report = nullptr;
  check(sptd_decompose(market, weights, nullptr, &report));
  Handle<sptd_report> report_handle(report);

  sptd_series* rel = nullptr;
  check(sptd_report_path(report, "relative_log_return", &rel));
  Handle<sptd_series> rel_handle(rel);
  sptd_series* structural = nullptr;
  check(sptd_report_path(report, "structural", &structural));
  Handle<sptd_series> structural_handle(structural);

  const double rel_final = series_values(rel).back();
  const double structural_final = series_values(structural).back();
  const double trading_final = rel_final - structural_final;
  std::cout << "relative log-return: " << format_double(rel_final) << "\n"
            << "structural part: " << format_double(structural_final) << "\n"
            << "trading part: " << format_double(trading_final) << "\n";
  if (rel_final != 0.0)
    std::cout << "trading share of the move: "
              << format_double(100.0 * trading_final / rel_final) << "%\n";

  Meta meta = base_meta("leapfrog", config);
  meta.add("rule", rule);
  report_outputs(dir, "leapfrog", report, std::move(meta), settings.format);
  return 0;
}

int dispatch(const std::string& command, const Options& options) {
  const Config config = Config::parse_file(options.config_path);
  if (command == "simulate") return cmd_simulate(config, options);
  if (command == "decompose") return cmd_decompose(config, options);
  if (command == "convergence") return cmd_convergence(config, options);
  if (command == "leapfrog") return cmd_leapfrog(config, options);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"portfolio return decomposition toolkit"};
  app.require_subcommand(1);

  Options options;
  std::string command;
  for (const char* name : {"simulate", "decompose", "convergence", "leapfrog"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", options.config_path, "experiment config file")->required();
    sub->add_option("--out", options.out_dir, "output directory (overrides [run] out)");
    sub->add_option("--seed", options.seed_list,
                    "comma-separated seeds or a..b range (overrides [run] seeds)");
    sub->add_option("--format", options.format, "json, csv or both (overrides [run] format)");
    sub->callback([&command, name] { command = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return dispatch(command, options);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CApiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.status) {
      case SPTD_ERR_NUMERIC:
        return 3;
      case SPTD_ERR_IO:
        return 4;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
}
