#include "core/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "core/errors.hpp"

namespace sptd {

namespace {

constexpr double kDaysPerYear = 365.25;
// Base date for synthesizing dates when exporting simulated paths.
constexpr std::chrono::year_month_day kExportBase{std::chrono::year{2000},
                                                  std::chrono::month{1},
                                                  std::chrono::day{3}};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

Error row_error(std::size_t line, const std::string& what) {
  return Error::ingest("caps csv line " + std::to_string(line) + ": " + what);
}

// Days since the civil epoch for an ISO date; rejects malformed input.
long parse_date_days(const std::string& text, std::size_t line) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw row_error(line, "unparseable date '" + text + "' (expected YYYY-MM-DD)");
  int y = 0, mo = 0, d = 0;
  auto parse_int = [&](std::size_t pos, std::size_t len, int& out) {
    auto res = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return res.ec == std::errc() && res.ptr == text.data() + pos + len;
  };
  if (!parse_int(0, 4, y) || !parse_int(5, 2, mo) || !parse_int(8, 2, d))
    throw row_error(line, "unparseable date '" + text + "' (expected YYYY-MM-DD)");
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw row_error(line, "invalid calendar date '" + text + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(long days_since_epoch) {
  const std::chrono::year_month_day ymd{
      std::chrono::sys_days{std::chrono::days{days_since_epoch}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

std::string format_cap(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

MarketPath ingest_caps_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw Error::ingest("caps csv is empty");
  ++line_no;
  if (trim(line) != "date,ticker,cap")
    throw row_error(line_no, "expected header 'date,ticker,cap', got '" + trim(line) + "'");

  struct Row {
    long days;
    std::size_t ticker;
    double cap;
  };
  std::vector<Row> rows;
  std::vector<std::string> tickers;              // order of first appearance
  std::map<std::string, std::size_t> ticker_ids;
  std::map<long, std::string> date_text;
  std::map<std::pair<long, std::size_t>, std::size_t> seen;  // -> line number

  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : row.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw row_error(line_no, "missing cell (expected date,ticker,cap)");
    const std::string date_str = trim(row.substr(0, c1));
    const std::string ticker = trim(row.substr(c1 + 1, c2 - c1 - 1));
    const std::string cap_str = trim(row.substr(c2 + 1));
    if (ticker.empty()) throw row_error(line_no, "missing ticker");
    if (cap_str.empty()) throw row_error(line_no, "missing cap");

    const long days = parse_date_days(date_str, line_no);
    double cap = 0.0;
    auto res = std::from_chars(cap_str.data(), cap_str.data() + cap_str.size(), cap);
    if (res.ec != std::errc() || res.ptr != cap_str.data() + cap_str.size())
      throw row_error(line_no, "unparseable cap '" + cap_str + "'");
    if (!(cap > 0.0) || !std::isfinite(cap))
      throw row_error(line_no, "cap must be positive, got " + cap_str);

    auto [it, inserted] = ticker_ids.try_emplace(ticker, tickers.size());
    if (inserted) tickers.push_back(ticker);
    const auto key = std::make_pair(days, it->second);
    auto [seen_it, fresh] = seen.try_emplace(key, line_no);
    if (!fresh)
      throw row_error(line_no, "duplicate entry for (" + date_str + ", " + ticker +
                                   "), first seen at line " + std::to_string(seen_it->second));
    date_text.try_emplace(days, date_str);
    rows.push_back({days, it->second, cap});
  }

  if (tickers.size() < 2)
    throw Error::ingest("caps csv must contain at least 2 tickers, got " +
                        std::to_string(tickers.size()));
  if (date_text.size() < 2)
    throw Error::ingest("caps csv must contain at least 2 dates, got " +
                        std::to_string(date_text.size()));

  std::vector<long> days_sorted;
  days_sorted.reserve(date_text.size());
  for (const auto& [days, text] : date_text) days_sorted.push_back(days);

  std::map<long, std::size_t> date_index;
  for (std::size_t k = 0; k < days_sorted.size(); ++k) date_index[days_sorted[k]] = k;

  const Eigen::Index n = static_cast<Eigen::Index>(tickers.size());
  const Eigen::Index nu = static_cast<Eigen::Index>(days_sorted.size());
  Eigen::MatrixXd caps = Eigen::MatrixXd::Constant(n, nu, -1.0);
  for (const Row& r : rows)
    caps(static_cast<Eigen::Index>(r.ticker),
         static_cast<Eigen::Index>(date_index[r.days])) = r.cap;

  for (Eigen::Index k = 0; k < nu; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      if (caps(i, k) < 0.0)
        throw Error::ingest("caps csv: ticker '" + tickers[static_cast<std::size_t>(i)] +
                            "' has no row for date " +
                            date_text[days_sorted[static_cast<std::size_t>(k)]]);

  std::vector<double> times(days_sorted.size());
  std::vector<std::string> dates(days_sorted.size());
  for (std::size_t k = 0; k < days_sorted.size(); ++k) {
    times[k] = static_cast<double>(days_sorted[k] - days_sorted[0]) / kDaysPerYear;
    dates[k] = date_text[days_sorted[k]];
  }

  return {TimeGrid(std::move(times)), std::move(caps), std::move(tickers), std::move(dates)};
}

MarketPath ingest_caps_csv_string(const std::string& data) {
  std::istringstream in(data);
  return ingest_caps_csv(in);
}

MarketPath ingest_caps_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open caps csv '" + path + "'");
  return ingest_caps_csv(in);
}

void write_caps_csv(const MarketPath& m, std::ostream& out) {
  std::vector<std::string> dates = m.dates();
  if (dates.empty()) {
    const long base = std::chrono::sys_days{kExportBase}.time_since_epoch().count();
    dates.resize(m.num_times());
    long prev = base - 1;
    for (std::size_t k = 0; k < m.num_times(); ++k) {
      const long days =
          base + static_cast<long>(std::llround((m.grid()[k] - m.grid()[0]) * kDaysPerYear));
      if (days <= prev)
        throw Error::validation(
            "grid spacing is finer than one day and cannot be written as dated csv");
      dates[k] = format_date(days);
      prev = days;
    }
  }
  out << "date,ticker,cap\n";
  for (std::size_t k = 0; k < m.num_times(); ++k)
    for (int i = 0; i < m.num_stocks(); ++i)
      out << dates[k] << ',' << m.tickers()[static_cast<std::size_t>(i)] << ','
          << format_cap(m.cap(i, k)) << '\n';
}

std::string caps_csv_string(const MarketPath& m) {
  std::ostringstream out;
  write_caps_csv(m, out);
  return out.str();
}

void write_caps_csv_file(const MarketPath& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error::io("cannot open '" + path + "' for writing");
  write_caps_csv(m, out);
  if (!out) throw Error::io("failed writing '" + path + "'");
}

}  // namespace sptd
