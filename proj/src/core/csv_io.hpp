#pragma once

#include <iosfwd>
#include <string>

#include "core/market.hpp"

namespace sptd {

// Long-format capitalization CSV, UTF-8, header "date,ticker,cap", rows
// "YYYY-MM-DD,<ticker>,<positive decimal>". Every ticker must appear for
// every date. Dates become year fractions from the first date (actual/365.25).
MarketPath ingest_caps_csv(std::istream& in);
MarketPath ingest_caps_csv_string(const std::string& data);
MarketPath ingest_caps_csv_file(const std::string& path);

// Inverse of ingestion. Simulated paths get synthetic dates from a fixed base
// date at round(t * 365.25) days; grids finer than one day cannot be
// represented and are rejected.
void write_caps_csv(const MarketPath& m, std::ostream& out);
std::string caps_csv_string(const MarketPath& m);
void write_caps_csv_file(const MarketPath& m, const std::string& path);

}  // namespace sptd
