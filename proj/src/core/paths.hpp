#pragma once

#include <cstddef>
#include <vector>

#include "core/time_grid.hpp"

namespace sptd {

// One finite real value per grid point.
class ScalarPath {
 public:
  ScalarPath(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

// Scalar process started at zero: integrals, log-returns, drift processes.
class CumulativePath {
 public:
  CumulativePath(TimeGrid grid, std::vector<double> values);

  // Prefix sums of per-interval increments (one fewer than grid points).
  static CumulativePath from_increments(TimeGrid grid, const std::vector<double>& increments);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }
  double final() const { return values_.back(); }

  ScalarPath as_scalar() const { return {grid_, values_}; }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

// Strictly positive portfolio value, normalized to 1 at the start.
class ValuePath {
 public:
  ValuePath(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

// One increment per grid interval, in log-return units.
class RatePath {
 public:
  RatePath(TimeGrid grid, std::vector<double> increments);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& increments() const { return increments_; }

  CumulativePath cumulative() const;

 private:
  TimeGrid grid_;
  std::vector<double> increments_;
};

// Throws an alignment error unless both grids coincide.
void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where);

}  // namespace sptd
