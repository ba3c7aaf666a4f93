#include "core/paths.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace sptd {

namespace {

void require_finite(const std::vector<double>& values, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!std::isfinite(values[k]))
      throw Error::validation(std::string(what) + " has non-finite entry at index " +
                              std::to_string(k));
}

}  // namespace

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
  if (!a.same_as(b))
    throw Error::alignment(std::string(where) + ": paths are on different time grids");
}

ScalarPath::ScalarPath(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error::validation("scalar path has " + std::to_string(values_.size()) +
                            " values for " + std::to_string(grid_.size()) + " grid points");
  require_finite(values_, "scalar path");
}

CumulativePath::CumulativePath(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error::validation("cumulative path has " + std::to_string(values_.size()) +
                            " values for " + std::to_string(grid_.size()) + " grid points");
  if (values_.front() != 0.0)
    throw Error::validation("cumulative path must start at 0");
  require_finite(values_, "cumulative path");
}

CumulativePath CumulativePath::from_increments(TimeGrid grid,
                                               const std::vector<double>& increments) {
  if (increments.size() != grid.intervals())
    throw Error::validation("expected " + std::to_string(grid.intervals()) +
                            " increments, got " + std::to_string(increments.size()));
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t k = 0; k < increments.size(); ++k)
    values[k + 1] = values[k] + increments[k];
  return {std::move(grid), std::move(values)};
}

ValuePath::ValuePath(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error::validation("value path has " + std::to_string(values_.size()) +
                            " values for " + std::to_string(grid_.size()) + " grid points");
  if (values_.front() != 1.0)
    throw Error::validation("value path must start at 1");
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!(values_[k] > 0.0) || !std::isfinite(values_[k]))
      throw Error::numeric("value path is not strictly positive at step " + std::to_string(k));
}

RatePath::RatePath(TimeGrid grid, std::vector<double> increments)
    : grid_(std::move(grid)), increments_(std::move(increments)) {
  if (increments_.size() != grid_.intervals())
    throw Error::validation("rate path has " + std::to_string(increments_.size()) +
                            " increments for " + std::to_string(grid_.intervals()) +
                            " grid intervals");
  require_finite(increments_, "rate path");
}

CumulativePath RatePath::cumulative() const {
  return CumulativePath::from_increments(grid_, increments_);
}

}  // namespace sptd
