#include "core/time_grid.hpp"

#include <cmath>
#include <string>

#include "core/errors.hpp"

namespace sptd {

TimeGrid::TimeGrid(std::vector<double> times) {
  if (times.size() < 2)
    throw Error::validation("time grid needs at least 2 points, got " +
                            std::to_string(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]))
      throw Error::validation("time grid point " + std::to_string(k) + " is not finite");
    if (k > 0 && times[k] <= times[k - 1])
      throw Error::validation("time grid must be strictly increasing at index " +
                              std::to_string(k));
  }
  for (std::size_t k = 1; k < times.size(); ++k)
    mesh_ = std::max(mesh_, times[k] - times[k - 1]);
  times_ = std::make_shared<const std::vector<double>>(std::move(times));
}

TimeGrid TimeGrid::uniform(double horizon, int steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error::validation("horizon must be positive and finite");
  if (steps < 1) throw Error::validation("steps must be >= 1");
  std::vector<double> times(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k)
    times[static_cast<std::size_t>(k)] = horizon * static_cast<double>(k) / steps;
  return TimeGrid(std::move(times));
}

bool TimeGrid::same_as(const TimeGrid& other) const {
  if (times_ == other.times_) return true;
  return *times_ == *other.times_;
}

TimeGrid TimeGrid::subsample(std::size_t stride) const {
  if (stride == 0) throw Error::validation("subsample stride must be >= 1");
  if (stride == 1) return *this;
  if (intervals() % stride != 0)
    throw Error::validation("grid with " + std::to_string(intervals()) +
                            " intervals cannot be subsampled with stride " +
                            std::to_string(stride));
  std::vector<double> coarse;
  coarse.reserve(intervals() / stride + 1);
  for (std::size_t k = 0; k < size(); k += stride) coarse.push_back((*times_)[k]);
  return TimeGrid(std::move(coarse));
}

}  // namespace sptd
