#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace sptd {

// Strictly increasing partition of a time interval, in years.
// Immutable; copies share storage, so grid-equality checks are cheap for
// paths built from the same object.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> times);

  // steps+1 equally spaced points on [0, horizon].
  static TimeGrid uniform(double horizon, int steps);

  std::size_t size() const { return times_->size(); }
  std::size_t intervals() const { return times_->size() - 1; }
  double operator[](std::size_t k) const { return (*times_)[k]; }
  double front() const { return times_->front(); }
  double back() const { return times_->back(); }
  const std::vector<double>& times() const { return *times_; }

  // Maximum spacing of the partition; the refinement parameter.
  double mesh() const { return mesh_; }

  bool same_as(const TimeGrid& other) const;

  // Keeps every stride-th point, endpoints included.
  // Requires intervals() divisible by stride.
  TimeGrid subsample(std::size_t stride) const;

 private:
  std::shared_ptr<const std::vector<double>> times_;
  double mesh_ = 0.0;
};

}  // namespace sptd
