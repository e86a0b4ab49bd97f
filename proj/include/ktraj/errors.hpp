#pragma once

#include <stdexcept>
#include <string>

namespace ktraj {

// File-format problems: bad magic, truncated payload, dimension mismatch.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string &msg) : std::runtime_error(msg) {}
};

// A trajectory coordinate left the sampled grid. Carries the offending
// shot/sample so callers can point at the exact measurement.
class BoundsError : public std::runtime_error {
public:
  BoundsError(int shot, int sample, int axis, double grid_index, int n)
      : std::runtime_error("coordinate out of grid bounds at shot " +
                           std::to_string(shot) + ", sample " +
                           std::to_string(sample) + ", axis " +
                           std::to_string(axis) + ": grid index " +
                           std::to_string(grid_index) + " not in [0, " +
                           std::to_string(n - 1) + "]"),
        shot(shot), sample(sample), axis(axis), grid_index(grid_index) {}

  int shot;
  int sample;
  int axis;
  double grid_index;
};

// Non-finite values where the pipeline requires finite ones (NaN loss etc).
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace ktraj
