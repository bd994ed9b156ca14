#pragma once

#include <vector>

#include <Eigen/Core>

namespace qmem {

/// Uniform grid on [start, stop] with `intervals` equal steps (intervals + 1 nodes).
struct UniformGrid {
  double start = 0.0;
  double stop = 1.0;
  int intervals = 2;

  UniformGrid() = default;
  UniformGrid(double start_, double stop_, int intervals_);

  int size() const { return intervals + 1; }
  double length() const { return stop - start; }
  double step() const { return (stop - start) / intervals; }
  double operator[](int i) const { return start + step() * i; }
  std::vector<double> nodes() const;
  Eigen::VectorXd simpson_weights() const;

  bool operator==(const UniformGrid& o) const {
    return start == o.start && stop == o.stop && intervals == o.intervals;
  }
};

/// Composite Simpson weights for `intervals` steps of width h. An odd interval
/// count closes with the 3/8 rule on the last three steps.
Eigen::VectorXd simpson_weights(int intervals, double h);

/// Simpson weights of the grid with every other node dropped, expressed on the
/// fine nodes (zeros at odd indices). Used for Richardson-style doubling checks.
Eigen::VectorXd coarse_simpson_weights(int intervals, double h);

}  // namespace qmem
