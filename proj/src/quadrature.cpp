#include "qmem/quadrature.hpp"

#include "qmem/errors.hpp"

namespace qmem {

UniformGrid::UniformGrid(double start_, double stop_, int intervals_)
    : start(start_), stop(stop_), intervals(intervals_) {
  if (intervals < 1) throw UsageError("grid needs at least one interval");
  if (!(stop > start)) throw UsageError("grid needs stop > start");
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> out(size());
  const double h = step();
  for (int i = 0; i < size(); ++i) out[i] = start + h * i;
  out.back() = stop;
  return out;
}

Eigen::VectorXd UniformGrid::simpson_weights() const { return qmem::simpson_weights(intervals, step()); }

Eigen::VectorXd simpson_weights(int intervals, double h) {
  if (intervals < 1) throw UsageError("simpson_weights: need at least one interval");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(intervals + 1);
  if (intervals == 1) {
    w << h / 2, h / 2;
    return w;
  }
  int simpson_end = intervals;
  if (intervals % 2 == 1) simpson_end = intervals - 3;
  for (int k = 0; k + 2 <= simpson_end; k += 2) {
    w[k] += h / 3;
    w[k + 1] += 4 * h / 3;
    w[k + 2] += h / 3;
  }
  if (simpson_end != intervals) {
    // 3/8 rule on the tail
    const int k = simpson_end;
    w[k] += 3 * h / 8;
    w[k + 1] += 9 * h / 8;
    w[k + 2] += 9 * h / 8;
    w[k + 3] += 3 * h / 8;
  }
  return w;
}

Eigen::VectorXd coarse_simpson_weights(int intervals, double h) {
  if (intervals % 2 != 0 || intervals < 4)
    throw UsageError("coarse_simpson_weights: need an even interval count >= 4");
  const Eigen::VectorXd coarse = simpson_weights(intervals / 2, 2 * h);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(intervals + 1);
  for (int k = 0; k < coarse.size(); ++k) w[2 * k] = coarse[k];
  return w;
}

}  // namespace qmem
