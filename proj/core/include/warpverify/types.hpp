#pragma once

#include <Eigen/Dense>

namespace warpverify {

// Chart coordinates. Full-manifold points are laid out [x-block | y-block | u-block];
// block-local points carry a single block.
using ChartPoint = Eigen::VectorXd;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

}  // namespace warpverify
