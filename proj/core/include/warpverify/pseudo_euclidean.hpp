#pragma once

#include <vector>

#include "warpverify/types.hpp"

namespace warpverify {

/// Diagonal +-1 signature of a pseudo-Euclidean chart.
class Signature {
 public:
  explicit Signature(std::vector<int> eps);

  int dim() const { return static_cast<int>(eps_.size()); }
  int operator[](int i) const { return eps_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return eps_; }

  static Signature euclidean(int n);
  /// (-1, +1, ..., +1)
  static Signature lorentz(int n);

  bool operator==(const Signature&) const = default;

 private:
  std::vector<int> eps_;
};

/// Invariance direction alpha; profiles depend on the chart only through
/// xi = sum_i alpha_i x_i. Must not be identically zero.
class DirectionVector {
 public:
  explicit DirectionVector(std::vector<double> alpha);

  int dim() const { return static_cast<int>(alpha_.size()); }
  double operator[](int i) const { return alpha_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& entries() const { return alpha_; }

  bool operator==(const DirectionVector&) const = default;

 private:
  std::vector<double> alpha_;
};

/// Signature-weighted squared length sum_i eps_i alpha_i^2.
double eps_norm(const DirectionVector& alpha, const Signature& eps);

/// Linear invariant xi = sum_i alpha_i p_i on a block-local point.
double xi(const DirectionVector& alpha, const ChartPoint& block_point);

/// Scale alpha so its eps-norm is exactly -1. Requires eps_norm(alpha) < 0;
/// null or spacelike directions are rejected with NotNormalizableError.
DirectionVector normalize_direction(const DirectionVector& alpha, const Signature& eps);

}  // namespace warpverify
