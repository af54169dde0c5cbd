#pragma once

#include <vector>

#include "warpverify/metric_field.hpp"
#include "warpverify/types.hpp"

namespace warpverify {

/// Connection coefficients Gamma^k_ij at one point, symmetric in (i, j).
class ChristoffelSymbols {
 public:
  explicit ChristoffelSymbols(int dim)
      : dim_(dim), coeff_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  int dim() const { return dim_; }
  double operator()(int k, int i, int j) const {
    return coeff_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)];
  }
  double& at(int k, int i, int j) {
    return coeff_[static_cast<std::size_t>((k * dim_ + i) * dim_ + j)];
  }

 private:
  int dim_;
  std::vector<double> coeff_;
};

/// Ricci tensor, scalar curvature, and the Einstein residual Ric - lambda*g at
/// one point.
struct CurvatureReport {
  ChartPoint point;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  Eigen::MatrixXd einstein_residual;
  double max_abs_residual = 0.0;
};

/// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij), with the metric
/// derivatives taken by the field's differentiation scheme. Throws
/// SingularityError if |det g| < 1e-12 anywhere on the stencil.
ChristoffelSymbols christoffel(const MetricField& g, const ChartPoint& p);

/// Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kl Gamma^l_ij
///        - Gamma^k_il Gamma^l_kj. Under the finite-difference scheme the
/// Gamma derivatives are nested central differences of christoffel(); under
/// the AD scheme the assembly uses exact metric jets. Output is symmetrized.
Eigen::MatrixXd ricci(const MetricField& g, const ChartPoint& p);

/// R = g^{ij} Ric_ij.
double scalar_curvature(const MetricField& g, const ChartPoint& p);

CurvatureReport einstein_residual(const MetricField& g, double lambda, const ChartPoint& p);

}  // namespace warpverify
