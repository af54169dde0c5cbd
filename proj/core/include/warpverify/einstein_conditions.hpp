#pragma once

#include <string>
#include <vector>

#include "warpverify/profile.hpp"
#include "warpverify/types.hpp"
#include "warpverify/warp_spec.hpp"

namespace warpverify {

/// Signed residuals (LHS minus RHS) of a set of named conditions evaluated at
/// one location.
struct ResidualReport {
  std::string title;
  std::vector<std::string> labels;
  std::vector<double> values;
  double max_abs = 0.0;
  double xi1 = 0.0, xi2 = 0.0;  // evaluation location

  void add(std::string label, double value);
  double value_of(const std::string& label) const;  // throws if absent
};

/// Inputs of the warped-product trace identities: dimensions, curvature scale,
/// and the warping-function scalars on the base.
struct TraceParams {
  double lambda = 0.0;
  double mu = 0.0;
  int d = 0;
  int n = 0;
  double R_B = 0.0;
  double f = 0.0;
  double laplacian_f = 0.0;
  double grad_f_sq = 0.0;
};

/// Residuals of the three scalar trace identities tying R_B, Delta f, |grad f|^2
/// to lambda and mu. Labels: base_trace, fiber_trace, grad_identity.
/// The third is the algebraic combination of the first two (eliminating the
/// Laplacian); requires d >= 2.
ResidualReport warped_trace_identity(const TraceParams& tp);

/// Ricci tensor of the conformal block metric eps/phi1^2 at p (full chart
/// point), with partials expanded through alpha1 (phi1_{,x_i} = phi1' alpha_i).
double conformal_ricci_block1(const WarpSpec& spec, int i, int j, const ChartPoint& p);
/// Same for the second block (n2, phi2, eps2).
double conformal_ricci_block2(const WarpSpec& spec, int l, int r, const ChartPoint& p);

/// Hessian of f1 with respect to the conformal block-1 metric.
double conformal_hessian_f1(const WarpSpec& spec, int i, int j, const ChartPoint& p);

/// LHS of the constraint Hess(f2) = 0 on the conformal block-2 metric; zero iff
/// the constraint holds at p.
double hessian_f2_residual(const WarpSpec& spec, int l, int r, const ChartPoint& p);

/// Full (n1+n2+d)^2 Ricci matrix of the warped metric assembled from the
/// closed forms (cross-blocks identically zero). Assumes the f2-Hessian
/// constraint; its residual is checkable via hessian_f2_residual.
Eigen::MatrixXd ricci_closed_form(const WarpSpec& spec, const ChartPoint& p);

/// Residuals of the full Einstein condition system for the conformally flat
/// warped ansatz at p. Labels:
///   x_offdiag(i,j)      off-diagonal x-block conditions, i < j
///   y_offdiag(l,r)      off-diagonal y-block conditions, l < r
///   x_diag(i)           diagonal x-block conditions
///   x_diag_reduced(i)   same with the off-diagonal relation substituted
///   y_diag(l), y_diag_reduced(l)
///   fiber               the fiber-trace condition
ResidualReport einstein_condition_residuals(const WarpSpec& spec, const ChartPoint& p);

enum class ReductionVariant {
  General,  // explicit eps-norm values e1, e2
  Special   // f2 = 1, d = n1, e1 = e2 = -1
};

/// Inputs for the xi-reduced (translation-invariant) condition system.
struct InvariantConditionInputs {
  ReductionVariant variant = ReductionVariant::General;
  int n1 = 0, n2 = 0, d = 0;
  double enorm1 = -1.0, enorm2 = -1.0;  // used by General; Special forces -1
  double lambda = 0.0;
  ProfileJet phi1, f1, phi2, f2;  // jets at (xi1, xi2); Special forces f2 = {1,0,0}
  double xi1 = 0.0, xi2 = 0.0;
};

/// Residuals of the five reduced ODE-level conditions. Labels: x_offdiag,
/// y_offdiag, x_diag, y_diag, fiber. For the Special variant the total warping
/// f1+1 must be positive (DomainError otherwise).
ResidualReport invariant_condition_residuals(const InvariantConditionInputs& in);

/// Convenience overload evaluating the spec's profiles at (xi1, xi2).
ResidualReport invariant_condition_residuals(const WarpSpec& spec, double xi1, double xi2,
                                             ReductionVariant variant);

}  // namespace warpverify
