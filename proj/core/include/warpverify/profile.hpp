#pragma once

#include <functional>
#include <string>
#include <vector>

#include "warpverify/dual2.hpp"
#include "warpverify/types.hpp"

namespace warpverify {

/// Value and first two derivatives of a profile at one xi.
struct ProfileJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Serializable identity of a catalog profile; kind "custom" marks
/// non-serializable lambdas, kind "trajectory" a trajectory-backed interpolant.
struct ProfileDesc {
  std::string kind = "custom";
  std::vector<double> params;
  std::string path;   // trajectory kind only
  std::string field;  // trajectory kind only: "beta" or "gamma_minus_1"
};

/// Smooth scalar profile of the linear invariant xi, carrying analytic first
/// and second derivatives. The derivatives must agree with central differences
/// of the value on the working interval; validate() enforces this.
class ProfileFunction {
 public:
  using Fn = std::function<double(double)>;

  ProfileFunction(Fn eval, Fn d1, Fn d2, ProfileDesc desc = {});

  double operator()(double xi_val) const { return eval_(xi_val); }
  double d1(double xi_val) const { return d1_(xi_val); }
  double d2(double xi_val) const { return d2_(xi_val); }
  ProfileJet jet(double xi_val) const { return {eval_(xi_val), d1_(xi_val), d2_(xi_val)}; }

  /// Forward-AD evaluation via the analytic jet.
  Dual2 operator()(const Dual2& xi_val) const {
    return compose(eval_(xi_val.v), d1_(xi_val.v), d2_(xi_val.v), xi_val);
  }

  /// Checks d1 against central differences of the value and d2 against central
  /// differences of d1 over a sample grid; throws ParameterError on mismatch
  /// beyond `tol` (mixed absolute/relative).
  void validate(const Interval& working, int grid_points = 33, double tol = 1e-6) const;

  const ProfileDesc& desc() const { return desc_; }
  bool serializable() const { return desc_.kind != "custom"; }

 private:
  Fn eval_, d1_, d2_;
  ProfileDesc desc_;
};

// Catalog profiles. These carry a ProfileDesc and round-trip through spec files.
ProfileFunction constant_profile(double c);
ProfileFunction linear_profile(double slope, double intercept);
/// a*xi^2 + b*xi + c
ProfileFunction quadratic_profile(double a, double b, double c);
/// a*exp(b*xi) + c
ProfileFunction exp_profile(double a, double b, double c);

/// C^2 piecewise-quintic interpolant matched to (value, d1, d2) at every knot.
/// Knots must be strictly increasing. Queries outside [front, back] throw
/// DomainError.
ProfileFunction hermite_quintic_profile(std::vector<double> knots,
                                        std::vector<double> values,
                                        std::vector<double> deriv1,
                                        std::vector<double> deriv2,
                                        ProfileDesc desc = {});

/// factor * p, with derivatives scaled consistently (negative-control knob).
ProfileFunction scale_profile(const ProfileFunction& p, double factor);

}  // namespace warpverify
