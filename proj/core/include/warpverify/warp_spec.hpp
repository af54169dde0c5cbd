#pragma once

#include <random>
#include <vector>

#include "warpverify/metric_field.hpp"
#include "warpverify/profile.hpp"
#include "warpverify/pseudo_euclidean.hpp"
#include "warpverify/types.hpp"

namespace warpverify {

/// Closed coordinate box on which a spec is verified. Construction of a
/// WarpSpec checks (by dense sampling) that the conformal factors do not
/// vanish and the warping function stays positive throughout.
class DomainBox {
 public:
  explicit DomainBox(std::vector<Interval> intervals);

  int dim() const { return static_cast<int>(intervals_.size()); }
  const Interval& operator[](int i) const { return intervals_[static_cast<std::size_t>(i)]; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  ChartPoint center() const;
  ChartPoint sample(std::mt19937_64& rng) const;
  bool contains(const ChartPoint& p) const;

 private:
  std::vector<Interval> intervals_;
};

/// Full description of the metric
///   g = eps1/phi1(xi1)^2 dx^2 + eps2/phi2(xi2)^2 dy^2 - (f1(xi1)+f2(xi2))^2 du^2
/// on the (n1+n2+d)-dimensional chart [x | y | u], with the fiber metric fixed
/// to -delta. Profiles depend on the chart through xi1 = alpha1.x, xi2 = alpha2.y.
class WarpSpec {
 public:
  struct Config {
    int n1 = 0, n2 = 0, d = 0;
    Signature eps1, eps2;
    DirectionVector alpha1, alpha2;
    ProfileFunction phi1, f1, phi2, f2;
    double lambda = 0.0;
    DomainBox domain;
  };

  explicit WarpSpec(Config cfg);

  int n1() const { return cfg_.n1; }
  int n2() const { return cfg_.n2; }
  int d() const { return cfg_.d; }
  int dim() const { return cfg_.n1 + cfg_.n2 + cfg_.d; }
  double lambda() const { return cfg_.lambda; }
  const Signature& eps1() const { return cfg_.eps1; }
  const Signature& eps2() const { return cfg_.eps2; }
  const DirectionVector& alpha1() const { return cfg_.alpha1; }
  const DirectionVector& alpha2() const { return cfg_.alpha2; }
  const ProfileFunction& phi1() const { return cfg_.phi1; }
  const ProfileFunction& f1() const { return cfg_.f1; }
  const ProfileFunction& phi2() const { return cfg_.phi2; }
  const ProfileFunction& f2() const { return cfg_.f2; }
  const DomainBox& domain() const { return cfg_.domain; }

  double enorm1() const { return enorm1_; }
  double enorm2() const { return enorm2_; }

  double xi1(const ChartPoint& full_point) const;
  double xi2(const ChartPoint& full_point) const;
  Interval xi1_range() const { return xi1_range_; }
  Interval xi2_range() const { return xi2_range_; }

  /// True when both alpha directions have eps-norm -1 (within tol) -- the
  /// normalization the lambda>0 solution family requires.
  bool family_normalized(double tol = 1e-9) const;
  /// Throws ParameterError unless family_normalized() and d == n1.
  void require_family_form() const;

 private:
  Config cfg_;
  double enorm1_ = 0.0, enorm2_ = 0.0;
  Interval xi1_range_, xi2_range_;
};

/// f = f1(xi1) + f2(xi2); throws DomainError if the value is not positive.
double warping_function(const WarpSpec& spec, const ChartPoint& p);

/// The full diagonal metric as a MetricField (with AD jets).
MetricField build_metric(const WarpSpec& spec);

struct BlockViews {
  MetricField block1;  // dim n1: eps_i / phi1^2
  MetricField block2;  // dim n2: eps_l / phi2^2
  MetricField fiber;   // dim d: constant -delta (the f^2 factor is applied on reassembly)
};
BlockViews block_views(const WarpSpec& spec);

/// Interval image of xi = alpha . p over a box slice; used for profile
/// validation and domain checks.
Interval xi_range_over(const DirectionVector& alpha, const std::vector<Interval>& block);

}  // namespace warpverify
