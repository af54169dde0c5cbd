#include "warpverify/einstein_conditions.hpp"

#include <cmath>
#include <sstream>

#include "warpverify/errors.hpp"

namespace warpverify {

void ResidualReport::add(std::string label, double value) {
  labels.push_back(std::move(label));
  values.push_back(value);
  max_abs = std::max(max_abs, std::abs(value));
}

double ResidualReport::value_of(const std::string& label) const {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == label) return values[k];
  throw ParameterError("ResidualReport: no label '" + label + "'");
}

ResidualReport warped_trace_identity(const TraceParams& tp) {
  if (tp.d < 2) throw ParameterError("warped_trace_identity: d must be >= 2");
  if (!(tp.f > 0.0)) throw ParameterError("warped_trace_identity: f must be positive");
  const double d = tp.d, n = tp.n;
  ResidualReport rep;
  rep.title = "trace-identities";
  // base trace: R_B f^2 - f Delta(f) d = n f^2 lambda
  rep.add("base_trace", tp.R_B * tp.f * tp.f - tp.f * tp.laplacian_f * d - n * tp.f * tp.f * tp.lambda);
  // fiber trace scaled by d: f Delta(f) d + d(d-1)|grad f|^2 + lambda f^2 d = mu d
  rep.add("fiber_trace", tp.f * tp.laplacian_f * d + d * (d - 1.0) * tp.grad_f_sq +
                             tp.lambda * tp.f * tp.f * d - tp.mu * d);
  // Laplacian eliminated: |grad f|^2 + [(lambda (d-n) + R_B) / (d(d-1))] f^2 = mu/(d-1)
  rep.add("grad_identity", tp.grad_f_sq +
                               (tp.lambda * (d - n) + tp.R_B) / (d * (d - 1.0)) * tp.f * tp.f -
                               tp.mu / (d - 1.0));
  return rep;
}

namespace {

struct LocalJets {
  double xi1 = 0.0, xi2 = 0.0;
  ProfileJet phi1, f1, phi2, f2;
  double f = 0.0;  // f1 + f2
};

LocalJets jets_at(const WarpSpec& spec, const ChartPoint& p) {
  LocalJets j;
  j.xi1 = spec.xi1(p);
  j.xi2 = spec.xi2(p);
  j.phi1 = spec.phi1().jet(j.xi1);
  j.f1 = spec.f1().jet(j.xi1);
  j.phi2 = spec.phi2().jet(j.xi2);
  j.f2 = spec.f2().jet(j.xi2);
  j.f = j.f1.value + j.f2.value;
  return j;
}

void require_nonzero(double phi, const char* name, double xi_val) {
  if (phi == 0.0 || !std::isfinite(phi)) {
    std::ostringstream os;
    os << name << " vanishes at xi=" << xi_val;
    throw SingularityError(os.str(), phi);
  }
}

}  // namespace

double conformal_ricci_block1(const WarpSpec& spec, int i, int j, const ChartPoint& p) {
  if (i < 0 || i >= spec.n1() || j < 0 || j >= spec.n1())
    throw DimensionError("conformal_ricci_block1: index out of range");
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi1.value, "phi1", lj.xi1);
  const auto& a = spec.alpha1();
  const double phi = lj.phi1.value, dphi = lj.phi1.d1, ddphi = lj.phi1.d2;
  const double e1 = spec.enorm1();
  const int n1 = spec.n1();
  if (i != j) return (n1 - 2) * ddphi * a[i] * a[j] / phi;
  const double eps_i = spec.eps1()[i];
  return ((n1 - 2) * a[i] * a[i] + eps_i * e1) * ddphi / phi -
         (n1 - 1) * eps_i * e1 * dphi * dphi / (phi * phi);
}

double conformal_ricci_block2(const WarpSpec& spec, int l, int r, const ChartPoint& p) {
  if (l < 0 || l >= spec.n2() || r < 0 || r >= spec.n2())
    throw DimensionError("conformal_ricci_block2: index out of range");
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi2.value, "phi2", lj.xi2);
  const auto& a = spec.alpha2();
  const double phi = lj.phi2.value, dphi = lj.phi2.d1, ddphi = lj.phi2.d2;
  const double e2 = spec.enorm2();
  const int n2 = spec.n2();
  if (l != r) return (n2 - 2) * ddphi * a[l] * a[r] / phi;
  const double eps_l = spec.eps2()[l];
  return ((n2 - 2) * a[l] * a[l] + eps_l * e2) * ddphi / phi -
         (n2 - 1) * eps_l * e2 * dphi * dphi / (phi * phi);
}

double conformal_hessian_f1(const WarpSpec& spec, int i, int j, const ChartPoint& p) {
  if (i < 0 || i >= spec.n1() || j < 0 || j >= spec.n1())
    throw DimensionError("conformal_hessian_f1: index out of range");
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi1.value, "phi1", lj.xi1);
  const auto& a = spec.alpha1();
  const double phi = lj.phi1.value, dphi = lj.phi1.d1;
  const double df = lj.f1.d1, ddf = lj.f1.d2;
  if (i != j) return a[i] * a[j] * (ddf + 2.0 * dphi * df / phi);
  const double eps_i = spec.eps1()[i];
  return a[i] * a[i] * (ddf + 2.0 * dphi * df / phi) - eps_i * spec.enorm1() * dphi * df / phi;
}

double hessian_f2_residual(const WarpSpec& spec, int l, int r, const ChartPoint& p) {
  if (l < 0 || l >= spec.n2() || r < 0 || r >= spec.n2())
    throw DimensionError("hessian_f2_residual: index out of range");
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi2.value, "phi2", lj.xi2);
  const auto& a = spec.alpha2();
  const double phi = lj.phi2.value, dphi = lj.phi2.d1;
  const double df = lj.f2.d1, ddf = lj.f2.d2;
  if (l != r) return a[l] * a[r] * (ddf + 2.0 * dphi * df / phi);
  const double eps_l = spec.eps2()[l];
  return a[l] * a[l] * (ddf + 2.0 * dphi * df / phi) - eps_l * spec.enorm2() * dphi * df / phi;
}

Eigen::MatrixXd ricci_closed_form(const WarpSpec& spec, const ChartPoint& p) {
  const int n1 = spec.n1(), n2 = spec.n2(), d = spec.d();
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi1.value, "phi1", lj.xi1);
  require_nonzero(lj.phi2.value, "phi2", lj.xi2);
  if (!(lj.f > 0.0)) {
    std::ostringstream os;
    os << "warping function is not positive (f=" << lj.f << ") at xi1=" << lj.xi1
       << ", xi2=" << lj.xi2;
    throw DomainError(os.str());
  }

  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(spec.dim(), spec.dim());
  const double dd = d;

  for (int i = 0; i < n1; ++i)
    for (int j = i; j < n1; ++j) {
      const double v = conformal_ricci_block1(spec, i, j, p) -
                       (dd / lj.f) * conformal_hessian_f1(spec, i, j, p);
      ric(i, j) = v;
      ric(j, i) = v;
    }

  for (int l = 0; l < n2; ++l)
    for (int r = l; r < n2; ++r) {
      const double v = conformal_ricci_block2(spec, l, r, p);
      ric(n1 + l, n1 + r) = v;
      ric(n1 + r, n1 + l) = v;
    }

  // Fiber block: Ric(U_a, U_b) = B * gF_ab with gF = -delta, where B collects
  // the f1-Laplacian and gradient terms of the conformal base.
  const double e1 = spec.enorm1(), e2 = spec.enorm2();
  const double phi1 = lj.phi1.value, dphi1 = lj.phi1.d1;
  const double df1 = lj.f1.d1, ddf1 = lj.f1.d2;
  const double phi2 = lj.phi2.value, df2 = lj.f2.d1;
  const double B = -lj.f * phi1 * phi1 * ddf1 * e1 + (n1 - 2) * lj.f * phi1 * dphi1 * df1 * e1 -
                   (dd - 1.0) * (phi1 * phi1 * df1 * df1 * e1 + phi2 * phi2 * df2 * df2 * e2);
  for (int a = 0; a < d; ++a) ric(n1 + n2 + a, n1 + n2 + a) = -B;

  return ric;
}

ResidualReport einstein_condition_residuals(const WarpSpec& spec, const ChartPoint& p) {
  const int n1 = spec.n1(), n2 = spec.n2();
  const double dd = spec.d();
  const double lambda = spec.lambda();
  const LocalJets lj = jets_at(spec, p);
  require_nonzero(lj.phi1.value, "phi1", lj.xi1);
  require_nonzero(lj.phi2.value, "phi2", lj.xi2);

  const auto& a1 = spec.alpha1();
  const auto& a2 = spec.alpha2();
  const double e1 = spec.enorm1(), e2 = spec.enorm2();
  const double f = lj.f;
  const double phi1 = lj.phi1.value, dphi1 = lj.phi1.d1, ddphi1 = lj.phi1.d2;
  const double df1 = lj.f1.d1, ddf1 = lj.f1.d2;
  const double phi2 = lj.phi2.value, dphi2 = lj.phi2.d1, ddphi2 = lj.phi2.d2;
  const double df2 = lj.f2.d1;

  ResidualReport rep;
  rep.title = "einstein-conditions";
  rep.xi1 = lj.xi1;
  rep.xi2 = lj.xi2;

  // x-block off-diagonal: (n1-2) f phi1,ij - d phi1 f1,ij - d phi1,i f1,j - d phi1,j f1,i = 0
  for (int i = 0; i < n1; ++i)
    for (int j = i + 1; j < n1; ++j) {
      const double aa = a1[i] * a1[j];
      std::ostringstream lab;
      lab << "x_offdiag(" << i + 1 << "," << j + 1 << ")";
      rep.add(lab.str(), aa * ((n1 - 2) * f * ddphi1 - dd * phi1 * ddf1 - 2.0 * dd * dphi1 * df1));
    }

  // y-block off-diagonal: (n2-2) phi2,lr = 0
  for (int l = 0; l < n2; ++l)
    for (int r = l + 1; r < n2; ++r) {
      std::ostringstream lab;
      lab << "y_offdiag(" << l + 1 << "," << r + 1 << ")";
      rep.add(lab.str(), (n2 - 2) * ddphi2 * a2[l] * a2[r]);
    }

  // x-block diagonal, literal and with the off-diagonal relation substituted.
  const double x_reduced =
      e1 * (f * phi1 * ddphi1 - (n1 - 1) * f * dphi1 * dphi1 + dd * phi1 * dphi1 * df1) -
      lambda * f;
  for (int i = 0; i < n1; ++i) {
    const double eps_i = spec.eps1()[i];
    const double aa = a1[i] * a1[i];
    const double literal =
        phi1 * aa * ((n1 - 2) * f * ddphi1 - dd * phi1 * ddf1 - 2.0 * dd * dphi1 * df1) +
        eps_i * e1 *
            (f * phi1 * ddphi1 - (n1 - 1) * f * dphi1 * dphi1 + dd * phi1 * dphi1 * df1) -
        eps_i * lambda * f;
    std::ostringstream lab1, lab2;
    lab1 << "x_diag(" << i + 1 << ")";
    lab2 << "x_diag_reduced(" << i + 1 << ")";
    rep.add(lab1.str(), literal);
    rep.add(lab2.str(), eps_i * x_reduced);
  }

  // y-block diagonal.
  const double y_reduced = -e2 * (n2 - 1) * dphi2 * dphi2 - lambda;
  for (int l = 0; l < n2; ++l) {
    const double eps_l = spec.eps2()[l];
    const double aa = a2[l] * a2[l];
    const double literal = phi2 * (n2 - 2) * ddphi2 * aa + eps_l * phi2 * ddphi2 * e2 -
                           (n2 - 1) * eps_l * dphi2 * dphi2 * e2 - lambda * eps_l;
    std::ostringstream lab1, lab2;
    lab1 << "y_diag(" << l + 1 << ")";
    lab2 << "y_diag_reduced(" << l + 1 << ")";
    rep.add(lab1.str(), literal);
    rep.add(lab2.str(), eps_l * y_reduced);
  }

  // fiber condition.
  rep.add("fiber", -f * phi1 * phi1 * ddf1 * e1 + (n1 - 2) * f * phi1 * dphi1 * df1 * e1 -
                       (dd - 1.0) * (phi1 * phi1 * df1 * df1 * e1 + phi2 * phi2 * df2 * df2 * e2) -
                       lambda * f * f);
  return rep;
}

ResidualReport invariant_condition_residuals(const InvariantConditionInputs& in) {
  const int n1 = in.n1, n2 = in.n2;
  const bool special = in.variant == ReductionVariant::Special;
  const int d = special ? n1 : in.d;
  if (n1 < 3 || n2 < 3) throw ParameterError("invariant conditions: n1, n2 must be >= 3");
  if (d < 2) throw ParameterError("invariant conditions: d must be >= 2");
  const double e1 = special ? -1.0 : in.enorm1;
  const double e2 = special ? -1.0 : in.enorm2;
  const ProfileJet f2 = special ? ProfileJet{1.0, 0.0, 0.0} : in.f2;

  const double phi1 = in.phi1.value, dphi1 = in.phi1.d1, ddphi1 = in.phi1.d2;
  const double fv1 = in.f1.value, df1 = in.f1.d1, ddf1 = in.f1.d2;
  const double phi2 = in.phi2.value, dphi2 = in.phi2.d1, ddphi2 = in.phi2.d2;
  const double f = fv1 + f2.value;
  if (special && !(f > 0.0)) {
    std::ostringstream os;
    os << "invariant conditions: total warping f1+1 = " << f << " must be positive";
    throw DomainError(os.str());
  }

  ResidualReport rep;
  rep.title = special ? "invariant-conditions-special" : "invariant-conditions-general";
  rep.xi1 = in.xi1;
  rep.xi2 = in.xi2;

  rep.add("x_offdiag", (n1 - 2) * f * ddphi1 - d * phi1 * ddf1 - 2.0 * d * dphi1 * df1);
  rep.add("y_offdiag", ddphi2);
  rep.add("x_diag",
          e1 * (f * phi1 * ddphi1 - (n1 - 1) * f * dphi1 * dphi1 + d * phi1 * dphi1 * df1) -
              in.lambda * f);
  rep.add("y_diag", -e2 * (n2 - 1) * dphi2 * dphi2 - in.lambda);
  rep.add("fiber",
          e1 * (-f * phi1 * phi1 * ddf1 + (n1 - 2) * f * phi1 * dphi1 * df1 -
                (d - 1.0) * phi1 * phi1 * df1 * df1) -
              e2 * (d - 1.0) * phi2 * phi2 * f2.d1 * f2.d1 - in.lambda * f * f);
  return rep;
}

ResidualReport invariant_condition_residuals(const WarpSpec& spec, double xi1_val, double xi2_val,
                                             ReductionVariant variant) {
  InvariantConditionInputs in;
  in.variant = variant;
  in.n1 = spec.n1();
  in.n2 = spec.n2();
  in.d = spec.d();
  in.enorm1 = spec.enorm1();
  in.enorm2 = spec.enorm2();
  in.lambda = spec.lambda();
  in.phi1 = spec.phi1().jet(xi1_val);
  in.f1 = spec.f1().jet(xi1_val);
  in.phi2 = spec.phi2().jet(xi2_val);
  in.f2 = spec.f2().jet(xi2_val);
  in.xi1 = xi1_val;
  in.xi2 = xi2_val;
  return invariant_condition_residuals(in);
}

}  // namespace warpverify
