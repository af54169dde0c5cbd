#include "warpverify/ode_family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "warpverify/errors.hpp"

namespace warpverify {

FamilyParams::FamilyParams(int q_, double m_, int n2_) : q(q_), m(m_), n2(n2_) {
  if (q < 3) throw ParameterError("FamilyParams: q must be >= 3");
  if (!(m > 0.0) || !std::isfinite(m)) throw ParameterError("FamilyParams: m must be positive");
  if (n2 < 3) throw ParameterError("FamilyParams: n2 must be >= 3");
  lambda = q * m * m / 2.0;
}

FamilyState::FamilyState(double t_, double beta_, double gamma_, double omega_)
    : t(t_), beta(beta_), gamma(gamma_), omega(omega_) {
  if (!std::isfinite(t) || !std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(omega))
    throw ParameterError("FamilyState: entries must be finite");
  if (beta == 0.0) throw ParameterError("FamilyState: beta must be nonzero");
  if (!(gamma > 1.0)) throw ParameterError("FamilyState: gamma must be > 1");
}

double poly_D(double omega, int q) { return (q - 2) * omega * omega - 2.0 * q * omega + q; }
double poly_A(double omega, int q) { return (q - 2) * omega * omega - q; }
double poly_P(double omega, int q) {
  return q + 2.0 * q * omega - (3.0 * q - 2.0) * omega * omega;
}

std::pair<double, double> roots_D(int q) {
  const double s = std::sqrt(2.0 * q);
  return {(q - s) / (q - 2), (q + s) / (q - 2)};
}

std::pair<double, double> roots_P(int q) {
  const double s = std::sqrt(4.0 * q * q - 2.0 * q);
  const double lo = (q - s) / (3.0 * q - 2.0);
  const double hi = (q + s) / (3.0 * q - 2.0);
  return {lo, hi};
}

Accelerations family_accelerations(double beta, double gamma, double beta_dot, double gamma_dot,
                                   const FamilyParams& fp, Eq2Form form) {
  if (beta == 0.0 || gamma == 0.0)
    throw SingularityError("family_accelerations: beta and gamma must be nonzero", 0.0);
  const double q = fp.q;
  const double half_qm2 = 0.5 * q * fp.m * fp.m;
  Accelerations out;
  if (form == Eq2Form::Standard) {
    out.beta_dd = ((q - 1.0) * gamma * beta_dot * beta_dot - q * beta * beta_dot * gamma_dot -
                   half_qm2 * gamma) /
                  (gamma * beta);
  } else {
    out.beta_dd = (-(q - 1.0) * gamma * beta_dot * beta_dot - q * beta_dot * gamma_dot -
                   half_qm2 * gamma) /
                  (beta * gamma);
  }
  out.gamma_dd = (half_qm2 * gamma * gamma + (q - 2.0) * beta * gamma * beta_dot * gamma_dot -
                  (q - 1.0) * beta * beta * gamma_dot * gamma_dot) /
                 (gamma * beta * beta);
  return out;
}

EquationResiduals family_equation_residuals(double beta, double gamma, double beta_dot,
                                            double gamma_dot, double beta_dd, double gamma_dd,
                                            const FamilyParams& fp) {
  const double q = fp.q;
  const double half_qm2 = 0.5 * q * fp.m * fp.m;
  EquationResiduals r;
  {
    const double t1 = (q - 2.0) * gamma * beta_dd;
    const double t2 = -q * beta * gamma_dd;
    const double t3 = -2.0 * q * beta_dot * gamma_dot;
    r.eq1 = t1 + t2 + t3;
    r.scale1 = std::abs(t1) + std::abs(t2) + std::abs(t3) + half_qm2 * std::abs(gamma);
  }
  {
    const double t1 = -gamma * beta * beta_dd;
    const double t2 = (q - 1.0) * gamma * beta_dot * beta_dot;
    const double t3 = -q * beta * beta_dot * gamma_dot;
    const double t4 = -half_qm2 * gamma;
    r.eq2 = t1 + t2 + t3 + t4;
    r.scale2 = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  }
  {
    const double t1 = gamma * beta * beta * gamma_dd;
    const double t2 = -(q - 2.0) * beta * gamma * beta_dot * gamma_dot;
    const double t3 = (q - 1.0) * beta * beta * gamma_dot * gamma_dot;
    const double t4 = -half_qm2 * gamma * gamma;
    r.eq3 = t1 + t2 + t3 + t4;
    r.scale3 = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  }
  r.scale1 = std::max(r.scale1, 1e-300);
  r.scale2 = std::max(r.scale2, 1e-300);
  r.scale3 = std::max(r.scale3, 1e-300);
  return r;
}

double first_integral_Z(double beta, double gamma, double beta_dot, double gamma_dot,
                        const FamilyParams& fp) {
  const double q = fp.q;
  return (q - 2.0) * gamma * gamma * beta_dot * beta_dot -
         2.0 * q * beta * gamma * beta_dot * gamma_dot + q * beta * beta * gamma_dot * gamma_dot -
         q * fp.m * fp.m * gamma * gamma;
}

double first_integral_scale(double beta, double gamma, double beta_dot, double gamma_dot,
                            const FamilyParams& fp) {
  const double q = fp.q;
  return std::abs((q - 2.0) * gamma * gamma * beta_dot * beta_dot) +
         std::abs(2.0 * q * beta * gamma * beta_dot * gamma_dot) +
         std::abs(q * beta * beta * gamma_dot * gamma_dot) +
         std::abs(q * fp.m * fp.m * gamma * gamma);
}

namespace {

void check_D(double omega, int q, double D) {
  const double scale = std::abs(q - 2) * omega * omega + 2.0 * std::abs(q * omega) + q;
  if (std::abs(D) < 1e-14 * std::max(1.0, scale)) {
    const auto [r1, r2] = roots_D(q);
    const double root = std::abs(omega - r1) < std::abs(omega - r2) ? r1 : r2;
    std::ostringstream os;
    os << "velocity parametrization singular: omega=" << omega
       << " is at a root of D (nearest root " << root << ")";
    throw SingularityError(os.str(), D);
  }
}

}  // namespace

Velocities omega_velocities(double omega, double beta, double gamma, const FamilyParams& fp) {
  if (beta == 0.0) throw SingularityError("omega_velocities: beta must be nonzero", 0.0);
  const double D = poly_D(omega, fp.q);
  check_D(omega, fp.q, D);
  Velocities v;
  v.beta_dot = 2.0 * fp.m * fp.q * omega * (omega - 1.0) / D;
  v.gamma_dot = fp.m * gamma * poly_A(omega, fp.q) / (beta * D);
  return v;
}

double omega_rate(double omega, double beta, const FamilyParams& fp) {
  if (beta == 0.0) throw SingularityError("omega_rate: beta must be nonzero", 0.0);
  return fp.m * poly_P(omega, fp.q) / (4.0 * beta);
}

Accelerations flow_accelerations(double omega, double beta, double gamma, const FamilyParams& fp) {
  const double q = fp.q, m = fp.m;
  const double D = poly_D(omega, q);
  check_D(omega, q, D);
  if (beta == 0.0) throw SingularityError("flow_accelerations: beta must be nonzero", 0.0);
  const double A = poly_A(omega, q);
  const double u = omega * (omega - 1.0);
  const double du = 2.0 * omega - 1.0;
  const double dD = 2.0 * (q - 2.0) * omega - 2.0 * q;
  const double dA = 2.0 * (q - 2.0) * omega;

  const Velocities v = omega_velocities(omega, beta, gamma, fp);
  const double wdot = omega_rate(omega, beta, fp);

  Accelerations acc;
  acc.beta_dd = 2.0 * m * q * (du * D - u * dD) / (D * D) * wdot;
  const double num = gamma * A;            // gamma' = m * num / den
  const double den = beta * D;
  const double dnum = v.gamma_dot * A + gamma * dA * wdot;
  const double dden = v.beta_dot * D + beta * dD * wdot;
  acc.gamma_dd = m * (dnum * den - num * dden) / (den * den);
  return acc;
}

double solve_omega(double beta_dot, double gamma_dot, double beta, double gamma,
                   const FamilyParams& fp, double tol) {
  if (beta == 0.0) throw ParameterError("solve_omega: beta must be nonzero");
  const double q = fp.q, m = fp.m, v = beta_dot;
  // v * D(omega) = 2 m q omega (omega - 1), a quadratic in omega.
  const double a2 = (q - 2.0) * v - 2.0 * m * q;
  const double a1 = 2.0 * q * (m - v);
  const double a0 = q * v;
  std::vector<double> candidates;
  const double coeff_scale = std::max({std::abs(a2), std::abs(a1), std::abs(a0), 1e-300});
  if (std::abs(a2) < 1e-14 * coeff_scale) {
    if (std::abs(a1) < 1e-14 * coeff_scale)
      throw ParameterError("solve_omega: degenerate velocity equation");
    candidates.push_back(-a0 / a1);
  } else {
    double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0 && disc > -1e-12 * std::max(a1 * a1, std::abs(4.0 * a2 * a0))) disc = 0.0;
    if (disc < 0.0)
      throw ParameterError("solve_omega: no real omega reproduces the beta velocity");
    const double sq = std::sqrt(disc);
    if (a1 == 0.0) {
      candidates.push_back(sq / (2.0 * a2));
      candidates.push_back(-sq / (2.0 * a2));
    } else {
      const double qq = -0.5 * (a1 + (a1 > 0.0 ? sq : -sq));
      candidates.push_back(qq / a2);
      if (qq != 0.0) candidates.push_back(a0 / qq);
    }
  }

  double best = 0.0, best_err = std::numeric_limits<double>::infinity();
  for (double w : candidates) {
    if (!std::isfinite(w)) continue;
    const double D = poly_D(w, q);
    if (std::abs(D) < 1e-12 * std::max(1.0, std::abs(q - 2) * w * w + 2 * q * std::abs(w) + q))
      continue;
    Velocities pred = omega_velocities(w, beta, gamma, fp);
    const double e = std::max(std::abs(pred.beta_dot - beta_dot) / std::max(1.0, std::abs(beta_dot)),
                              std::abs(pred.gamma_dot - gamma_dot) / std::max(1.0, std::abs(gamma_dot)));
    if (e < best_err) {
      best_err = e;
      best = w;
    }
  }
  if (!(best_err <= tol)) {
    std::ostringstream os;
    os << "solve_omega: velocities (beta'=" << beta_dot << ", gamma'=" << gamma_dot
       << ") are inconsistent with the parametrization (best deviation " << best_err << ")";
    throw ParameterError(os.str());
  }
  return best;
}

QuadratureRates quadrature_rates(double omega, const FamilyParams& fp) {
  const double q = fp.q;
  const double D = poly_D(omega, fp.q);
  check_D(omega, fp.q, D);
  const double P = poly_P(omega, fp.q);
  const double pscale = q + 2.0 * q * std::abs(omega) + (3.0 * q - 2.0) * omega * omega;
  if (std::abs(P) < 1e-14 * std::max(1.0, pscale)) {
    std::ostringstream os;
    os << "quadrature rates singular: omega=" << omega << " is at a root of P";
    throw SingularityError(os.str(), P);
  }
  QuadratureRates r;
  r.R = 8.0 * q * omega * (omega - 1.0) / (D * P);
  r.S = 4.0 * poly_A(omega, fp.q) / (D * P);
  r.T = 4.0 / (fp.m * P);
  return r;
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::DRootApproach: return "d-root-approach";
    case StopReason::PRootApproach: return "p-root-approach";
    case StopReason::BetaZeroApproach: return "beta-zero-approach";
    case StopReason::GammaOneApproach: return "gamma-one-approach";
    case StopReason::StepUnderflow: return "step-underflow";
    case StopReason::MaxSteps: return "max-steps";
  }
  return "unknown";
}

namespace {

TrajectorySample make_sample(double t, double beta, double gamma, double omega,
                             const FamilyParams& fp, double local_err) {
  TrajectorySample s;
  s.t = t;
  s.beta = beta;
  s.gamma = gamma;
  s.omega = omega;
  s.local_err = local_err;
  const Velocities v = omega_velocities(omega, beta, gamma, fp);
  s.Z = first_integral_Z(beta, gamma, v.beta_dot, v.gamma_dot, fp);
  const Accelerations acc = flow_accelerations(omega, beta, gamma, fp);
  const EquationResiduals res = family_equation_residuals(beta, gamma, v.beta_dot, v.gamma_dot,
                                                          acc.beta_dd, acc.gamma_dd, fp);
  s.res_eq1 = res.eq1;
  s.res_eq2 = res.eq2;
  s.res_eq3 = res.eq3;
  return s;
}

struct Rhs {
  const FamilyParams& fp;
  bool frozen_omega = false;

  bool operator()(const std::array<double, 3>& y, std::array<double, 3>& dy) const {
    const double beta = y[0], gamma = y[1], omega = y[2];
    const double D = poly_D(omega, fp.q);
    if (beta == 0.0 || D == 0.0) return false;
    dy[0] = 2.0 * fp.m * fp.q * omega * (omega - 1.0) / D;
    dy[1] = fp.m * gamma * poly_A(omega, fp.q) / (beta * D);
    dy[2] = frozen_omega ? 0.0 : fp.m * poly_P(omega, fp.q) / (4.0 * beta);
    return std::isfinite(dy[0]) && std::isfinite(dy[1]) && std::isfinite(dy[2]);
  }
};

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

Trajectory integrate_family(const FamilyParams& fp, const FamilyState& initial, double t_end,
                            const IntegrationControls& controls) {
  if (t_end == initial.t) throw ParameterError("integrate_family: empty time span");
  {
    const double D0 = poly_D(initial.omega, fp.q);
    if (std::abs(D0) < controls.droot_floor)
      throw ParameterError("integrate_family: initial omega is too close to a root of D");
  }

  Rhs rhs{fp};
  const double pscale = fp.q * (1.0 + initial.omega * initial.omega);
  rhs.frozen_omega = std::abs(poly_P(initial.omega, fp.q)) < 1e-12 * pscale;

  Trajectory traj{fp, {}, StopReason::Completed, ""};
  const double dir = t_end > initial.t ? 1.0 : -1.0;
  const double span = std::abs(t_end - initial.t);

  std::array<double, 3> y{initial.beta, initial.gamma, initial.omega};
  double t = initial.t;
  traj.samples.push_back(make_sample(t, y[0], y[1], y[2], fp, 0.0));

  const double beta_floor = controls.beta_floor_rel * std::max(1.0, std::abs(initial.beta));
  const int sbeta = sign_of(initial.beta);
  const int sD = sign_of(poly_D(initial.omega, fp.q));
  const int sP = sign_of(poly_P(initial.omega, fp.q));

  using Stop = std::optional<std::pair<StopReason, std::string>>;

  // Sign changes a step must never jump across; triggers step rejection.
  auto crossing = [&](const std::array<double, 3>& yn) -> Stop {
    std::ostringstream os;
    if (sign_of(yn[0]) != sbeta) {
      os << "beta crossed zero (beta=" << yn[0] << ")";
      return std::make_pair(StopReason::BetaZeroApproach, os.str());
    }
    if (yn[1] - 1.0 < 0.0) {
      os << "gamma crossed 1 (gamma=" << yn[1] << ")";
      return std::make_pair(StopReason::GammaOneApproach, os.str());
    }
    if (sign_of(poly_D(yn[2], fp.q)) != sD) {
      const auto [r1, r2] = roots_D(fp.q);
      os << "omega crossed a root of D (omega=" << yn[2] << ", roots " << r1 << ", " << r2 << ")";
      return std::make_pair(StopReason::DRootApproach, os.str());
    }
    if (!rhs.frozen_omega && sign_of(poly_P(yn[2], fp.q)) != sP) {
      const auto [r1, r2] = roots_P(fp.q);
      os << "omega crossed a root of P (omega=" << yn[2] << ", roots " << r1 << ", " << r2 << ")";
      return std::make_pair(StopReason::PRootApproach, os.str());
    }
    return std::nullopt;
  };

  // Stop bands around the singular loci, checked on accepted states.
  auto stop_band = [&](const std::array<double, 3>& yc) -> Stop {
    std::ostringstream os;
    if (std::abs(yc[0]) < beta_floor) {
      os << "beta approached zero (beta=" << yc[0] << ")";
      return std::make_pair(StopReason::BetaZeroApproach, os.str());
    }
    if (yc[1] - 1.0 < controls.gamma_floor) {
      os << "gamma approached 1 (gamma=" << yc[1] << ")";
      return std::make_pair(StopReason::GammaOneApproach, os.str());
    }
    if (std::abs(poly_D(yc[2], fp.q)) < controls.droot_floor) {
      const auto [r1, r2] = roots_D(fp.q);
      os << "omega approached a root of D (omega=" << yc[2] << ", roots " << r1 << ", " << r2 << ")";
      return std::make_pair(StopReason::DRootApproach, os.str());
    }
    if (!rhs.frozen_omega && std::abs(poly_P(yc[2], fp.q)) < controls.proot_floor) {
      const auto [r1, r2] = roots_P(fp.q);
      os << "omega approached a root of P (omega=" << yc[2] << ", roots " << r1 << ", " << r2 << ")";
      return std::make_pair(StopReason::PRootApproach, os.str());
    }
    return std::nullopt;
  };

  // Dormand-Prince 5(4) coefficients (autonomous system, node times unused).
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (auto band = stop_band(y)) {
    traj.stop = band->first;
    traj.stop_detail = band->second;
    return traj;
  }

  double h = controls.initial_step > 0.0
                 ? controls.initial_step
                 : std::min(controls.max_sample_dt, std::max(1e-6, 0.001 * span));
  h = std::min(h, controls.max_sample_dt);
  double err_prev = 1.0;
  long steps = 0;

  const auto hmin_at = [&](double tt) { return 1e-13 * std::max(1.0, std::abs(tt)); };

  while (true) {
    const double remaining = dir * (t_end - t);
    if (remaining <= 1e-14 * std::max(1.0, std::abs(t_end))) {
      traj.stop = StopReason::Completed;
      break;
    }
    if (++steps > controls.max_steps) {
      traj.stop = StopReason::MaxSteps;
      traj.stop_detail = "step budget exhausted";
      break;
    }
    const double hstep = std::min(h, remaining);

    std::array<double, 3> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    bool ok = rhs(y, k1);
    const double hd = dir * hstep;
    if (ok) {
      for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + hd * a21 * k1[i];
      ok = rhs(ytmp, k2);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + hd * (a31 * k1[i] + a32 * k2[i]);
      ok = rhs(ytmp, k3);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i) ytmp[i] = y[i] + hd * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = rhs(ytmp, k4);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        ytmp[i] = y[i] + hd * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = rhs(ytmp, k5);
    }
    if (ok) {
      for (int i = 0; i < 3; ++i)
        ytmp[i] = y[i] + hd * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      ok = rhs(ytmp, k6);
    }
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      for (int i = 0; i < 3; ++i)
        ynew[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ok = rhs(ynew, k7);
      if (ok) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double est = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
          const double sk =
              controls.abs_tol + controls.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          acc += (est / sk) * (est / sk);
        }
        err = std::sqrt(acc / 3.0);
      }
    }

    if (!std::isfinite(err) || err > 1.0) {
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.7) : 0.1;
      h = hstep * fac;
      if (h < hmin_at(t)) {
        traj.stop = StopReason::StepUnderflow;
        traj.stop_detail = "step size underflow during error control";
        break;
      }
      continue;
    }

    if (auto g = crossing(ynew)) {
      h = hstep * 0.5;
      if (h < hmin_at(t)) {
        traj.stop = g->first;
        traj.stop_detail = g->second;
        break;
      }
      continue;
    }

    if (t + hd == t) {
      traj.stop = StopReason::StepUnderflow;
      traj.stop_detail = "step size fell below time resolution";
      break;
    }
    t += hd;
    y = ynew;
    traj.samples.push_back(make_sample(t, y[0], y[1], y[2], fp, err));

    if (auto band = stop_band(y)) {
      traj.stop = band->first;
      traj.stop_detail = band->second;
      break;
    }

    const double safe_err = std::max(err, 1e-10);
    double fac = 0.9 * std::pow(safe_err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);
    err_prev = safe_err;
    h = std::min(hstep * fac, controls.max_sample_dt);
  }

  return traj;
}

Trajectory scaling_transform(const Trajectory& traj, double a, double b, double c) {
  if (a == 0.0 || b == 0.0)
    throw ParameterError("scaling_transform: a and b must be nonzero");
  Trajectory out{traj.params, {}, traj.stop, traj.stop_detail};
  out.samples.reserve(traj.samples.size());
  const FamilyParams& fp = traj.params;
  for (const TrajectorySample& s : traj.samples) {
    const Velocities v = omega_velocities(s.omega, s.beta, s.gamma, fp);
    TrajectorySample n;
    n.t = a * s.t + c;
    n.beta = a * s.beta;
    n.gamma = b * s.gamma;
    n.local_err = s.local_err;
    const double beta_dot = v.beta_dot;            // invariant under the action
    const double gamma_dot = (b / a) * v.gamma_dot;
    n.omega = solve_omega(beta_dot, gamma_dot, n.beta, n.gamma, fp);
    n.Z = first_integral_Z(n.beta, n.gamma, beta_dot, gamma_dot, fp);
    const Accelerations acc = flow_accelerations(n.omega, n.beta, n.gamma, fp);
    const EquationResiduals res =
        family_equation_residuals(n.beta, n.gamma, beta_dot, gamma_dot, acc.beta_dd, acc.gamma_dd, fp);
    n.res_eq1 = res.eq1;
    n.res_eq2 = res.eq2;
    n.res_eq3 = res.eq3;
    n.flagged = !(n.gamma > 1.0);
    out.samples.push_back(n);
  }
  if (a < 0.0) std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

WarpSpec reconstruct_profiles(const Trajectory& traj, const FamilyParams& fp,
                              const ReconstructOptions& opts) {
  if (traj.samples.size() < 2)
    throw ParameterError("reconstruct_profiles: trajectory must have at least 2 samples");

  std::vector<TrajectorySample> s = traj.samples;
  if (s.back().t < s.front().t) std::reverse(s.begin(), s.end());
  for (std::size_t k = 0; k + 1 < s.size(); ++k)
    if (!(s[k + 1].t > s[k].t))
      throw ParameterError("reconstruct_profiles: trajectory t must be strictly monotone");

  const std::size_t n = s.size();
  std::vector<double> knots(n), beta_v(n), beta_d1(n), beta_d2(n), f1_v(n), f1_d1(n), f1_d2(n);
  for (std::size_t k = 0; k < n; ++k) {
    knots[k] = s[k].t;
    const Velocities v = omega_velocities(s[k].omega, s[k].beta, s[k].gamma, fp);
    const Accelerations acc = family_accelerations(s[k].beta, s[k].gamma, v.beta_dot, v.gamma_dot, fp);
    beta_v[k] = s[k].beta;
    beta_d1[k] = v.beta_dot;
    beta_d2[k] = acc.beta_dd;
    f1_v[k] = s[k].gamma - 1.0;
    f1_d1[k] = v.gamma_dot;
    f1_d2[k] = acc.gamma_dd;
  }

  ProfileFunction phi1 = hermite_quintic_profile(knots, beta_v, beta_d1, beta_d2,
                                                 ProfileDesc{"trajectory", {}, "", "beta"});
  ProfileFunction f1 = hermite_quintic_profile(knots, f1_v, f1_d1, f1_d2,
                                               ProfileDesc{"trajectory", {}, "", "gamma_minus_1"});

  const int q = fp.q, n2 = fp.n2;
  const double w = opts.transverse_halfwidth;
  const double slope = (opts.phi2_sign >= 0 ? 1.0 : -1.0) * std::sqrt(fp.lambda / (n2 - 1));
  const double offset = opts.phi2_offset != 0.0 ? opts.phi2_offset
                                                : 1.0 + std::abs(slope) * (w + 0.5);

  const double span = knots.back() - knots.front();
  const double margin = opts.margin_frac * span;
  std::vector<Interval> box;
  box.push_back({knots.front() + margin, knots.back() - margin});  // x1 = xi1
  for (int i = 1; i < q; ++i) box.push_back({-w, w});
  for (int l = 0; l < n2; ++l) box.push_back({-w, w});
  for (int a = 0; a < q; ++a) box.push_back({-w, w});

  std::vector<double> a1(static_cast<std::size_t>(q), 0.0);
  a1[0] = 1.0;
  std::vector<double> a2(static_cast<std::size_t>(n2), 0.0);
  a2[0] = 1.0;

  WarpSpec::Config cfg{
      q,
      n2,
      q,
      Signature::lorentz(q),
      Signature::lorentz(n2),
      DirectionVector(a1),
      DirectionVector(a2),
      std::move(phi1),
      std::move(f1),
      linear_profile(slope, offset),
      constant_profile(1.0),
      fp.lambda,
      DomainBox(std::move(box))};
  return WarpSpec(std::move(cfg));
}

namespace {

void write_row(std::ostream& os, const TrajectorySample& s) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", s.t, s.beta,
                s.gamma, s.omega, s.Z, s.res_eq1, s.res_eq2, s.res_eq3, s.local_err);
  os << buf;
}

}  // namespace

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  char head[256];
  std::snprintf(head, sizeof(head), "# family-trajectory v1\n# q=%d m=%.17g n2=%d lambda=%.17g\n",
                traj.params.q, traj.params.m, traj.params.n2, traj.params.lambda);
  os << head;
  os << "# stop=" << to_string(traj.stop) << "\n";
  os << "t\tbeta\tgamma\tomega\tZ\tres_eq1\tres_eq2\tres_eq3\tlocal_err\n";
  for (const auto& s : traj.samples) write_row(os, s);
}

void write_trajectory_file(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot open trajectory file for writing: " + path);
  write_trajectory(os, traj);
}

Trajectory read_trajectory(std::istream& is) {
  int q = 0, n2 = 0;
  double m = 0.0;
  std::string stop_name = "completed";
  std::string line;
  std::vector<TrajectorySample> samples;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "q") q = std::stoi(val);
        else if (key == "m") m = std::stod(val);
        else if (key == "n2") n2 = std::stoi(val);
        else if (key == "stop") stop_name = val;
      }
      continue;
    }
    if (!header_seen && line.rfind("t\t", 0) == 0) {
      header_seen = true;
      continue;
    }
    TrajectorySample s;
    std::istringstream ls(line);
    if (!(ls >> s.t >> s.beta >> s.gamma >> s.omega >> s.Z >> s.res_eq1 >> s.res_eq2 >>
          s.res_eq3 >> s.local_err))
      throw ParameterError("trajectory file: malformed sample row: " + line);
    samples.push_back(s);
  }
  if (q == 0 || n2 == 0 || !(m > 0.0))
    throw ParameterError("trajectory file: missing q/m/n2 header");
  Trajectory traj{FamilyParams(q, m, n2), std::move(samples), StopReason::Completed, ""};
  for (int r = 0; r <= static_cast<int>(StopReason::MaxSteps); ++r)
    if (to_string(static_cast<StopReason>(r)) == stop_name) traj.stop = static_cast<StopReason>(r);
  return traj;
}

Trajectory read_trajectory_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParameterError("cannot open trajectory file: " + path);
  return read_trajectory(is);
}

}  // namespace warpverify
