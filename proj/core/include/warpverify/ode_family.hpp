#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "warpverify/types.hpp"
#include "warpverify/warp_spec.hpp"

namespace warpverify {

/// Parameters of the lambda > 0 solution family: q = n1 = d, slope scale m > 0,
/// lambda = q m^2 / 2 exactly, and the second-block dimension n2.
struct FamilyParams {
  int q = 3;
  double m = 1.0;
  double lambda = 1.5;
  int n2 = 3;

  FamilyParams(int q_, double m_, int n2_);
};

/// Dynamical state (t, beta, gamma, omega); beta != 0 and gamma > 1.
struct FamilyState {
  double t = 0.0;
  double beta = 1.0;
  double gamma = 2.0;
  double omega = 0.0;

  FamilyState() = default;
  FamilyState(double t_, double beta_, double gamma_, double omega_);
};

/// The quadratic denominator D(omega) = (q-2) omega^2 - 2q omega + q of the
/// velocity parametrization, the numerator A(omega) = (q-2) omega^2 - q of the
/// gamma-velocity, and the rate polynomial P(omega) = q + 2q omega - (3q-2) omega^2.
double poly_D(double omega, int q);
double poly_A(double omega, int q);
double poly_P(double omega, int q);
/// Roots of D (ascending); q >= 3 so both are real.
std::pair<double, double> roots_D(int q);
/// Roots of P (ascending).
std::pair<double, double> roots_P(int q);

/// Which form of the second of the three second-order equations to use. The
/// Standard form (-gamma beta beta'' + (q-1) gamma beta'^2 - q beta beta' gamma'
/// = q m^2 gamma / 2) is compatible with the first integral; AltTranscription
/// ( -beta gamma beta'' - (q-1) gamma beta'^2 - q beta' gamma' = q m^2 gamma / 2 )
/// is kept evaluable because it breaks compatibility and tests document that.
enum class Eq2Form { Standard, AltTranscription };

struct Accelerations {
  double beta_dd = 0.0;
  double gamma_dd = 0.0;
};

/// Solve the second and third second-order equations for (beta'', gamma'').
/// Requires beta != 0 and gamma != 0.
Accelerations family_accelerations(double beta, double gamma, double beta_dot, double gamma_dot,
                                   const FamilyParams& fp, Eq2Form form = Eq2Form::Standard);

/// Residuals of the three second-order equations (Standard form) given a full
/// jet of (beta, gamma).
struct EquationResiduals {
  double eq1 = 0.0, eq2 = 0.0, eq3 = 0.0;
  double scale1 = 1.0, scale2 = 1.0, scale3 = 1.0;  // sums of term magnitudes
};
EquationResiduals family_equation_residuals(double beta, double gamma, double beta_dot,
                                            double gamma_dot, double beta_dd, double gamma_dd,
                                            const FamilyParams& fp);

/// Conserved quadratic
///   Z = (q-2) gamma^2 beta'^2 - 2q beta gamma beta' gamma' + q beta^2 gamma'^2
///       - q m^2 gamma^2.
double first_integral_Z(double beta, double gamma, double beta_dot, double gamma_dot,
                        const FamilyParams& fp);
/// Sum of the magnitudes of the four terms of Z (for relative drift bounds).
double first_integral_scale(double beta, double gamma, double beta_dot, double gamma_dot,
                            const FamilyParams& fp);

struct Velocities {
  double beta_dot = 0.0;
  double gamma_dot = 0.0;
};

/// Velocity parametrization by omega:
///   beta'  = 2 m q omega (omega - 1) / D(omega)
///   gamma' = m gamma ((q-2) omega^2 - q) / (beta D(omega)).
/// Every output satisfies Z = 0 identically. Throws SingularityError at roots
/// of D (naming the root) and for beta == 0.
Velocities omega_velocities(double omega, double beta, double gamma, const FamilyParams& fp);

/// Rate of the parametrizing function:
///   omega' = m P(omega) / (4 beta).
/// (The quarter factor is forced by the second-order system: differentiating
/// the beta-velocity and eliminating the accelerations yields exactly this
/// rate; see the flow/acceleration consistency tests.)
double omega_rate(double omega, double beta, const FamilyParams& fp);

/// d/dt of omega_velocities along the (beta, gamma, omega) flow.
Accelerations flow_accelerations(double omega, double beta, double gamma, const FamilyParams& fp);

/// Solve omega from (beta', gamma') at (beta, gamma): the beta'-equation is a
/// quadratic in omega; the gamma'-equation disambiguates. Throws
/// ParameterError if no candidate reproduces both velocities within tol.
double solve_omega(double beta_dot, double gamma_dot, double beta, double gamma,
                   const FamilyParams& fp, double tol = 1e-8);

/// Logarithmic-derivative rates with respect to omega:
///   dlog(beta)/domega = R, dlog(gamma)/domega = S, dt/domega = beta T.
struct QuadratureRates {
  double R = 0.0;
  double S = 0.0;
  double T = 0.0;
};
/// R = 8 q omega (omega-1) / (D P), S = 4 ((q-2) omega^2 - q) / (D P),
/// T = 4 / (m P); quotients of the velocity and rate parametrization.
QuadratureRates quadrature_rates(double omega, const FamilyParams& fp);

struct TrajectorySample {
  double t = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double omega = 0.0;
  double Z = 0.0;
  double res_eq1 = 0.0;
  double res_eq2 = 0.0;
  double res_eq3 = 0.0;
  double local_err = 0.0;
  bool flagged = false;  // set by scaling_transform when an invariant breaks
};

enum class StopReason {
  Completed,
  DRootApproach,
  PRootApproach,
  BetaZeroApproach,
  GammaOneApproach,
  StepUnderflow,
  MaxSteps
};
std::string to_string(StopReason r);

struct IntegrationControls {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;     // 0: choose automatically
  double max_sample_dt = 0.005;  // cap on step size; keeps samples dense enough
                                 // for quintic reconstruction
  long max_steps = 2000000;
  double beta_floor_rel = 1e-3;   // stop when |beta| < rel * max(1, |beta0|)
  double gamma_floor = 1e-6;      // stop when gamma - 1 < floor
  double droot_floor = 1e-7;      // stop when |D(omega)| < floor
  double proot_floor = 1e-12;     // stop when |P(omega)| < floor (non-frozen runs)
};

struct Trajectory {
  FamilyParams params;
  std::vector<TrajectorySample> samples;
  StopReason stop = StopReason::Completed;
  std::string stop_detail;

  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

/// Integrate the first-order (beta, gamma, omega) system with an embedded
/// Dormand-Prince 5(4) pair under PI step control from the initial state to
/// t_end (either direction). Per accepted step the sample records Z, the three
/// second-order equation residuals (flow accelerations), and the local error
/// estimate. Stops early, with a labeled reason, on approach to roots of D or
/// P, beta -> 0, or gamma -> 1. If P(omega0) == 0 the run freezes omega (fixed
/// point).
Trajectory integrate_family(const FamilyParams& fp, const FamilyState& initial, double t_end,
                            const IntegrationControls& controls = {});

/// Samplewise symmetry action (t, beta, gamma) -> (a t + c, a beta, b gamma)
/// with omega re-solved from the transformed velocities. a, b must be nonzero;
/// samples whose transformed gamma is not > 1 are flagged. For a < 0 the
/// sample order is reversed so t stays monotone increasing.
Trajectory scaling_transform(const Trajectory& traj, double a, double b, double c);

struct ReconstructOptions {
  int phi2_sign = +1;
  double phi2_offset = 0.0;  // 0: choose automatically so phi2 > 0 on the box
  double margin_frac = 0.02; // trimmed off each end of the t-range
  double transverse_halfwidth = 1.0;  // box half-width for coordinates xi ignores
};

/// Build a WarpSpec from an integrated trajectory: phi1(xi1) = beta(xi1) and
/// f1(xi1) = gamma(xi1) - 1 as quintic interpolants matched to the flow
/// velocities and accelerations, f2 = 1, phi2 linear with slope^2 =
/// lambda/(n2-1), Lorentz signatures with unit invariant directions on both
/// blocks.
WarpSpec reconstruct_profiles(const Trajectory& traj, const FamilyParams& fp,
                              const ReconstructOptions& opts = {});

/// Delimited-text trajectory export: comment header with the family
/// parameters, one header row, then one row per sample with columns
/// [t, beta, gamma, omega, Z, res_eq1, res_eq2, res_eq3, local_err].
void write_trajectory(std::ostream& os, const Trajectory& traj);
void write_trajectory_file(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory(std::istream& is);
Trajectory read_trajectory_file(const std::string& path);

}  // namespace warpverify
