#include "warpverify/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "warpverify/curvature.hpp"
#include "warpverify/einstein_conditions.hpp"
#include "warpverify/errors.hpp"
#include "warpverify/ode_family.hpp"
#include "warpverify/spec_io.hpp"
#include "warpverify/version.hpp"

namespace warpverify {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SampleStats {
  double z_rel = 0.0;
  double ode_res_rel = 0.0;
};

SampleStats trajectory_stats(const Trajectory& traj) {
  SampleStats st;
  const FamilyParams& fp = traj.params;
  for (const TrajectorySample& s : traj.samples) {
    const double zscale = fp.q * fp.m * fp.m * s.gamma * s.gamma;
    st.z_rel = std::max(st.z_rel, std::abs(s.Z) / zscale);
    const Velocities v = omega_velocities(s.omega, s.beta, s.gamma, fp);
    const Accelerations acc = flow_accelerations(s.omega, s.beta, s.gamma, fp);
    const EquationResiduals r = family_equation_residuals(s.beta, s.gamma, v.beta_dot, v.gamma_dot,
                                                          acc.beta_dd, acc.gamma_dd, fp);
    st.ode_res_rel = std::max({st.ode_res_rel, std::abs(r.eq1) / r.scale1,
                               std::abs(r.eq2) / r.scale2, std::abs(r.eq3) / r.scale3});
  }
  return st;
}

WarpSpec apply_phi1_scale(const WarpSpec& spec, double factor) {
  if (factor == 1.0) return spec;
  WarpSpec::Config cfg{spec.n1(),     spec.n2(),     spec.d(),
                       spec.eps1(),   spec.eps2(),   spec.alpha1(),
                       spec.alpha2(), scale_profile(spec.phi1(), factor),
                       spec.f1(),     spec.phi2(),   spec.f2(),
                       spec.lambda(), spec.domain()};
  return WarpSpec(std::move(cfg));
}

double max_conditions_residual(const WarpSpec& spec, int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    worst = std::max(worst, einstein_condition_residuals(spec, p).max_abs);
  }
  return worst;
}

double max_einstein_rel(const WarpSpec& spec, int samples, std::mt19937_64& rng) {
  const MetricField metric = build_metric(spec);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    const CurvatureReport rep = einstein_residual(metric, spec.lambda(), p);
    const double gmax = metric.value(p).cwiseAbs().maxCoeff();
    worst = std::max(worst, rep.max_abs_residual / gmax);
  }
  return worst;
}

double max_closed_vs_numeric(const WarpSpec& spec, int samples, std::mt19937_64& rng) {
  const MetricField metric = build_metric(spec);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    const Eigen::MatrixXd closed = ricci_closed_form(spec, p);
    const Eigen::MatrixXd numeric = ricci(metric, p);
    const double denom = std::max(1.0, closed.cwiseAbs().maxCoeff());
    worst = std::max(worst, (closed - numeric).cwiseAbs().maxCoeff() / denom);
  }
  return worst;
}

double max_hess_f2(const WarpSpec& spec, int samples, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    for (int l = 0; l < spec.n2(); ++l)
      for (int r = l; r < spec.n2(); ++r)
        worst = std::max(worst, std::abs(hessian_f2_residual(spec, l, r, p)));
  }
  return worst;
}

}  // namespace

const char* mode_name(RunConfig::Mode mode) {
  switch (mode) {
    case RunConfig::Mode::VerifyFamily: return "verify-family";
    case RunConfig::Mode::Ricci: return "ricci";
    case RunConfig::Mode::Residuals: return "residuals";
    case RunConfig::Mode::Integrate: return "integrate";
    case RunConfig::Mode::SymmetryCheck: return "symmetry-check";
  }
  return "unknown";
}

std::map<std::string, double> default_tolerances(RunConfig::Mode mode) {
  switch (mode) {
    case RunConfig::Mode::VerifyFamily:
      return {{"Z_rel", 1e-8}, {"ode_res_rel", 1e-8}, {"conditions_max", 1e-7},
              {"einstein_rel", 1e-5}};
    case RunConfig::Mode::Ricci:
      return {{"einstein_rel", 1e-5}, {"closed_vs_numeric_rel", 1e-5}};
    case RunConfig::Mode::Residuals:
      return {{"conditions_max", 1e-7}, {"hess_f2_max", 1e-7}};
    case RunConfig::Mode::Integrate:
      return {{"Z_rel", 1e-8}, {"ode_res_rel", 1e-8}};
    case RunConfig::Mode::SymmetryCheck:
      return {{"transformed_res_rel", 1e-8}, {"flagged_count", 0.5}};
  }
  return {};
}

std::string RunReport::text() const {
  return stable_text() + "wall_time_seconds " + fmt(wall_seconds) + "\n";
}

std::string RunReport::stable_text() const {
  std::ostringstream os;
  os << "warpverify report v1\n";
  os << "defaults " << kDefaultsVersion << "\n";
  os << "version " << kVersion << "\n";
  for (const auto& l : config_lines) os << l << "\n";
  for (const auto& c : checks) {
    os << "check " << c.label << " measured " << fmt(c.measured) << " tol " << fmt(c.tolerance)
       << " " << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  os << "result " << (all_pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

RunReport run(const RunConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();

  if (config.sample_count < 1) throw ParameterError("RunConfig: sample_count must be >= 1");

  std::map<std::string, double> tols = default_tolerances(config.mode);
  for (const auto& [label, value] : config.tolerances) {
    auto it = tols.find(label);
    if (it == tols.end())
      throw ParameterError("RunConfig: unknown tolerance label '" + label + "' for mode " +
                           mode_name(config.mode));
    if (!(value > 0.0)) throw ParameterError("RunConfig: tolerances must be positive");
    it->second = value;
  }

  RunReport report;
  auto echo = [&](const std::string& key, const std::string& val) {
    report.config_lines.push_back(key + " " + val);
  };
  echo("mode", mode_name(config.mode));
  echo("seed", std::to_string(config.seed));
  echo("samples", std::to_string(config.sample_count));
  echo("output_dir", config.output_dir);

  std::filesystem::create_directories(config.output_dir);
  const auto out_path = [&](const char* name) {
    return (std::filesystem::path(config.output_dir) / name).string();
  };

  std::mt19937_64 rng(config.seed);
  std::map<std::string, double> measured;

  switch (config.mode) {
    case RunConfig::Mode::VerifyFamily: {
      echo("q", std::to_string(config.q));
      echo("n2", std::to_string(config.n2));
      echo("m", fmt(config.m));
      const FamilyParams fp(config.q, config.m, config.n2);
      echo("lambda", fmt(fp.lambda));
      echo("initial", fmt(config.beta0) + " " + fmt(config.gamma0) + " " + fmt(config.omega0));
      echo("t_span", fmt(config.t0) + " " + fmt(config.t1));
      echo("phi1_scale", fmt(config.phi1_scale));

      const Trajectory traj =
          integrate_family(fp, FamilyState(config.t0, config.beta0, config.gamma0, config.omega0),
                           config.t1);
      echo("trajectory_stop", to_string(traj.stop));
      const std::string traj_path = out_path("trajectory.txt");
      write_trajectory_file(traj_path, traj);

      const SampleStats st = trajectory_stats(traj);
      measured["Z_rel"] = st.z_rel;
      measured["ode_res_rel"] = st.ode_res_rel;

      WarpSpec spec = reconstruct_profiles(traj, fp);
      spec = apply_phi1_scale(spec, config.phi1_scale);
      measured["conditions_max"] = max_conditions_residual(spec, config.sample_count, rng);
      measured["einstein_rel"] = max_einstein_rel(spec, config.sample_count, rng);
      break;
    }
    case RunConfig::Mode::Ricci: {
      echo("spec", config.spec_path);
      echo("phi1_scale", fmt(config.phi1_scale));
      WarpSpec spec = apply_phi1_scale(parse_spec(config.spec_path), config.phi1_scale);
      measured["einstein_rel"] = max_einstein_rel(spec, config.sample_count, rng);
      measured["closed_vs_numeric_rel"] = max_closed_vs_numeric(spec, config.sample_count, rng);
      break;
    }
    case RunConfig::Mode::Residuals: {
      echo("spec", config.spec_path);
      echo("phi1_scale", fmt(config.phi1_scale));
      WarpSpec spec = apply_phi1_scale(parse_spec(config.spec_path), config.phi1_scale);
      measured["conditions_max"] = max_conditions_residual(spec, config.sample_count, rng);
      measured["hess_f2_max"] = max_hess_f2(spec, config.sample_count, rng);
      break;
    }
    case RunConfig::Mode::Integrate: {
      echo("q", std::to_string(config.q));
      echo("n2", std::to_string(config.n2));
      echo("m", fmt(config.m));
      const FamilyParams fp(config.q, config.m, config.n2);
      echo("lambda", fmt(fp.lambda));
      echo("initial", fmt(config.beta0) + " " + fmt(config.gamma0) + " " + fmt(config.omega0));
      echo("t_span", fmt(config.t0) + " " + fmt(config.t1));
      const Trajectory traj =
          integrate_family(fp, FamilyState(config.t0, config.beta0, config.gamma0, config.omega0),
                           config.t1);
      echo("trajectory_stop", to_string(traj.stop));
      write_trajectory_file(out_path("trajectory.txt"), traj);
      const SampleStats st = trajectory_stats(traj);
      measured["Z_rel"] = st.z_rel;
      measured["ode_res_rel"] = st.ode_res_rel;
      break;
    }
    case RunConfig::Mode::SymmetryCheck: {
      echo("trajectory", config.spec_path);
      echo("action", fmt(config.sym_a) + " " + fmt(config.sym_b) + " " + fmt(config.sym_c));
      const Trajectory traj = read_trajectory_file(config.spec_path);
      const Trajectory transformed = scaling_transform(traj, config.sym_a, config.sym_b, config.sym_c);
      write_trajectory_file(out_path("trajectory_transformed.txt"), transformed);
      double worst = 0.0;
      long flagged = 0;
      for (const TrajectorySample& s : transformed.samples) {
        if (s.flagged) {
          ++flagged;
          continue;
        }
        const Velocities v = omega_velocities(s.omega, s.beta, s.gamma, transformed.params);
        const Accelerations acc = flow_accelerations(s.omega, s.beta, s.gamma, transformed.params);
        const EquationResiduals r = family_equation_residuals(
            s.beta, s.gamma, v.beta_dot, v.gamma_dot, acc.beta_dd, acc.gamma_dd, transformed.params);
        worst = std::max({worst, std::abs(r.eq1) / r.scale1, std::abs(r.eq2) / r.scale2,
                          std::abs(r.eq3) / r.scale3});
      }
      measured["transformed_res_rel"] = worst;
      measured["flagged_count"] = static_cast<double>(flagged);
      break;
    }
  }

  for (const auto& [label, tol] : tols) {
    CheckResult c;
    c.label = label;
    c.tolerance = tol;
    c.measured = measured.count(label) ? measured[label] : 0.0;
    c.pass = c.measured <= tol;
    report.all_pass = report.all_pass && c.pass;
    report.checks.push_back(c);
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  std::ofstream rf(out_path("report.txt"));
  if (!rf) throw ParameterError("cannot write report to " + config.output_dir);
  rf << report.text();
  return report;
}

}  // namespace warpverify
