// Batch front end: verify-family | ricci | residuals | integrate |
// symmetry-check. Each subcommand runs one pipeline, writes report.txt and
// trajectory tables into --out, and exits nonzero iff a check fails.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "warpverify/errors.hpp"
#include "warpverify/pipeline.hpp"
#include "warpverify/version.hpp"

namespace {

using warpverify::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg, std::vector<std::string>& tol_args) {
  cmd->add_option("--samples", cfg.sample_count, "Number of random verification points")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "RNG seed (recorded in the report)");
  cmd->add_option("--tol", tol_args, "Tolerance override LABEL=REAL (repeatable)");
  cmd->add_option("--out", cfg.output_dir, "Output directory for report and tables");
}

void add_family(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--q", cfg.q, "Block-1 / fiber dimension q = n1 = d (>= 3)");
  cmd->add_option("--n2", cfg.n2, "Block-2 dimension (>= 3)");
  cmd->add_option("--m", cfg.m, "Slope scale m > 0 (lambda = q m^2/2)");
  cmd->add_option("--beta0", cfg.beta0, "Initial beta (nonzero)");
  cmd->add_option("--gamma0", cfg.gamma0, "Initial gamma (> 1)");
  cmd->add_option("--omega0", cfg.omega0, "Initial omega");
  cmd->add_option("--t0", cfg.t0, "Initial time");
  cmd->add_option("--t1", cfg.t1, "Final time");
}

void parse_tols(const std::vector<std::string>& tol_args, RunConfig& cfg) {
  for (const std::string& s : tol_args) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw warpverify::ParameterError("--tol expects LABEL=REAL, got '" + s + "'");
    cfg.tolerances[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of Einstein conditions for sequential warped-product "
               "metrics and their lambda > 0 solution family"};
  app.set_version_flag("--version", warpverify::kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> tol_args;

  auto* verify = app.add_subcommand(
      "verify-family", "Integrate the family, reconstruct profiles, verify the Einstein conditions");
  add_family(verify, cfg);
  verify->add_option("--phi1-scale", cfg.phi1_scale,
                     "Negative-control scaling of the reconstructed phi1");
  add_common(verify, cfg, tol_args);

  auto* ricci_cmd = app.add_subcommand("ricci", "Numeric Ricci / Einstein residual of a spec file");
  ricci_cmd->add_option("--spec", cfg.spec_path, "Spec file (JSON)")->required();
  ricci_cmd->add_option("--phi1-scale", cfg.phi1_scale, "Negative-control scaling of phi1");
  add_common(ricci_cmd, cfg, tol_args);

  auto* resid = app.add_subcommand("residuals", "Closed-form condition residuals of a spec file");
  resid->add_option("--spec", cfg.spec_path, "Spec file (JSON)")->required();
  resid->add_option("--phi1-scale", cfg.phi1_scale, "Negative-control scaling of phi1");
  add_common(resid, cfg, tol_args);

  auto* integ = app.add_subcommand("integrate", "Integrate the family and export the trajectory");
  add_family(integ, cfg);
  add_common(integ, cfg, tol_args);

  auto* sym = app.add_subcommand("symmetry-check",
                                 "Apply the scaling action to a stored trajectory and re-verify");
  sym->add_option("--spec", cfg.spec_path, "Stored trajectory file")->required();
  sym->add_option("--a", cfg.sym_a, "Time/beta scale (nonzero)");
  sym->add_option("--b", cfg.sym_b, "Gamma scale (nonzero)");
  sym->add_option("--c", cfg.sym_c, "Time offset");
  add_common(sym, cfg, tol_args);

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) cfg.mode = RunConfig::Mode::VerifyFamily;
  else if (ricci_cmd->parsed()) cfg.mode = RunConfig::Mode::Ricci;
  else if (resid->parsed()) cfg.mode = RunConfig::Mode::Residuals;
  else if (integ->parsed()) cfg.mode = RunConfig::Mode::Integrate;
  else if (sym->parsed()) cfg.mode = RunConfig::Mode::SymmetryCheck;

  try {
    parse_tols(tol_args, cfg);
    const warpverify::RunReport report = warpverify::run(cfg);
    std::cout << report.text();
    return report.exit_code();
  } catch (const warpverify::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
