#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace warpverify {

/// One batch run: mode, inputs, sampling controls, and tolerance overrides.
/// Unknown tolerance labels for the mode are rejected.
struct RunConfig {
  enum class Mode { VerifyFamily, Ricci, Residuals, Integrate, SymmetryCheck };

  Mode mode = Mode::VerifyFamily;
  std::string spec_path;  // spec file (ricci/residuals) or trajectory file (symmetry-check)

  // family parameters (verify-family / integrate)
  int q = 3;
  int n2 = 3;
  double m = 1.0;

  // initial data and span (verify-family / integrate)
  double t0 = 0.0;
  double t1 = 0.8;
  double beta0 = 1.0;
  double gamma0 = 2.0;
  double omega0 = 1.0;

  // negative-control scaling of phi1 applied after parse/reconstruct
  double phi1_scale = 1.0;

  // symmetry-check action
  double sym_a = 2.0;
  double sym_b = 1.0;
  double sym_c = 0.0;

  int sample_count = 20;
  std::uint64_t seed = 20250810;
  std::map<std::string, double> tolerances;  // label -> override
  std::string output_dir = ".";
};

struct CheckResult {
  std::string label;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  std::vector<std::string> config_lines;  // deterministic echo of the effective config
  std::vector<CheckResult> checks;
  bool all_pass = true;
  double wall_seconds = 0.0;

  /// Full report text (the wall-time line last).
  std::string text() const;
  /// Report text without the wall-time line; byte-identical across runs with
  /// the same (config, seed).
  std::string stable_text() const;
  int exit_code() const { return all_pass ? 0 : 1; }
};

/// Default tolerance labels for a mode.
std::map<std::string, double> default_tolerances(RunConfig::Mode mode);

/// Execute a run: performs the mode's pipeline, writes report.txt (and
/// trajectory tables) into output_dir, and returns the report.
RunReport run(const RunConfig& config);

const char* mode_name(RunConfig::Mode mode);

}  // namespace warpverify
