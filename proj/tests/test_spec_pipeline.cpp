#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "warpverify/einstein_conditions.hpp"
#include "warpverify/errors.hpp"
#include "warpverify/ode_family.hpp"
#include "warpverify/pipeline.hpp"
#include "warpverify/spec_io.hpp"

#include "test_support.hpp"

using namespace warpverify;
namespace fs = std::filesystem;

namespace {

const char* kCatalogSpec = R"({
  "n1": 3, "n2": 3, "d": 2, "lambda": 0.25,
  "eps1": [-1, 1, 1], "eps2": [1, 1, 1],
  "alpha1": [1.0, 0.0, 0.0], "alpha2": [0.5, 0.5, 0.0],
  "phi1": {"kind": "linear", "params": [0.1, 1.5]},
  "f1": {"kind": "quadratic", "params": [0.05, 0.0, 1.0]},
  "phi2": {"kind": "exp", "params": [0.3, 0.2, 1.0]},
  "f2": {"kind": "constant", "params": [0.5]},
  "domain": [[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1]]
})";

fs::path tmp_dir() {
  const fs::path p = fs::current_path() / "spec_pipeline_tmp";
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("catalog spec round-trips through parse and serialize") {
  const WarpSpec spec = parse_spec_text(kCatalogSpec);
  const std::string once = serialize_spec(spec);
  const WarpSpec again = parse_spec_text(once);
  const std::string twice = serialize_spec(again);
  CHECK(once == twice);
  CHECK(again.n1() == 3);
  CHECK(again.lambda() == 0.25);
  CHECK(again.phi1().desc().kind == "linear");
}

TEST_CASE("undersized block dimension is rejected with the requirement") {
  std::string text = kCatalogSpec;
  text.replace(text.find("\"n1\": 3"), 7, "\"n1\": 2");
  text.replace(text.find("\"eps1\": [-1, 1, 1]"), 18, "\"eps1\": [-1, 1]");
  text.replace(text.find("\"alpha1\": [1.0, 0.0, 0.0]"), 25, "\"alpha1\": [1.0, 0.0]");
  // keep domain length consistent: 2 + 3 + 2 = 7 intervals
  text.replace(text.find("\"domain\": [[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1]]"),
               68, "\"domain\": [[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1]]");
  try {
    parse_spec_text(text);
    FAIL("expected SpecParseError");
  } catch (const SpecParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("n1") != std::string::npos);
    CHECK(what.find(">= 3") != std::string::npos);
  }
}

TEST_CASE("zero signature entries and unknown fields are rejected, all at once") {
  std::string text = kCatalogSpec;
  text.replace(text.find("\"eps2\": [1, 1, 1]"), 17, "\"eps2\": [1, 0, 1]");
  text.replace(text.find("\"n2\": 3"), 7, "\"n2\": 2");
  text.insert(text.rfind('}'), ", \"typo_field\": 1\n");
  try {
    parse_spec_text(text);
    FAIL("expected SpecParseError");
  } catch (const SpecParseError& e) {
    CHECK(e.issues().size() >= 3);
    const std::string what = e.what();
    CHECK(what.find("eps2") != std::string::npos);
    CHECK(what.find("typo_field") != std::string::npos);
    CHECK(what.find("n2") != std::string::npos);
  }
}

TEST_CASE("malformed profiles are reported") {
  std::string text = kCatalogSpec;
  text.replace(text.find("{\"kind\": \"linear\", \"params\": [0.1, 1.5]}"), 41,
               "{\"kind\": \"cubic\", \"params\": [0.1]}");
  CHECK_THROWS_AS(parse_spec_text(text), SpecParseError);
}

TEST_CASE("trajectory-backed profiles load from exported files") {
  const fs::path dir = tmp_dir();
  const FamilyParams fp(3, 1.0, 3);
  const Trajectory traj = integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), 0.8);
  const std::string traj_path = (dir / "traj.txt").string();
  write_trajectory_file(traj_path, traj);

  const double span = traj.back().t - traj.front().t;
  const double lo = traj.front().t + 0.05 * span;
  const double hi = traj.back().t - 0.05 * span;
  std::string text = R"({
  "n1": 3, "n2": 3, "d": 3, "lambda": 1.5,
  "eps1": [-1, 1, 1], "eps2": [-1, 1, 1],
  "alpha1": [1.0, 0.0, 0.0], "alpha2": [1.0, 0.0, 0.0],
  "phi1": {"kind": "trajectory", "path": ")" + traj_path + R"(", "field": "beta"},
  "f1": {"kind": "trajectory", "path": ")" + traj_path + R"(", "field": "gamma_minus_1"},
  "phi2": {"kind": "linear", "params": [0.8660254037844386, 2.0]},
  "f2": {"kind": "constant", "params": [1.0]},
  "domain": [[)" + std::to_string(lo) + "," + std::to_string(hi) +
                     R"(],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1]]
})";
  const WarpSpec spec = parse_spec_text(text);
  CHECK(spec.family_normalized());
  // round-trips because the trajectory profiles carry their path
  const WarpSpec again = parse_spec_text(serialize_spec(spec));
  CHECK(again.phi1().desc().path == traj_path);
  // and the loaded solution has small condition residuals
  std::mt19937_64 rng(31);
  const ChartPoint p = spec.domain().sample(rng);
  CHECK(einstein_condition_residuals(spec, p).max_abs < 1e-7);

  // the numeric Ricci pipeline accepts the same file
  const std::string spec_path = (dir / "family_spec.json").string();
  {
    std::ofstream os(spec_path);
    os << serialize_spec(spec);
  }
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::Ricci;
  cfg.spec_path = spec_path;
  cfg.sample_count = 5;
  cfg.output_dir = (dir / "ricci_out").string();
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass);
}

TEST_CASE("verify-family run passes and is deterministic") {
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::VerifyFamily;
  cfg.q = 3;
  cfg.n2 = 3;
  cfg.m = 1.0;
  cfg.sample_count = 8;
  cfg.seed = 99;
  cfg.output_dir = (tmp_dir() / "vf").string();
  const RunReport r1 = run(cfg);
  CHECK(r1.all_pass);
  CHECK(r1.exit_code() == 0);
  for (const auto& c : r1.checks) CHECK(c.pass);

  const RunReport r2 = run(cfg);
  CHECK(r1.stable_text() == r2.stable_text());

  RunConfig other = cfg;
  other.seed = 100;
  const RunReport r3 = run(other);
  CHECK(r3.all_pass);
  CHECK(r1.stable_text() != r3.stable_text());  // seed is echoed
}

TEST_CASE("every requested check appears exactly once and honors overrides") {
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::Integrate;
  cfg.output_dir = (tmp_dir() / "integ").string();
  cfg.tolerances["Z_rel"] = 1e-12;
  const RunReport rep = run(cfg);
  int z_seen = 0;
  for (const auto& c : rep.checks) {
    if (c.label == "Z_rel") {
      ++z_seen;
      CHECK(c.tolerance == 1e-12);
    }
  }
  CHECK(z_seen == 1);
  CHECK(rep.checks.size() == default_tolerances(cfg.mode).size());

  RunConfig bad = cfg;
  bad.tolerances["no_such_label"] = 1.0;
  CHECK_THROWS_AS(run(bad), ParameterError);
  RunConfig neg = cfg;
  neg.tolerances["Z_rel"] = -1.0;
  CHECK_THROWS_AS(run(neg), ParameterError);
}

TEST_CASE("residuals mode on the flat spec measures zero") {
  const fs::path dir = tmp_dir();
  const std::string spec_path = (dir / "flat.json").string();
  {
    std::ofstream os(spec_path);
    os << R"({
  "n1": 3, "n2": 3, "d": 2, "lambda": 0.0,
  "eps1": [-1, 1, 1], "eps2": [1, 1, 1],
  "alpha1": [1.0, 0.0, 0.0], "alpha2": [0.0, 1.0, 0.0],
  "phi1": {"kind": "constant", "params": [1.0]},
  "f1": {"kind": "constant", "params": [0.5]},
  "phi2": {"kind": "constant", "params": [2.0]},
  "f2": {"kind": "constant", "params": [0.5]},
  "domain": [[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1],[-1,1]]
})";
  }
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::Residuals;
  cfg.spec_path = spec_path;
  cfg.sample_count = 10;
  cfg.output_dir = (dir / "flat_out").string();
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass);
  for (const auto& c : rep.checks) CHECK(c.measured < 1e-12);
}

TEST_CASE("symmetry-check mode accepts a stored trajectory") {
  const fs::path dir = tmp_dir();
  const FamilyParams fp(3, 1.0, 3);
  const Trajectory traj = integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), 0.6);
  const std::string traj_path = (dir / "sym_traj.txt").string();
  write_trajectory_file(traj_path, traj);

  RunConfig cfg;
  cfg.mode = RunConfig::Mode::SymmetryCheck;
  cfg.spec_path = traj_path;
  cfg.sym_a = 2.0;
  cfg.sym_b = 3.0;
  cfg.sym_c = 1.0;
  cfg.output_dir = (dir / "sym_out").string();
  const RunReport rep = run(cfg);
  CHECK(rep.all_pass);
  CHECK(fs::exists(fs::path(cfg.output_dir) / "trajectory_transformed.txt"));
}

TEST_CASE("negative control: scaled phi1 fails the run and the exit status") {
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::VerifyFamily;
  cfg.sample_count = 5;
  cfg.phi1_scale = 1.05;
  cfg.output_dir = (tmp_dir() / "neg").string();
  const RunReport rep = run(cfg);
  CHECK_FALSE(rep.all_pass);
  CHECK(rep.exit_code() != 0);
  double conditions = 0.0;
  for (const auto& c : rep.checks)
    if (c.label == "conditions_max") conditions = c.measured;
  CHECK(conditions > 1e-3);
}

TEST_CASE("report text carries the config echo and the result line") {
  RunConfig cfg;
  cfg.mode = RunConfig::Mode::Integrate;
  cfg.seed = 4242;
  cfg.output_dir = (tmp_dir() / "echo").string();
  const RunReport rep = run(cfg);
  const std::string text = rep.text();
  CHECK(text.find("seed 4242") != std::string::npos);
  CHECK(text.find("mode integrate") != std::string::npos);
  CHECK(text.find("result PASS") != std::string::npos);
  CHECK(text.find("wall_time_seconds") != std::string::npos);
  CHECK(rep.stable_text().find("wall_time_seconds") == std::string::npos);
  // report file written
  std::ifstream is(fs::path(cfg.output_dir) / "report.txt");
  CHECK(is.good());
}
