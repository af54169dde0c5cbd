#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "warpverify/curvature.hpp"
#include "warpverify/einstein_conditions.hpp"
#include "warpverify/errors.hpp"

#include "test_support.hpp"

using namespace warpverify;
using wvtest::SpecBuilder;
using wvtest::pt;

namespace {

// Covariant Hessian of a profile on a conformal block, with the connection
// taken numerically from the curvature engine (independent of the closed
// forms under test).
double hessian_oracle(const MetricField& block, const ProfileFunction& f,
                      const DirectionVector& alpha, double xi_val, const ChartPoint& block_pt,
                      int i, int j) {
  const ChristoffelSymbols gamma = christoffel(block, block_pt);
  const double df = f.d1(xi_val), ddf = f.d2(xi_val);
  double s = ddf * alpha[i] * alpha[j];
  for (int k = 0; k < alpha.dim(); ++k) s -= gamma(k, i, j) * df * alpha[k];
  return s;
}

}  // namespace

TEST_CASE("trace identities vanish for the constant-warping balance") {
  TraceParams tp;
  tp.d = 4;
  tp.n = 6;
  tp.lambda = 0.7;
  tp.f = 1.3;
  tp.laplacian_f = 0.0;
  tp.grad_f_sq = 0.0;
  tp.R_B = tp.n * tp.lambda;
  tp.mu = tp.lambda * tp.f * tp.f;
  const ResidualReport rep = warped_trace_identity(tp);
  CHECK(rep.max_abs < 1e-12);

  TraceParams flat;
  flat.d = 3;
  flat.n = 5;
  flat.f = 2.0;
  const ResidualReport rep2 = warped_trace_identity(flat);
  CHECK(rep2.max_abs < 1e-15);
}

TEST_CASE("third trace identity is the stated combination of the first two") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    TraceParams tp;
    tp.d = 2 + static_cast<int>(rng() % 4);
    tp.n = 3 + static_cast<int>(rng() % 5);
    tp.lambda = u(rng);
    tp.mu = u(rng);
    tp.R_B = u(rng);
    tp.f = 0.5 + std::abs(u(rng));
    tp.laplacian_f = u(rng);
    tp.grad_f_sq = u(rng);
    const ResidualReport rep = warped_trace_identity(tp);
    const double r12 = rep.value_of("base_trace");
    const double r13 = rep.value_of("fiber_trace");
    const double r14 = rep.value_of("grad_identity");
    const double combo = (r12 + r13) / (tp.d * (tp.d - 1.0));
    CHECK(r14 == doctest::Approx(combo).epsilon(1e-11));
  }
  TraceParams bad;
  bad.d = 1;
  bad.n = 3;
  bad.f = 1.0;
  CHECK_THROWS_AS(warped_trace_identity(bad), ParameterError);
}

TEST_CASE("conformal block-1 Ricci: constant factor is flat") {
  SpecBuilder b;
  const WarpSpec spec = b.build();
  std::mt19937_64 rng(5);
  const ChartPoint p = spec.domain().sample(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(conformal_ricci_block1(spec, i, j, p) == 0.0);
}

TEST_CASE("conformal block-1 Ricci reproduces the hyperbolic values") {
  SpecBuilder b;
  b.eps1 = {1, 1, 1};
  b.alpha1 = {0, 0, 1};
  b.phi1 = linear_profile(1.0, 0.0);  // phi1 = x3
  b.box.assign(9, Interval{-1.0, 1.0});
  b.box[2] = {1.5, 3.0};
  const WarpSpec spec = b.build();
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    const double x3 = p[2];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expected = (i == j) ? -2.0 / (x3 * x3) : 0.0;  // -2 * gbar_ij
        CHECK(std::abs(conformal_ricci_block1(spec, i, j, p) - expected) < 1e-12);
      }
  }
}

TEST_CASE("conformal block Ricci matches the numeric engine") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const WarpSpec spec = wvtest::random_catalog_spec(rng);
    const BlockViews views = block_views(spec);
    const ChartPoint p = spec.domain().sample(rng);
    {
      const ChartPoint x = p.head(spec.n1());
      const Eigen::MatrixXd numeric = ricci(views.block1, x);
      for (int i = 0; i < spec.n1(); ++i)
        for (int j = 0; j < spec.n1(); ++j)
          CHECK(std::abs(conformal_ricci_block1(spec, i, j, p) - numeric(i, j)) < 1e-6);
    }
    {
      const ChartPoint y = p.segment(spec.n1(), spec.n2());
      const Eigen::MatrixXd numeric = ricci(views.block2, y);
      for (int l = 0; l < spec.n2(); ++l)
        for (int r = 0; r < spec.n2(); ++r)
          CHECK(std::abs(conformal_ricci_block2(spec, l, r, p) - numeric(l, r)) < 1e-6);
    }
  }
}

TEST_CASE("linear conformal factor on a unit timelike direction matches the engine") {
  SpecBuilder b;
  b.phi1 = linear_profile(0.45, 1.7);  // eps-norm(alpha1) = -1 (lorentz, unit direction)
  const WarpSpec spec = b.build();
  const BlockViews views = block_views(spec);
  std::mt19937_64 rng(107);
  for (int k = 0; k < 3; ++k) {
    const ChartPoint p = spec.domain().sample(rng);
    const ChartPoint x = p.head(3);
    const Eigen::MatrixXd numeric = ricci(views.block1, x);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(conformal_ricci_block1(spec, i, j, p) - numeric(i, j)) < 1e-6);
  }
}

TEST_CASE("trace identities hold for the family solution with numeric base scalars") {
  const auto fx = wvtest::make_family_fixture(3, 3, 1.0);
  const BlockViews views = block_views(fx.spec);
  std::mt19937_64 rng(109);
  for (int k = 0; k < 3; ++k) {
    const ChartPoint p = fx.spec.domain().sample(rng);
    const ChartPoint x = p.head(3);
    const ChartPoint y = p.segment(3, 3);
    const double xi1 = fx.spec.xi1(p);

    // base scalar curvature and f1-scalars, all through the numeric engine
    const double R_B = scalar_curvature(views.block1, x) + scalar_curvature(views.block2, y);
    const Eigen::MatrixXd g1inv = views.block1.value(x).inverse();
    double laplacian = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        laplacian += g1inv(i, j) *
                     hessian_oracle(views.block1, fx.spec.f1(), fx.spec.alpha1(), xi1, x, i, j);
    double grad_sq = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        grad_sq += g1inv(i, j) * fx.spec.f1().d1(xi1) * fx.spec.alpha1()[i] *
                   fx.spec.f1().d1(xi1) * fx.spec.alpha1()[j];
    // f2 is constant, so the block-2 gradient contributes nothing.

    TraceParams tp;
    tp.lambda = fx.spec.lambda();
    tp.mu = 0.0;  // flat fiber
    tp.d = fx.spec.d();
    tp.n = fx.spec.n1() + fx.spec.n2();
    tp.R_B = R_B;
    tp.f = warping_function(fx.spec, p);
    tp.laplacian_f = laplacian;
    tp.grad_f_sq = grad_sq;
    const ResidualReport rep = warped_trace_identity(tp);
    CHECK(rep.max_abs < 1e-4);  // limited by the numeric curvature accuracy
  }
}

TEST_CASE("conformal block-2 Ricci: matched linear slope gives lambda * metric") {
  const double lambda = 1.5;
  const double slope = std::sqrt(lambda / 2.0);
  SpecBuilder b;
  b.lambda = lambda;
  b.phi2 = linear_profile(slope, 2.0);  // eps-norm(alpha2) = -1
  const WarpSpec spec = b.build();
  std::mt19937_64 rng(47);
  const ChartPoint p = spec.domain().sample(rng);
  const double phi2 = spec.phi2()(spec.xi2(p));
  for (int l = 0; l < 3; ++l) {
    const double expected = (3 - 1) * slope * slope * spec.eps2()[l] / (phi2 * phi2);
    CHECK(conformal_ricci_block2(spec, l, l, p) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(lambda * spec.eps2()[l] / (phi2 * phi2)).epsilon(1e-12));
  }
}

TEST_CASE("conformal Hessian of f1: special cases") {
  SpecBuilder b;
  b.f1 = constant_profile(2.0);
  b.phi1 = quadratic_profile(0.1, 0.0, 1.5);
  const WarpSpec c1 = b.build();
  std::mt19937_64 rng(53);
  const ChartPoint p = c1.domain().sample(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(conformal_hessian_f1(c1, i, j, p) == 0.0);

  SpecBuilder b2;
  b2.alpha1 = {0.5, -0.3, 0.8};
  b2.phi1 = constant_profile(1.0);
  b2.f1 = quadratic_profile(0.4, 0.1, 1.0);
  const WarpSpec c2 = b2.build();
  const ChartPoint p2 = c2.domain().sample(rng);
  const double ddf = c2.f1().d2(c2.xi1(p2));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(conformal_hessian_f1(c2, i, j, p2) ==
            doctest::Approx(ddf * b2.alpha1[static_cast<std::size_t>(i)] *
                            b2.alpha1[static_cast<std::size_t>(j)])
                .epsilon(1e-13));
}

TEST_CASE("conformal Hessian of f1 matches the numeric covariant Hessian") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 6; ++trial) {
    const WarpSpec spec = wvtest::random_catalog_spec(rng);
    const BlockViews views = block_views(spec);
    const ChartPoint p = spec.domain().sample(rng);
    const ChartPoint x = p.head(spec.n1());
    for (int i = 0; i < spec.n1(); ++i)
      for (int j = 0; j < spec.n1(); ++j) {
        const double oracle =
            hessian_oracle(views.block1, spec.f1(), spec.alpha1(), spec.xi1(p), x, i, j);
        CHECK(std::abs(conformal_hessian_f1(spec, i, j, p) - oracle) < 1e-6);
      }
  }
}

TEST_CASE("f2 Hessian constraint residual") {
  std::mt19937_64 rng(61);

  SpecBuilder constant_case;
  constant_case.f2 = constant_profile(1.0);
  constant_case.phi2 = quadratic_profile(0.1, -0.05, 1.6);
  const WarpSpec c = constant_case.build();
  const ChartPoint pc = c.domain().sample(rng);
  for (int l = 0; l < 3; ++l)
    for (int r = 0; r < 3; ++r) CHECK(hessian_f2_residual(c, l, r, pc) == 0.0);

  // f2 linear with constant phi2: flat-space Hessian of a linear function.
  SpecBuilder linear_flat;
  linear_flat.f2 = linear_profile(0.4, 1.0);
  linear_flat.phi2 = constant_profile(1.3);
  const WarpSpec lf = linear_flat.build();
  const ChartPoint plf = lf.domain().sample(rng);
  for (int l = 0; l < 3; ++l)
    for (int r = 0; r < 3; ++r) CHECK(hessian_f2_residual(lf, l, r, plf) == 0.0);

  // f2 linear with nonconstant phi2: generically nonzero, by direct substitution.
  SpecBuilder generic;
  generic.alpha2 = {0.6, -0.4, 0.5};
  generic.eps2 = {-1, 1, 1};
  generic.f2 = linear_profile(0.4, 1.0);
  generic.phi2 = linear_profile(0.3, 1.8);
  const WarpSpec g = generic.build();
  const ChartPoint pg = g.domain().sample(rng);
  const double phi2 = g.phi2()(g.xi2(pg));
  const double ratio = 0.3 * 0.4 / phi2;  // phi2' f2' / phi2
  const double e2 = g.enorm2();
  bool any_nonzero = false;
  for (int l = 0; l < 3; ++l) {
    for (int r = 0; r < 3; ++r) {
      const double al = generic.alpha2[static_cast<std::size_t>(l)];
      const double ar = generic.alpha2[static_cast<std::size_t>(r)];
      const double expected =
          (l == r) ? ratio * (2.0 * al * al - g.eps2()[l] * e2) : 2.0 * ratio * al * ar;
      CHECK(hessian_f2_residual(g, l, r, pg) == doctest::Approx(expected).epsilon(1e-12));
      if (std::abs(expected) > 1e-3) any_nonzero = true;
    }
  }
  CHECK(any_nonzero);
}

TEST_CASE("f2 Hessian residual matches the numeric covariant Hessian") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 4; ++trial) {
    SpecBuilder b;
    b.alpha2 = {0.7, 0.2, -0.4};
    b.eps2 = {trial % 2 ? -1 : 1, 1, 1};
    b.f2 = quadratic_profile(0.1, 0.2, 1.0);
    b.phi2 = exp_profile(0.3, 0.25, 1.1);
    const WarpSpec spec = b.build();
    const BlockViews views = block_views(spec);
    const ChartPoint p = spec.domain().sample(rng);
    const ChartPoint y = p.segment(spec.n1(), spec.n2());
    for (int l = 0; l < 3; ++l)
      for (int r = 0; r < 3; ++r) {
        const double oracle =
            hessian_oracle(views.block2, spec.f2(), spec.alpha2(), spec.xi2(p), y, l, r);
        CHECK(std::abs(hessian_f2_residual(spec, l, r, p) - oracle) < 1e-6);
      }
  }
}

TEST_CASE("closed-form Ricci: constant profiles give zero") {
  SpecBuilder b;
  b.f1 = constant_profile(0.5);
  b.f2 = constant_profile(0.5);
  const WarpSpec spec = b.build();
  std::mt19937_64 rng(71);
  const ChartPoint p = spec.domain().sample(rng);
  CHECK(ricci_closed_form(spec, p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("closed-form Ricci matches the numeric engine on random specs") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 8; ++trial) {
    const WarpSpec spec = wvtest::random_catalog_spec(rng);
    const MetricField g = build_metric(spec);
    const ChartPoint p = spec.domain().sample(rng);
    const Eigen::MatrixXd closed = ricci_closed_form(spec, p);
    const Eigen::MatrixXd numeric = ricci(g, p);
    const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
    CHECK((closed - numeric).cwiseAbs().maxCoeff() / scale < 1e-5);
  }
}

TEST_CASE("closed-form Ricci of the family solution equals lambda * g") {
  const auto fx = wvtest::make_family_fixture(3, 3, 1.0);
  const MetricField g = build_metric(fx.spec);
  std::mt19937_64 rng(79);
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = fx.spec.domain().sample(rng);
    const Eigen::MatrixXd closed = ricci_closed_form(fx.spec, p);
    const Eigen::MatrixXd target = fx.params.lambda * g.value(p);
    CHECK((closed - target).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("full condition residuals: flat spec and family solution") {
  SpecBuilder flat;
  flat.f1 = constant_profile(0.5);
  flat.f2 = constant_profile(0.5);
  const WarpSpec fs = flat.build();
  std::mt19937_64 rng(83);
  CHECK(einstein_condition_residuals(fs, fs.domain().sample(rng)).max_abs < 1e-15);

  const auto fx = wvtest::make_family_fixture(3, 3, 1.0);
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = fx.spec.domain().sample(rng);
    CHECK(einstein_condition_residuals(fx.spec, p).max_abs < 1e-8);
  }
}

TEST_CASE("perturbing phi1 is detected") {
  const auto fx = wvtest::make_family_fixture(3, 3, 1.0);
  WarpSpec::Config cfg{fx.spec.n1(),     fx.spec.n2(),  fx.spec.d(),
                       fx.spec.eps1(),   fx.spec.eps2(), fx.spec.alpha1(),
                       fx.spec.alpha2(), scale_profile(fx.spec.phi1(), 1.1),
                       fx.spec.f1(),     fx.spec.phi2(), fx.spec.f2(),
                       fx.spec.lambda(), fx.spec.domain()};
  const WarpSpec perturbed(std::move(cfg));
  std::mt19937_64 rng(89);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const ChartPoint p = perturbed.domain().sample(rng);
    worst = std::max(worst, einstein_condition_residuals(perturbed, p).max_abs);
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("condition residuals vanish iff the numeric Einstein residual does") {
  std::mt19937_64 rng(97);
  const auto fx = wvtest::make_family_fixture(3, 3, 1.0);
  {
    const MetricField g = build_metric(fx.spec);
    const ChartPoint p = fx.spec.domain().sample(rng);
    const double cond = einstein_condition_residuals(fx.spec, p).max_abs;
    const double ein = einstein_residual(g, fx.spec.lambda(), p).max_abs_residual /
                       g.value(p).cwiseAbs().maxCoeff();
    CHECK(cond < 1e-8);
    CHECK(ein < 1e-5);
  }
  {
    SpecBuilder nb;
    nb.phi1 = quadratic_profile(0.05, 0.1, 1.8);
    nb.f1 = linear_profile(0.3, 1.2);
    nb.f2 = constant_profile(0.5);
    nb.lambda = 0.4;
    const WarpSpec nonsol = nb.build();
    const MetricField g = build_metric(nonsol);
    const ChartPoint p = nonsol.domain().sample(rng);
    const double cond = einstein_condition_residuals(nonsol, p).max_abs;
    const double ein = einstein_residual(g, nonsol.lambda(), p).max_abs_residual /
                       g.value(p).cwiseAbs().maxCoeff();
    CHECK(cond > 1e-8);
    CHECK(ein > 1e-5);
  }
}

TEST_CASE("invariant conditions: direct substitution values") {
  InvariantConditionInputs in;
  in.variant = ReductionVariant::Special;
  in.n1 = 3;
  in.n2 = 3;
  in.lambda = 1.5;  // q = 3, m = 1
  in.phi1 = {1.0, 0.0, 0.0};   // beta = 1
  in.f1 = {1.0, 0.0, 0.0};     // gamma = 2, so f1 = gamma - 1 = 1
  in.phi2 = {1.0, 0.0, 0.0};
  const ResidualReport rep = invariant_condition_residuals(in);
  CHECK(rep.value_of("x_diag") == doctest::Approx(-3.0).epsilon(1e-14));   // -lambda*gamma
  CHECK(rep.value_of("fiber") == doctest::Approx(-6.0).epsilon(1e-14));    // -lambda*gamma^2
  CHECK(rep.value_of("x_offdiag") == 0.0);
  CHECK(rep.value_of("y_offdiag") == 0.0);

  InvariantConditionInputs bad = in;
  bad.f1 = {-2.0, 0.0, 0.0};  // f1 + 1 < 0
  CHECK_THROWS_AS(invariant_condition_residuals(bad), DomainError);
}

TEST_CASE("invariant conditions vanish along integrated trajectories") {
  const FamilyParams fp(3, 1.0, 3);
  const Trajectory traj = integrate_family(fp, FamilyState(0.0, 1.0, 2.0, 1.0), 0.8);
  const double slope = std::sqrt(fp.lambda / (fp.n2 - 1));
  for (std::size_t k = 0; k < traj.samples.size(); k += 7) {
    const TrajectorySample& s = traj.samples[k];
    const Velocities v = omega_velocities(s.omega, s.beta, s.gamma, fp);
    const Accelerations acc = family_accelerations(s.beta, s.gamma, v.beta_dot, v.gamma_dot, fp);
    InvariantConditionInputs in;
    in.variant = ReductionVariant::Special;
    in.n1 = fp.q;
    in.n2 = fp.n2;
    in.lambda = fp.lambda;
    in.phi1 = {s.beta, v.beta_dot, acc.beta_dd};
    in.f1 = {s.gamma - 1.0, v.gamma_dot, acc.gamma_dd};
    in.phi2 = {slope * 0.4 + 2.0, slope, 0.0};
    in.xi1 = s.t;
    in.xi2 = 0.4;
    const ResidualReport rep = invariant_condition_residuals(in);
    CHECK(rep.max_abs < 1e-8);
  }
}

TEST_CASE("reduction consistency ties full and invariant residuals together") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    SpecBuilder b;
    b.alpha1 = {0.8, -0.35, 0.45};
    b.alpha2 = {0.55, 0.25, -0.6};
    b.eps1 = {-1, 1, 1};
    b.eps2 = {1, -1, 1};
    b.phi1 = quadratic_profile(0.07, -0.12, 1.9);
    b.f1 = exp_profile(0.3, 0.2, 0.9);
    b.phi2 = quadratic_profile(0.05, 0.1, 1.7);
    b.f2 = constant_profile(0.8);
    b.lambda = 0.6;
    b.d = 2 + static_cast<int>(rng() % 3);
    const WarpSpec spec = b.build();
    const ChartPoint p = spec.domain().sample(rng);
    const ResidualReport full = einstein_condition_residuals(spec, p);
    const ResidualReport inv =
        invariant_condition_residuals(spec, spec.xi1(p), spec.xi2(p), ReductionVariant::General);

    const double phi1 = spec.phi1()(spec.xi1(p));
    const double phi2 = spec.phi2()(spec.xi2(p));
    const double ddphi2 = spec.phi2().d2(spec.xi2(p));
    const auto& a1 = spec.alpha1();
    const auto& a2 = spec.alpha2();

    auto close = [](double x, double y) {
      return std::abs(x - y) <= 1e-10 * std::max({1.0, std::abs(x), std::abs(y)});
    };

    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const std::string lab = "x_offdiag(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        CHECK(close(full.value_of(lab), a1[i] * a1[j] * inv.value_of("x_offdiag")));
      }
    for (int l = 0; l < 3; ++l)
      for (int r = l + 1; r < 3; ++r) {
        const std::string lab = "y_offdiag(" + std::to_string(l + 1) + "," + std::to_string(r + 1) + ")";
        CHECK(close(full.value_of(lab), (3 - 2) * a2[l] * a2[r] * inv.value_of("y_offdiag")));
      }
    for (int i = 0; i < 3; ++i) {
      const std::string lab = "x_diag(" + std::to_string(i + 1) + ")";
      const double expected = a1[i] * a1[i] * phi1 * inv.value_of("x_offdiag") +
                              spec.eps1()[i] * inv.value_of("x_diag");
      CHECK(close(full.value_of(lab), expected));
    }
    for (int l = 0; l < 3; ++l) {
      const std::string lab = "y_diag(" + std::to_string(l + 1) + ")";
      const double expected = phi2 * ddphi2 * ((3 - 2) * a2[l] * a2[l] + spec.eps2()[l] * spec.enorm2()) +
                              spec.eps2()[l] * inv.value_of("y_diag");
      CHECK(close(full.value_of(lab), expected));
    }
    CHECK(close(full.value_of("fiber"), inv.value_of("fiber")));
  }
}

TEST_CASE("y-block diagonal closed form uses the squared gradient") {
  SpecBuilder b;
  b.alpha2 = {0.6, 0.3, -0.5};
  b.eps2 = {-1, 1, 1};
  b.phi2 = linear_profile(0.35, 1.9);
  const WarpSpec spec = b.build();
  const MetricField g = build_metric(spec);
  std::mt19937_64 rng(103);
  const ChartPoint p = spec.domain().sample(rng);
  const ChartPoint y = p.segment(3, 3);
  const BlockViews views = block_views(spec);
  const Eigen::MatrixXd numeric = ricci(views.block2, y);

  const double phi2 = spec.phi2()(spec.xi2(p));
  const double dphi2 = spec.phi2().d1(spec.xi2(p));
  const double sum_eps_alpha = [&] {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += spec.eps2()[l] * b.alpha2[static_cast<std::size_t>(l)];
    return s;
  }();
  for (int l = 0; l < 3; ++l) {
    const double squared = conformal_ricci_block2(spec, l, l, p);
    // variant with the gradient entries unsquared
    const double unsquared = -(3 - 1) * spec.eps2()[l] * dphi2 * sum_eps_alpha / (phi2 * phi2);
    CHECK(std::abs(numeric(l, l) - squared) < 1e-6);
    CHECK(std::abs(numeric(l, l) - unsquared) > 1e-3);
  }
}
