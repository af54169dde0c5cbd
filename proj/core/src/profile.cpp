#include "warpverify/profile.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "warpverify/errors.hpp"

namespace warpverify {

ProfileFunction::ProfileFunction(Fn eval, Fn d1, Fn d2, ProfileDesc desc)
    : eval_(std::move(eval)), d1_(std::move(d1)), d2_(std::move(d2)), desc_(std::move(desc)) {
  if (!eval_ || !d1_ || !d2_)
    throw ParameterError("ProfileFunction: eval, d1, d2 must all be callable");
}

namespace {

// Richardson-extrapolated central difference of fn at x.
double central_diff(const std::function<double(double)>& fn, double x, double h) {
  const auto d = [&](double step) { return (fn(x + step) - fn(x - step)) / (2.0 * step); };
  return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

}  // namespace

void ProfileFunction::validate(const Interval& working, int grid_points, double tol) const {
  if (grid_points < 3) throw ParameterError("ProfileFunction::validate: need >= 3 grid points");
  if (!(working.hi > working.lo))
    throw ParameterError("ProfileFunction::validate: empty working interval");
  // Stay inside the interval so differencing never queries beyond it.
  const double span = working.length();
  const double margin = 0.02 * span;
  double worst = 0.0;
  double worst_xi = working.lo;
  for (int k = 0; k < grid_points; ++k) {
    const double s = static_cast<double>(k) / (grid_points - 1);
    const double x = (working.lo + margin) + s * (span - 2.0 * margin);
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double fd1 = central_diff(eval_, x, h);
    const double fd2 = central_diff(d1_, x, h);
    const double scale1 = std::max(1.0, std::abs(d1_(x)));
    const double scale2 = std::max(1.0, std::abs(d2_(x)));
    const double e1 = std::abs(fd1 - d1_(x)) / scale1;
    const double e2 = std::abs(fd2 - d2_(x)) / scale2;
    const double e = std::max(e1, e2);
    if (!std::isfinite(e)) throw NumericError("ProfileFunction::validate: non-finite value");
    if (e > worst) {
      worst = e;
      worst_xi = x;
    }
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "ProfileFunction: analytic derivatives disagree with central differences "
       << "(max deviation " << worst << " at xi=" << worst_xi << ", tol " << tol << ")";
    throw ParameterError(os.str());
  }
}

ProfileFunction constant_profile(double c) {
  ProfileDesc d{"constant", {c}, "", ""};
  return ProfileFunction([c](double) { return c; }, [](double) { return 0.0; },
                         [](double) { return 0.0; }, std::move(d));
}

ProfileFunction linear_profile(double slope, double intercept) {
  ProfileDesc d{"linear", {slope, intercept}, "", ""};
  return ProfileFunction([=](double x) { return slope * x + intercept; },
                         [=](double) { return slope; }, [](double) { return 0.0; }, std::move(d));
}

ProfileFunction quadratic_profile(double a, double b, double c) {
  ProfileDesc d{"quadratic", {a, b, c}, "", ""};
  return ProfileFunction([=](double x) { return (a * x + b) * x + c; },
                         [=](double x) { return 2.0 * a * x + b; },
                         [=](double) { return 2.0 * a; }, std::move(d));
}

ProfileFunction exp_profile(double a, double b, double c) {
  ProfileDesc d{"exp", {a, b, c}, "", ""};
  return ProfileFunction([=](double x) { return a * std::exp(b * x) + c; },
                         [=](double x) { return a * b * std::exp(b * x); },
                         [=](double x) { return a * b * b * std::exp(b * x); }, std::move(d));
}

namespace {

struct HermiteData {
  std::vector<double> t, v, d1, d2;

  int interval_of(double x) const {
    if (x < t.front() || x > t.back()) {
      std::ostringstream os;
      os << "hermite profile queried at xi=" << x << " outside [" << t.front() << ", "
         << t.back() << "]";
      throw DomainError(os.str());
    }
    auto it = std::upper_bound(t.begin(), t.end(), x);
    int i = static_cast<int>(it - t.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(t.size()) - 2);
  }

  // order: 0 value, 1 first, 2 second derivative
  double eval(double x, int order) const {
    const int i = interval_of(x);
    const double h = t[i + 1] - t[i];
    const double s = (x - t[i]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    // Quintic Hermite basis matched to (value, d1, d2) at both endpoints.
    double A0, A1, A2, B0, B1, B2;
    switch (order) {
      case 0:
        A0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        A1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        A2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        B0 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        B1 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        B2 = 0.5 * s3 - s4 + 0.5 * s5;
        break;
      case 1:
        A0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
        A1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
        A2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
        B0 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
        B1 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
        B2 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;
        break;
      default:
        A0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
        A1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
        A2 = 1.0 - 9.0 * s + 18.0 * s2 - 10.0 * s3;
        B0 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
        B1 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
        B2 = 3.0 * s - 12.0 * s2 + 10.0 * s3;
        break;
    }
    const double value = v[i] * A0 + h * d1[i] * A1 + h * h * d2[i] * A2 + v[i + 1] * B0 +
                         h * d1[i + 1] * B1 + h * h * d2[i + 1] * B2;
    const double scale = (order == 0) ? 1.0 : (order == 1 ? 1.0 / h : 1.0 / (h * h));
    return value * scale;
  }
};

}  // namespace

ProfileFunction hermite_quintic_profile(std::vector<double> knots, std::vector<double> values,
                                        std::vector<double> deriv1, std::vector<double> deriv2,
                                        ProfileDesc desc) {
  const std::size_t n = knots.size();
  if (n < 2) throw ParameterError("hermite profile: need >= 2 knots");
  if (values.size() != n || deriv1.size() != n || deriv2.size() != n)
    throw ParameterError("hermite profile: knots/values/derivatives length mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(knots[i + 1] > knots[i]))
      throw ParameterError("hermite profile: knots must be strictly increasing");
  auto data = std::make_shared<HermiteData>(
      HermiteData{std::move(knots), std::move(values), std::move(deriv1), std::move(deriv2)});
  if (desc.kind.empty() || desc.kind == "custom") desc.kind = "trajectory";
  return ProfileFunction([data](double x) { return data->eval(x, 0); },
                         [data](double x) { return data->eval(x, 1); },
                         [data](double x) { return data->eval(x, 2); }, std::move(desc));
}

ProfileFunction scale_profile(const ProfileFunction& p, double factor) {
  if (!std::isfinite(factor) || factor == 0.0)
    throw ParameterError("scale_profile: factor must be finite and nonzero");
  return ProfileFunction([p, factor](double x) { return factor * p(x); },
                         [p, factor](double x) { return factor * p.d1(x); },
                         [p, factor](double x) { return factor * p.d2(x); });
}

}  // namespace warpverify
