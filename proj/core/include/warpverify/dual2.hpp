#pragma once

#include <cmath>

namespace warpverify {

// Hyper-dual scalar carrying two first-order seeds and the mixed second-order
// term: x = v + d1*e1 + d2*e2 + d12*e1*e2 with e1^2 = e2^2 = 0. Seeding two
// coordinates (or the same one twice) yields exact first and mixed second
// partial derivatives of any composite expression.
struct Dual2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d12 = 0.0;

  Dual2() = default;
  Dual2(double value) : v(value) {}  // NOLINT: implicit promotion intended
  Dual2(double value, double e1, double e2, double e12) : v(value), d1(e1), d2(e2), d12(e12) {}
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d12 + b.d12};
}
inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d12 - b.d12};
}
inline Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2, -a.d12}; }

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  return {a.v * b.v,
          a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + a.v * b.d2,
          a.d12 * b.v + a.v * b.d12 + a.d1 * b.d2 + a.d2 * b.d1};
}

// Composition with a scalar function given f(v), f'(v), f''(v).
inline Dual2 compose(double f, double fp, double fpp, const Dual2& x) {
  return {f, fp * x.d1, fp * x.d2, fp * x.d12 + fpp * x.d1 * x.d2};
}

inline Dual2 reciprocal(const Dual2& x) {
  const double inv = 1.0 / x.v;
  return compose(inv, -inv * inv, 2.0 * inv * inv * inv, x);
}
inline Dual2 operator/(const Dual2& a, const Dual2& b) { return a * reciprocal(b); }

inline Dual2 exp(const Dual2& x) {
  const double e = std::exp(x.v);
  return compose(e, e, e, x);
}
inline Dual2 sqrt(const Dual2& x) {
  const double s = std::sqrt(x.v);
  return compose(s, 0.5 / s, -0.25 / (s * s * s), x);
}
inline Dual2 square(const Dual2& x) { return x * x; }
inline double value_of(const Dual2& x) { return x.v; }
inline double value_of(double x) { return x; }

}  // namespace warpverify
