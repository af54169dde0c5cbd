#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "warpverify/dual2.hpp"
#include "warpverify/errors.hpp"
#include "warpverify/types.hpp"

namespace warpverify {

enum class DiffScheme {
  CentralRichardson,  // nested central differences, one Richardson level
  ForwardAD           // exact jets from second-order forward-mode AD
};

/// Metric value and its exact derivatives along coordinates a and b.
struct Jet2 {
  Eigen::MatrixXd value;
  Eigen::MatrixXd d_a;
  Eigen::MatrixXd d_b;
  Eigen::MatrixXd d_ab;
};

/// A smooth symmetric metric on a chart, evaluable at any point, optionally
/// with exact coordinate jets for the AD differentiation scheme. The
/// differencing step is scaled per coordinate as step*max(1, |p_i|).
class MetricField {
 public:
  using EvalFn = std::function<Eigen::MatrixXd(const ChartPoint&)>;
  using JetFn = std::function<Jet2(const ChartPoint&, int, int)>;

  MetricField(int dim, EvalFn eval, JetFn jet = nullptr,
              DiffScheme scheme = DiffScheme::CentralRichardson, double step = 1e-3);

  int dim() const { return dim_; }
  Eigen::MatrixXd value(const ChartPoint& p) const;

  bool has_jet() const { return static_cast<bool>(jet_); }
  Jet2 jet(const ChartPoint& p, int a, int b) const;

  DiffScheme scheme() const { return scheme_; }
  double step() const { return step_; }
  MetricField with_scheme(DiffScheme s) const;
  MetricField with_step(double h) const;

 private:
  int dim_;
  EvalFn eval_;
  JetFn jet_;
  DiffScheme scheme_;
  double step_;
};

namespace detail {

template <class F>
MetricField::JetFn make_jet_fn(int dim, F f) {
  return [dim, f](const ChartPoint& p, int a, int b) {
    std::vector<Dual2> x(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = Dual2(p[i]);
    x[static_cast<std::size_t>(a)].d1 = 1.0;
    x[static_cast<std::size_t>(b)].d2 = 1.0;
    std::vector<Dual2> g;
    f(x, g);
    if (static_cast<int>(g.size()) != dim * dim)
      throw DimensionError("metric functor returned wrong number of entries");
    Jet2 out;
    out.value.resize(dim, dim);
    out.d_a.resize(dim, dim);
    out.d_b.resize(dim, dim);
    out.d_ab.resize(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const Dual2& e = g[static_cast<std::size_t>(i * dim + j)];
        out.value(i, j) = e.v;
        out.d_a(i, j) = e.d1;
        out.d_b(i, j) = e.d2;
        out.d_ab(i, j) = e.d12;
      }
    return out;
  };
}

}  // namespace detail

/// Build a MetricField from a generic functor
///   template <class S> void operator()(const std::vector<S>& x, std::vector<S>& g)
/// filling a dim*dim row-major symmetric matrix; S is double or Dual2, so the
/// same body provides both the value and the AD jets.
template <class F>
MetricField make_metric_field(int dim, F f, DiffScheme scheme = DiffScheme::CentralRichardson,
                              double step = 1e-3) {
  auto eval = [dim, f](const ChartPoint& p) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) x[static_cast<std::size_t>(i)] = p[i];
    std::vector<double> g;
    f(x, g);
    if (static_cast<int>(g.size()) != dim * dim)
      throw DimensionError("metric functor returned wrong number of entries");
    Eigen::MatrixXd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = g[static_cast<std::size_t>(i * dim + j)];
    return m;
  };
  return MetricField(dim, std::move(eval), detail::make_jet_fn(dim, f), scheme, step);
}

/// Same as make_metric_field for diagonal metrics; the functor fills the dim
/// diagonal entries.
template <class F>
MetricField make_diagonal_metric(int dim, F diag, DiffScheme scheme = DiffScheme::CentralRichardson,
                                 double step = 1e-3) {
  auto full = [dim, diag](const auto& x, auto& g) {
    using S = std::decay_t<decltype(x[0])>;
    std::vector<S> d;
    diag(x, d);
    g.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), S(0.0));
    for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i * dim + i)] = d[static_cast<std::size_t>(i)];
  };
  return make_metric_field(dim, full, scheme, step);
}

}  // namespace warpverify
