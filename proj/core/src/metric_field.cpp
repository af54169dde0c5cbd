#include "warpverify/metric_field.hpp"

#include <string>

namespace warpverify {

MetricField::MetricField(int dim, EvalFn eval, JetFn jet, DiffScheme scheme, double step)
    : dim_(dim), eval_(std::move(eval)), jet_(std::move(jet)), scheme_(scheme), step_(step) {
  if (dim_ < 1) throw ParameterError("MetricField: dim must be >= 1");
  if (!eval_) throw ParameterError("MetricField: eval must be callable");
  if (!(step_ > 0.0)) throw ParameterError("MetricField: step must be positive");
}

Eigen::MatrixXd MetricField::value(const ChartPoint& p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw DimensionError("MetricField::value: point has dim " + std::to_string(p.size()) +
                         ", metric has dim " + std::to_string(dim_));
  return eval_(p);
}

Jet2 MetricField::jet(const ChartPoint& p, int a, int b) const {
  if (!jet_)
    throw ParameterError("MetricField::jet: no AD jet available for this metric");
  if (a < 0 || a >= dim_ || b < 0 || b >= dim_)
    throw DimensionError("MetricField::jet: coordinate index out of range");
  return jet_(p, a, b);
}

MetricField MetricField::with_scheme(DiffScheme s) const {
  MetricField out = *this;
  out.scheme_ = s;
  return out;
}

MetricField MetricField::with_step(double h) const {
  if (!(h > 0.0)) throw ParameterError("MetricField: step must be positive");
  MetricField out = *this;
  out.step_ = h;
  return out;
}

}  // namespace warpverify
