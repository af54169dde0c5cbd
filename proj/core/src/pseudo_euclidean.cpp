#include "warpverify/pseudo_euclidean.hpp"

#include <cmath>
#include <string>

#include "warpverify/errors.hpp"

namespace warpverify {

Signature::Signature(std::vector<int> eps) : eps_(std::move(eps)) {
  if (eps_.empty()) throw ParameterError("Signature: must have length >= 1");
  for (int e : eps_) {
    if (e != 1 && e != -1)
      throw ParameterError("Signature: entries must be +1 or -1, got " + std::to_string(e));
  }
}

Signature Signature::euclidean(int n) { return Signature(std::vector<int>(n, 1)); }

Signature Signature::lorentz(int n) {
  std::vector<int> e(static_cast<std::size_t>(n), 1);
  if (n < 1) throw ParameterError("Signature: must have length >= 1");
  e[0] = -1;
  return Signature(std::move(e));
}

DirectionVector::DirectionVector(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw ParameterError("DirectionVector: must have length >= 1");
  bool any_nonzero = false;
  for (double a : alpha_) {
    if (!std::isfinite(a)) throw ParameterError("DirectionVector: entries must be finite");
    if (a != 0.0) any_nonzero = true;
  }
  if (!any_nonzero) throw ParameterError("DirectionVector: must not be identically zero");
}

double eps_norm(const DirectionVector& alpha, const Signature& eps) {
  if (alpha.dim() != eps.dim())
    throw DimensionError("eps_norm: direction has dim " + std::to_string(alpha.dim()) +
                         " but signature has dim " + std::to_string(eps.dim()));
  double s = 0.0;
  for (int i = 0; i < alpha.dim(); ++i) s += eps[i] * alpha[i] * alpha[i];
  return s;
}

double xi(const DirectionVector& alpha, const ChartPoint& block_point) {
  if (alpha.dim() != static_cast<int>(block_point.size()))
    throw DimensionError("xi: direction has dim " + std::to_string(alpha.dim()) +
                         " but point has dim " + std::to_string(block_point.size()));
  double s = 0.0;
  for (int i = 0; i < alpha.dim(); ++i) s += alpha[i] * block_point[i];
  return s;
}

DirectionVector normalize_direction(const DirectionVector& alpha, const Signature& eps) {
  const double e = eps_norm(alpha, eps);
  if (!(e < 0.0))
    throw NotNormalizableError(
        "normalize_direction: eps-norm is " + std::to_string(e) +
        " >= 0 (null or spacelike direction); only eps-norm -1 is supported");
  const double scale = 1.0 / std::sqrt(-e);
  std::vector<double> out = alpha.entries();
  for (double& a : out) a *= scale;
  return DirectionVector(std::move(out));
}

}  // namespace warpverify
