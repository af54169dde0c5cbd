#include "warpverify/curvature.hpp"

#include <cmath>
#include <sstream>

#include "warpverify/errors.hpp"

namespace warpverify {

namespace {

constexpr double kDetFloor = 1e-12;

std::string point_str(const ChartPoint& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

// Value + inverse with the determinant guard.
struct MetricAt {
  Eigen::MatrixXd g;
  Eigen::MatrixXd ginv;
};

MetricAt metric_at(const MetricField& field, const ChartPoint& p) {
  MetricAt m;
  m.g = field.value(p);
  if (!m.g.allFinite())
    throw NumericError("metric has non-finite entries at " + point_str(p));
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m.g);
  const double det = lu.determinant();
  if (!std::isfinite(det) || std::abs(det) < kDetFloor) {
    std::ostringstream os;
    os << "singular metric at " << point_str(p) << " (det=" << det << ")";
    throw SingularityError(os.str(), det);
  }
  m.ginv = lu.inverse();
  return m;
}

double step_for(const MetricField& field, const ChartPoint& p, int dir) {
  return field.step() * std::max(1.0, std::abs(p[dir]));
}

// d/dx_dir of the metric by Richardson-extrapolated central differences.
Eigen::MatrixXd diff_metric_fd(const MetricField& field, const ChartPoint& p, int dir) {
  const double h = step_for(field, p, dir);
  ChartPoint q = p;
  auto central = [&](double step) {
    q[dir] = p[dir] + step;
    Eigen::MatrixXd plus = metric_at(field, q).g;
    q[dir] = p[dir] - step;
    Eigen::MatrixXd minus = metric_at(field, q).g;
    q[dir] = p[dir];
    return ((plus - minus) / (2.0 * step)).eval();
  };
  const Eigen::MatrixXd d_h = central(h);
  const Eigen::MatrixXd d_h2 = central(h / 2.0);
  return (4.0 * d_h2 - d_h) / 3.0;
}

Eigen::MatrixXd diff_metric(const MetricField& field, const ChartPoint& p, int dir) {
  if (field.scheme() == DiffScheme::ForwardAD) {
    if (!field.has_jet())
      throw ParameterError("ForwardAD scheme requested but the metric has no jet evaluator");
    return field.jet(p, dir, dir).d_a;
  }
  return diff_metric_fd(field, p, dir);
}

ChristoffelSymbols christoffel_from(const Eigen::MatrixXd& ginv,
                                    const std::vector<Eigen::MatrixXd>& dg, int n) {
  ChristoffelSymbols gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) +
                             dg[static_cast<std::size_t>(j)](i, l) -
                             dg[static_cast<std::size_t>(l)](i, j));
        gamma.at(k, i, j) = 0.5 * s;
        gamma.at(k, j, i) = 0.5 * s;
      }
  return gamma;
}

// Shared quadratic part Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj and the
// derivative contraction, given Gamma at p and dGamma[m] = d_m Gamma.
Eigen::MatrixXd assemble_ricci(const ChristoffelSymbols& gamma,
                               const std::vector<ChristoffelSymbols>& dgamma, int n) {
  Eigen::MatrixXd ric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += dgamma[static_cast<std::size_t>(k)](k, i, j);
        s -= dgamma[static_cast<std::size_t>(i)](k, k, j);
        for (int l = 0; l < n; ++l)
          s += gamma(k, k, l) * gamma(l, i, j) - gamma(k, i, l) * gamma(l, k, j);
      }
      ric(i, j) = s;
    }
  return ((ric + ric.transpose()) / 2.0).eval();
}

Eigen::MatrixXd ricci_fd(const MetricField& field, const ChartPoint& p) {
  const int n = field.dim();
  const ChristoffelSymbols gamma = christoffel(field, p);
  std::vector<ChristoffelSymbols> dgamma;
  dgamma.reserve(static_cast<std::size_t>(n));
  ChartPoint q = p;
  for (int m = 0; m < n; ++m) {
    const double h = step_for(field, p, m);
    auto central = [&](double step) {
      q[m] = p[m] + step;
      ChristoffelSymbols plus = christoffel(field, q);
      q[m] = p[m] - step;
      ChristoffelSymbols minus = christoffel(field, q);
      q[m] = p[m];
      ChristoffelSymbols d(n);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            d.at(k, i, j) = (plus(k, i, j) - minus(k, i, j)) / (2.0 * step);
      return d;
    };
    ChristoffelSymbols d_h = central(h);
    ChristoffelSymbols d_h2 = central(h / 2.0);
    ChristoffelSymbols d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d.at(k, i, j) = (4.0 * d_h2(k, i, j) - d_h(k, i, j)) / 3.0;
    dgamma.push_back(std::move(d));
  }
  return assemble_ricci(gamma, dgamma, n);
}

Eigen::MatrixXd ricci_ad(const MetricField& field, const ChartPoint& p) {
  const int n = field.dim();
  if (!field.has_jet())
    throw ParameterError("ForwardAD scheme requested but the metric has no jet evaluator");
  const MetricAt m = metric_at(field, p);
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n));
  std::vector<std::vector<Eigen::MatrixXd>> ddg(
      static_cast<std::size_t>(n), std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Jet2 j = field.jet(p, a, b);
      if (b == a) dg[static_cast<std::size_t>(a)] = j.d_a;
      ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = j.d_ab;
      ddg[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = j.d_ab;
    }

  const ChristoffelSymbols gamma = christoffel_from(m.ginv, dg, n);

  // d_m g^{kl} = -(g^-1 d_m g g^-1)^{kl}
  std::vector<Eigen::MatrixXd> dginv(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    dginv[static_cast<std::size_t>(a)] =
        (-m.ginv * dg[static_cast<std::size_t>(a)] * m.ginv).eval();

  std::vector<ChristoffelSymbols> dgamma;
  dgamma.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    ChristoffelSymbols d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double bracket = dg[static_cast<std::size_t>(i)](j, l) +
                                   dg[static_cast<std::size_t>(j)](i, l) -
                                   dg[static_cast<std::size_t>(l)](i, j);
            const double dbracket =
                ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)](j, l) +
                ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)](i, l) -
                ddg[static_cast<std::size_t>(a)][static_cast<std::size_t>(l)](i, j);
            s += dginv[static_cast<std::size_t>(a)](k, l) * bracket + m.ginv(k, l) * dbracket;
          }
          d.at(k, i, j) = 0.5 * s;
          d.at(k, j, i) = 0.5 * s;
        }
    dgamma.push_back(std::move(d));
  }
  return assemble_ricci(gamma, dgamma, n);
}

}  // namespace

ChristoffelSymbols christoffel(const MetricField& field, const ChartPoint& p) {
  const int n = field.dim();
  const MetricAt m = metric_at(field, p);
  std::vector<Eigen::MatrixXd> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int dir = 0; dir < n; ++dir) dg.push_back(diff_metric(field, p, dir));
  return christoffel_from(m.ginv, dg, n);
}

Eigen::MatrixXd ricci(const MetricField& field, const ChartPoint& p) {
  Eigen::MatrixXd ric = (field.scheme() == DiffScheme::ForwardAD) ? ricci_ad(field, p)
                                                                  : ricci_fd(field, p);
  if (!ric.allFinite())
    throw NumericError("ricci: non-finite derivative at " + point_str(p));
  return ric;
}

double scalar_curvature(const MetricField& field, const ChartPoint& p) {
  const MetricAt m = metric_at(field, p);
  const Eigen::MatrixXd ric = ricci(field, p);
  return (m.ginv * ric).trace();
}

CurvatureReport einstein_residual(const MetricField& field, double lambda, const ChartPoint& p) {
  CurvatureReport rep;
  rep.point = p;
  const MetricAt m = metric_at(field, p);
  rep.ricci = ricci(field, p);
  rep.scalar = (m.ginv * rep.ricci).trace();
  rep.einstein_residual = rep.ricci - lambda * m.g;
  rep.max_abs_residual = rep.einstein_residual.cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace warpverify
