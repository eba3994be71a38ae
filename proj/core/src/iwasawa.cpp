#include "latlab/iwasawa.hpp"

#include <cmath>

#include "latlab/errors.hpp"

namespace latlab {

IwasawaCoords iwasawaDecompose(const Matrix& g) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n) throw ConfigError("iwasawaDecompose: matrix must be square");
  const Eigen::MatrixXd m = g;
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det - 1.0) > 1e-6)
    throw NumericalRankLoss("iwasawaDecompose: det(g) must lie in 1 ± 1e-6");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  IwasawaCoords c;
  c.a.resize(n);
  for (int i = 0; i < n; ++i) {
    if (r(i, i) == 0.0) throw NumericalRankLoss("iwasawaDecompose: singular input");
    if (r(i, i) < 0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
    c.a[i] = r(i, i);
  }
  c.k = q;
  c.u = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.u(i, j) = r(i, j) / c.a[i];
  const Matrix back = composeKau(c.k, c.a, c.u);
  c.reconstructionError = (back - g).norm() / g.norm();
  if (!(c.reconstructionError <= 1e-9)) throw NumericalRankLoss("iwasawaDecompose: reconstruction failed");
  return c;
}

Matrix composeKau(const Matrix& k, const std::vector<double>& a, const Matrix& u) {
  const int n = static_cast<int>(a.size());
  Matrix au = u;
  for (int i = 0; i < n; ++i) au.row(i) *= a[i];
  return k * au;
}

BasisMatrix latticeOf(const Matrix& g) { return BasisMatrix::fromRows(g.transpose()); }

bool inSiegelSet(const IwasawaCoords& c) {
  const int n = static_cast<int>(c.a.size());
  for (int i = 0; i + 1 < n; ++i)
    if (c.a[i] / c.a[i + 1] > 2.0 + 1e-9) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(c.u(i, j)) > 1.0 + 1e-9) return false;
  return true;
}

bool inSiegelSet(const Matrix& g) { return inSiegelSet(iwasawaDecompose(g)); }

double haarDensity(const std::vector<double>& a) {
  double d = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) d *= a[i] / a[j];
  return d;
}

double piEll(const Matrix& g, int ell) {
  const IwasawaCoords c = iwasawaDecompose(g);
  if (ell < 1 || ell > static_cast<int>(c.a.size())) throw ConfigError("piEll: ell out of range");
  return c.a[ell - 1];
}

std::vector<double> bCoords(const std::vector<double>& a) {
  std::vector<double> b(a.size() - 1);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) b[i] = a[i] / a[i + 1];
  return b;
}

std::vector<double> aFromB(const std::vector<double>& b) {
  const int n = static_cast<int>(b.size()) + 1;
  std::vector<double> a(n);
  for (int j = 1; j <= n; ++j) {
    double logPow = 0;  // log(aⱼⁿ)
    for (int i = 1; i < n; ++i) logPow += (i < j ? -i : n - i) * std::log(b[i - 1]);
    a[j - 1] = std::exp(logPow / n);
  }
  return a;
}

double haarDensityFromB(const std::vector<double>& b) {
  const int n = static_cast<int>(b.size()) + 1;
  double d = 1.0;
  for (int i = 1; i < n; ++i) d *= std::pow(b[i - 1], i * (n - i));
  return d;
}

JacobianCheck jacobianAB(const std::vector<double>& b) {
  const int m = static_cast<int>(b.size());
  Eigen::MatrixXd jac(m, m);
  for (int i = 0; i < m; ++i) {
    const double h = 1e-5 * b[i];
    std::vector<double> plus = b, minus = b;
    plus[i] += h;
    minus[i] -= h;
    const auto ap = aFromB(plus);
    const auto am = aFromB(minus);
    for (int j = 0; j < m; ++j) jac(j, i) = (ap[j] - am[j]) / (2 * h);
  }
  JacobianCheck out;
  out.numeric = std::abs(jac.determinant());
  out.closedForm = 1.0 / ((m + 1) * aFromB(b)[0]);
  out.relativeError = std::abs(out.numeric - out.closedForm) / out.closedForm;
  return out;
}

}  // namespace latlab
