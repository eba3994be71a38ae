#include "latlab/dual.hpp"

#include <cmath>

#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/lll.hpp"

namespace latlab {

namespace {

IntMatrix minorOf(const IntMatrix& m, int row, int col) {
  const int n = static_cast<int>(m.rows());
  IntMatrix out(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

}  // namespace

BasisMatrix inverseTransposeBasis(const BasisMatrix& basis) {
  const int n = basis.dim();
  if (basis.integral()) {
    const IntMatrix& b = basis.integerRows();
    const Int128 det = integerDeterminant(b);
    // (B⁻¹)ᵀ = cof(B)/det, cof(B)ᵢⱼ = (−1)^{i+j} det(minor_ij).
    Int128 wide[kMaxDim][kMaxDim];
    Int128 content = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Int128 c = integerDeterminant(minorOf(b, i, j));
        if ((i + j) % 2) c = -c;
        if (det < 0) c = -c;
        wide[i][j] = c;
        Int128 a = c < 0 ? -c : c;
        while (a != 0) {
          const Int128 r = content % a;
          content = a;
          a = r;
        }
      }
    IntMatrix cof(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cof(i, j) = narrow(wide[i][j] / content);
    const long double absDet = std::fabs(static_cast<long double>(det));
    const double scale = static_cast<double>(static_cast<long double>(content) / (absDet * basis.scale()));
    return BasisMatrix::trustedIntegral(std::move(cof), scale, basis.prime());
  }
  const Eigen::MatrixXd m = basis.embedding();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(n - 1) <= 0 || sv(0) / sv(n - 1) > 1e12)
    throw NumericalRankLoss("dual basis: condition number exceeds 1e12");
  Matrix inv = m.inverse().transpose();
  return BasisMatrix::trustedReal(std::move(inv));
}

BasisMatrix dualBasis(const BasisMatrix& basis) {
  if (basis.integral()) return inverseTransposeBasis(lllReduce(basis));
  return inverseTransposeBasis(basis);
}

bool unimodularChange(const BasisMatrix& a, const BasisMatrix& b, IntMatrix& change, double tol) {
  const int n = a.dim();
  if (b.dim() != n) return false;
  const Eigen::MatrixXd c = Eigen::MatrixXd(a.embedding()) * Eigen::MatrixXd(b.embedding()).inverse();
  IntMatrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = std::round(c(i, j));
      if (std::abs(c(i, j) - x) > tol * std::max(1.0, std::abs(x))) return false;
      if (std::abs(x) > 9e15) return false;
      r(i, j) = static_cast<std::int64_t>(x);
    }
  const Int128 det = integerDeterminant(r);
  if (det != 1 && det != -1) return false;
  change = r;
  return true;
}

bool sameLattice(const BasisMatrix& a, const BasisMatrix& b, double tol) {
  const BasisMatrix ra = lllReduce(a);
  const BasisMatrix rb = lllReduce(b);
  IntMatrix c;
  if (!unimodularChange(ra, rb, c, tol)) return false;
  return hermiteNormalForm(c) == IntMatrix::Identity(a.dim(), a.dim());
}

}  // namespace latlab
