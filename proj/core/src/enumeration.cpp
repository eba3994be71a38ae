#include "latlab/enumeration.hpp"

#include <algorithm>

namespace latlab {

namespace detail {

GramSchmidt gramSchmidt(const Matrix& rows) {
  GramSchmidt gs;
  const int m = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  gs.n = m;
  long double bstar[kMaxDim][kMaxDim];
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < n; ++j) bstar[k][j] = rows(k, j);
    for (int i = 0; i < k; ++i) {
      long double dot = 0;
      for (int j = 0; j < n; ++j) dot += bstar[k][j] * bstar[i][j];
      gs.mu[k][i] = dot / gs.norm[i];
      for (int j = 0; j < n; ++j) bstar[k][j] -= gs.mu[k][i] * bstar[i][j];
    }
    long double s = 0;
    for (int j = 0; j < n; ++j) s += bstar[k][j] * bstar[k][j];
    if (!(s > 0)) throw NumericalRankLoss("Gram-Schmidt norm vanished");
    gs.norm[k] = s;
  }
  return gs;
}

double predictedVisits(const GramSchmidt& gs, long double bound) {
  double count = 1;
  for (int i = 0; i < gs.n; ++i) count *= 2.0 * std::sqrt(static_cast<double>(bound / gs.norm[i])) + 1.0;
  return count;
}

}  // namespace detail

ReducedLattice::ReducedLattice(const BasisMatrix& input, const EnumerationOptions& options)
    : ReducedLattice(input, lllReduceWithTransform(input), options) {}

ReducedLattice::ReducedLattice(const BasisMatrix& input, Reduction reduction, const EnumerationOptions& options)
    : input_(input), reduction_(std::move(reduction)), options_(options) {
  gs_ = detail::gramSchmidt(reduction_.basis.rows());
}

Int128 ReducedLattice::exactNorm(const IntVector& x) const {
  return exactNormSq(reduced(), x);
}

std::vector<LatticePoint> enumerateShortVectors(const BasisMatrix& basis, double radius,
                                                const EnumerationOptions& options) {
  ReducedLattice lat(basis, options);
  std::vector<LatticePoint> out;
  lat.forEach(radius, [&](const IntVector& x, double, Int128) {
    out.push_back(makePoint(basis, lat.toInputCoeffs(x)));
  });
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.normSq != b.normSq) return a.normSq < b.normSq;
    return lexLess(a.coeffs, b.coeffs);
  });
  return out;
}

std::uint64_t countShortVectors(const BasisMatrix& basis, double radius, const EnumerationOptions& options) {
  ReducedLattice lat(basis, options);
  std::uint64_t count = 0;
  lat.forEach(radius, [&](const IntVector&, double, Int128) { ++count; });
  return count;
}

}  // namespace latlab
