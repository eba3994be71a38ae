#include "latlab/sublattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "latlab/dual.hpp"
#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/lll.hpp"
#include "latlab/minima.hpp"

namespace latlab {

namespace {

// Exact Gram determinant of coefficient rows relative to an integral basis,
// in unscaled units.
Int128 exactGram(const IntMatrix& intRows, const IntMatrix& coeffRows) {
  const int l = static_cast<int>(coeffRows.rows());
  const int n = static_cast<int>(intRows.cols());
  std::vector<std::vector<Int128>> v(l, std::vector<Int128>(n, 0));
  for (int a = 0; a < l; ++a)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) v[a][j] += static_cast<Int128>(coeffRows(a, i)) * intRows(i, j);
  IntMatrix g(l, l);
  for (int a = 0; a < l; ++a)
    for (int b = 0; b < l; ++b) {
      Int128 acc = 0;
      for (int j = 0; j < n; ++j) acc += v[a][j] * v[b][j];
      g(a, b) = narrow(acc);
    }
  return integerDeterminant(g);
}

long double realGram(const Matrix& emb, const IntMatrix& coeffRows) {
  const Eigen::MatrixXd v = coeffRows.cast<double>() * emb;
  const Eigen::MatrixXd g = v * v.transpose();
  return g.determinant();
}

// Squared determinant of a sublattice given by coefficient rows, in embedding units.
long double gramSq(const BasisMatrix& b, const IntMatrix& coeffRows) {
  if (b.integral()) {
    const long double s2 = static_cast<long double>(b.scale()) * b.scale();
    return static_cast<long double>(exactGram(b.integerRows(), coeffRows)) * std::pow(s2, coeffRows.rows());
  }
  return realGram(b.embedding(), coeffRows);
}

// Short LLL pass over sublattice generators given by coefficient rows.
IntMatrix reduceGenerators(const BasisMatrix& b, IntMatrix coeffRows) {
  const int l = static_cast<int>(coeffRows.rows());
  IntMatrix u = IntMatrix::Identity(l, l);
  if (b.integral()) {
    IntMatrix rows = coeffRows * b.integerRows();
    lllReduceRows(rows, u, {}, b.scale() * b.scale());
  } else {
    Matrix rows = coeffRows.cast<double>() * b.embedding();
    lllReduceRows(rows, u);
  }
  return u * coeffRows;
}

SublatticeRecord finish(const BasisMatrix& input, const ReducedLattice& lat, const IntMatrix& reducedCoeffRows,
                        const MinimaProfile& minima) {
  SublatticeRecord rec;
  rec.rank = static_cast<int>(reducedCoeffRows.rows());
  const IntMatrix gens = reduceGenerators(lat.reduced(), reducedCoeffRows);
  IntMatrix inputRows(rec.rank, input.dim());
  for (int a = 0; a < rec.rank; ++a) {
    inputRows.row(a) = lat.toInputCoeffs(gens.row(a));
    rec.generators.push_back(makePoint(input, inputRows.row(a)));
  }
  rec.detValue = std::sqrt(static_cast<double>(gramSq(lat.reduced(), gens)));
  rec.primitive = isPrimitive(inputRows);
  double prod = 1;
  for (int j = 0; j < rec.rank; ++j) prod *= minima.betas[j];
  rec.ratioToMinima = rec.detValue / prod;
  return rec;
}

}  // namespace

double gramDeterminant(const BasisMatrix& basis, const IntMatrix& coeffRows) {
  return static_cast<double>(gramSq(basis, coeffRows));
}

bool isPrimitive(const IntMatrix& coeffRows) {
  if (integerRank(coeffRows) != coeffRows.rows()) return false;
  return saturationIndex(coeffRows) == 1;
}

SublatticeRecord sigmaEll(const BasisMatrix& basis, int ell, const EnumerationOptions& options) {
  const int n = basis.dim();
  if (n > 5) throw UnsupportedDimension("sigmaEll supports n ≤ 5");
  if (ell < 1 || ell > n - 1) throw ConfigError("sigmaEll: ell must lie in [1, n-1]");
  ReducedLattice lat(basis, options);
  const MinimaProfile minima = successiveMinima(lat.reduced(), options);

  if (2 * ell > n) {
    // σ_ℓ(Λ) = σ_{n−ℓ}(Λ*): Δ ↦ Δ^⊥ ∩ Λ* is a determinant-preserving bijection
    // between primitive sublattices. With D = R^{-T}, ⟨xR, yD⟩ = x·yᵀ.
    const BasisMatrix dual = inverseTransposeBasis(lat.reduced());
    const SublatticeRecord dualRec = sigmaEll(dual, n - ell, options);
    IntMatrix y(n - ell, n);
    for (int a = 0; a < n - ell; ++a) y.row(a) = dualRec.generators[a].coeffs;
    return finish(basis, lat, integerKernel(y), minima);
  }

  // Candidate generators, in reduced coordinates. A minimal Δ has independent
  // vectors of norm ≤ μ_ℓ(Δ) ≤ (2^ℓ/V_ℓ)·σ_ℓ/∏_{i<ℓ}βᵢ ≤ (2^ℓ/V_ℓ)·β_ℓ.
  std::vector<IntVector> pts;
  if (ell == 1) {
    pts.push_back(minima.witnesses[0].coeffs);
  } else {
    const double radius = std::pow(2.0, ell) / unitBallVolume(ell) * minima.betas[ell - 1] * (1.0 + 1e-9);
    lat.forEach(radius, [&](const IntVector& x, double, Int128) {
      if (signCanonical(x) == x) pts.push_back(x);
    });
  }
  IntMatrix best;
  long double bestSq = -1;
  const int m = static_cast<int>(pts.size());
  std::vector<int> idx(ell);
  for (int i = 0; i < ell; ++i) idx[i] = i;
  IntMatrix c(ell, n);
  double combos = 0;
  while (ell <= m) {
    if (++combos > options.maxCount) throw ExplosionGuard("sigmaEll: too many candidate subsets");
    for (int a = 0; a < ell; ++a) c.row(a) = pts[idx[a]];
    if (integerRank(c) == ell) {
      const std::int64_t index = saturationIndex(c);
      const long double sq = gramSq(lat.reduced(), c) / (static_cast<long double>(index) * index);
      if (bestSq < 0 || sq < bestSq * (1.0L - 1e-12L)) {
        bestSq = sq;
        const ColumnEchelon ce = columnEchelon(c);
        best = ce.inverse.topRows(ell);
      }
    }
    int a = ell - 1;
    while (a >= 0 && idx[a] == m - ell + a) --a;
    if (a < 0) break;
    ++idx[a];
    for (int b = a + 1; b < ell; ++b) idx[b] = idx[b - 1] + 1;
  }
  if (bestSq < 0) throw NumericalRankLoss("sigmaEll: no independent subset found");
  return finish(basis, lat, best, minima);
}

std::int64_t countPrimitiveSublattices(const BasisMatrix& basis, int ell, double H,
                                       const EnumerationOptions& options) {
  const int n = basis.dim();
  if (n > 4) throw UnsupportedDimension("countPrimitiveSublattices supports n ≤ 4");
  if (ell < 1 || ell > 2 || ell > n - 1) throw UnsupportedDimension("countPrimitiveSublattices supports ℓ ≤ 2");
  ReducedLattice lat(basis, options);
  if (!(H > 0)) return 0;
  if (ell == 1) {
    std::int64_t count = 0;
    lat.forEach(H, [&](const IntVector& x, double, Int128) {
      if (contentGcd(x) == 1) ++count;
    });
    return count / 2;
  }
  // Every rank-2 sublattice of determinant d has a Lagrange-reduced basis with
  // β₁ ≤ ‖u₁‖ ≤ ‖u₂‖ and ‖u₁‖‖u₂‖ ≤ (2/√3)d.
  const double beta1 = shortestVectorLength(lat.reduced(), options);
  const double pairBound = 2.0 / std::sqrt(3.0) * H * (1.0 + 1e-9);
  std::vector<IntVector> pts;
  std::vector<double> len;
  lat.forEach(pairBound / beta1, [&](const IntVector& x, double, Int128) {
    if (signCanonical(x) == x) pts.push_back(x);
  });
  for (const auto& p : pts) len.push_back(std::sqrt(static_cast<double>(gramSq(lat.reduced(), IntMatrix(p)))));
  const long double hSq = static_cast<long double>(H) * H * (1.0L + 1e-12L);
  std::set<std::vector<std::int64_t>> seen;
  IntMatrix c(2, n);
  double pairs = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (len[i] * len[j] > pairBound) continue;
      if (++pairs > options.maxCount) throw ExplosionGuard("countPrimitiveSublattices: too many pairs");
      c.row(0) = pts[i];
      c.row(1) = pts[j];
      if (integerRank(c) != 2) continue;
      if (gramSq(lat.reduced(), c) > hSq) continue;
      if (saturationIndex(c) != 1) continue;
      const IntMatrix h = hermiteNormalForm(c);
      seen.emplace(h.data(), h.data() + h.size());
    }
  return static_cast<std::int64_t>(seen.size());
}

}  // namespace latlab
