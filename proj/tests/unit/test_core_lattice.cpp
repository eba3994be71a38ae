#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "latlab/dual.hpp"
#include "latlab/enumeration.hpp"
#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/lll.hpp"
#include "latlab/minima.hpp"
#include "latlab/sublattice.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

BasisMatrix diagBasis(std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return BasisMatrix::fromRows(m);
}

std::set<std::vector<std::int64_t>> asSet(const std::vector<IntVector>& v) {
  std::set<std::vector<std::int64_t>> s;
  for (const auto& x : v) s.emplace(x.data(), x.data() + x.size());
  return s;
}

std::set<std::vector<std::int64_t>> asSet(const std::vector<LatticePoint>& v) {
  std::set<std::vector<std::int64_t>> s;
  for (const auto& p : v) s.emplace(p.coeffs.data(), p.coeffs.data() + p.coeffs.size());
  return s;
}

bool lovaszReduced(const BasisMatrix& b, double delta) {
  const auto gs = detail::gramSchmidt(b.embedding());
  for (int k = 1; k < gs.n; ++k) {
    for (int j = 0; j < k; ++j)
      if (std::fabs(static_cast<double>(gs.mu[k][j])) > 0.5 + 1e-9) return false;
    const long double m = gs.mu[k][k - 1];
    if (gs.norm[k] < (delta - m * m) * gs.norm[k - 1] * (1 - 1e-12)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("basis construction and JSON round trip") {
  const BasisMatrix id = BasisMatrix::identity(3);
  CHECK(id.integral());
  CHECK(id.scale() == 1.0);
  CHECK(id.determinant() == doctest::Approx(1.0));

  const BasisMatrix h = oracle::heckeBasis(5, {2, 3});
  CHECK(integerDeterminant(h.integerRows()) == 5);
  CHECK(h.scale() == doctest::Approx(std::pow(5.0, -1.0 / 3)));
  const BasisMatrix h2 = basisFromJson(basisToJson(h));
  CHECK(h2.integerRows() == h.integerRows());
  CHECK(h2.scale() == h.scale());
  CHECK(h2.prime() == std::optional<std::int64_t>(5));

  std::mt19937_64 rng(5);
  const BasisMatrix r = oracle::randomReal(rng, 4);
  const BasisMatrix r2 = basisFromJson(basisToJson(r));
  CHECK(r2.embedding() == r.embedding());

  Matrix big = Matrix::Identity(3, 3) * 2.0;
  CHECK(std::abs(BasisMatrix::fromRows(big).determinant() - 1.0) < 1e-12);
  CHECK_THROWS_AS(BasisMatrix::fromRows(Matrix::Identity(2, 2)), UnsupportedDimension);
  Matrix singular = Matrix::Identity(3, 3);
  singular.row(2) = singular.row(1);
  CHECK_THROWS_AS(BasisMatrix::fromRows(singular), NumericalRankLoss);
  CHECK_THROWS_AS(basisFromJson("{\"dim\":3}"), FormatError);
}

TEST_CASE("lattice points carry consistent embeddings") {
  const BasisMatrix h = oracle::heckeBasis(101, {17, 44});
  IntVector c(3);
  c << 1, -2, 3;
  const LatticePoint p = makePoint(h, c);
  CHECK((p.embedding - c.cast<double>() * h.embedding()).norm() < 1e-12);
  CHECK(p.normSq == doctest::Approx(p.embedding.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("integer utilities") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> u(-9, 9);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix c(2, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) c(i, j) = u(rng);
    if (integerRank(c) < 2) continue;
    const ColumnEchelon ce = columnEchelon(c);
    IntMatrix hz = IntMatrix::Zero(2, 4);
    hz.leftCols(2) = ce.h;
    CHECK(hz * ce.inverse == c);
    CHECK(c * ce.transform == hz);
    CHECK(ce.transform * ce.inverse == IntMatrix::Identity(4, 4));
    const IntMatrix k = integerKernel(c);
    CHECK(k.rows() == 2);
    CHECK((c * k.transpose()).isZero());
    // HNF is a canonical form: invariant under unimodular row operations.
    IntMatrix mix(2, 2);
    mix << 3, 1, 2, 1;
    CHECK(hermiteNormalForm(mix * c) == hermiteNormalForm(c));
  }
  IntVector v(3);
  v << 6, -10, 15;
  const IntMatrix w = unimodularCompletion(v);
  CHECK(w.row(0) == v);
  CHECK((integerDeterminant(w) == 1 || integerDeterminant(w) == -1));
  CHECK(primitiveDirection(IntVector(-2 * v)) == v);
}

TEST_CASE("lllReduce") {
  const BasisMatrix id = BasisMatrix::identity(3);
  CHECK(lllReduce(id, 0.99).integerRows() == IntMatrix::Identity(3, 3));

  IntMatrix m(3, 3);
  m << 1, 0, 0, 10, 1, 0, 0, 0, 1;
  const BasisMatrix b = BasisMatrix::fromIntegerRows(m);
  const Reduction r = lllReduceWithTransform(b);
  double maxNorm = 0;
  for (int i = 0; i < 3; ++i) maxNorm = std::max(maxNorm, r.basis.embedding().row(i).norm());
  CHECK(maxNorm <= 2.0);
  IntMatrix change;
  CHECK(unimodularChange(r.basis, b, change));
  CHECK(std::abs(static_cast<long long>(integerDeterminant(change))) == 1);
  CHECK(r.transform * b.integerRows() == r.basis.integerRows());

  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const int n = 3 + t % 3;
    const BasisMatrix h = oracle::randomHecke(rng, n, 1000003);
    const Reduction rh = lllReduceWithTransform(h);
    CHECK(rh.transform * h.integerRows() == rh.basis.integerRows());
    CHECK(lovaszReduced(rh.basis, 0.99));
    CHECK(sameLattice(rh.basis, h));
    const BasisMatrix x = oracle::randomReal(rng, n);
    const BasisMatrix rx = lllReduce(x);
    CHECK(lovaszReduced(rx, 0.99));
    CHECK(sameLattice(rx, x));
    CHECK(std::abs(std::abs(rx.determinant()) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(lllReduce(id, 1.5), ConfigError);
}

TEST_CASE("enumerateShortVectors fixtures") {
  const BasisMatrix z3 = BasisMatrix::identity(3);
  const auto pts = enumerateShortVectors(z3, 1.5);
  CHECK(pts.size() == 18);
  int unit = 0, diag = 0;
  for (const auto& p : pts) {
    if (p.normSq == 1.0) ++unit;
    if (p.normSq == 2.0) ++diag;
  }
  CHECK(unit == 6);
  CHECK(diag == 12);
  CHECK(asSet(pts) == asSet(oracle::points(z3, 1.5)));
  CHECK(enumerateShortVectors(z3, 0.5).empty());
  CHECK(enumerateShortVectors(z3, 1.0).size() == 6);

  const BasisMatrix d = diagBasis({0.5, 1.0, 2.0});
  const auto dp = enumerateShortVectors(d, 1.1);
  REQUIRE(dp.size() == 6);
  std::set<std::vector<std::int64_t>> expect = {{1, 0, 0}, {-1, 0, 0}, {2, 0, 0}, {-2, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  CHECK(asSet(dp) == expect);
}

TEST_CASE("enumeration agrees with the brute-force box oracle") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 2;
    const BasisMatrix b = (t % 2) ? oracle::randomHecke(rng, n, 997) : oracle::randomReal(rng, n);
    const double r = 0.8 + 0.05 * t;
    CHECK(asSet(enumerateShortVectors(b, r)) == asSet(oracle::points(b, r)));
  }
  EnumerationOptions tight;
  tight.maxCount = 100;
  CHECK_THROWS_AS(enumerateShortVectors(BasisMatrix::identity(3), 10.0, tight), ExplosionGuard);
}

TEST_CASE("successiveMinima fixtures") {
  for (int n = 3; n <= 5; ++n) {
    const MinimaProfile m = successiveMinima(BasisMatrix::identity(n));
    for (double b : m.betas) CHECK(b == 1.0);
    for (const auto& w : m.witnesses) CHECK(w.coeffs.cwiseAbs().sum() == 1);
  }
  const MinimaProfile d = successiveMinima(diagBasis({0.5, 1.0, 2.0}));
  CHECK(d.betas[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d.betas[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.betas[2] == doctest::Approx(2.0).epsilon(1e-12));

  const BasisMatrix h = oracle::heckeBasis(5, {2, 3});
  const MinimaProfile hm = successiveMinima(h);
  const auto expect = oracle::minima(h);
  for (int i = 0; i < 3; ++i) CHECK(hm.betas[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  // Integer minima of rows (5,0,0),(2,1,0),(3,0,1): squared norms 2, 3, 5.
  const double s = std::pow(5.0, -1.0 / 3);
  CHECK(hm.betas[0] == doctest::Approx(std::sqrt(2.0) * s).epsilon(1e-12));
  CHECK(hm.betas[1] == doctest::Approx(std::sqrt(3.0) * s).epsilon(1e-12));
  CHECK(hm.betas[2] == doctest::Approx(std::sqrt(5.0) * s).epsilon(1e-12));
}

TEST_CASE("successiveMinima properties") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 60; ++t) {
    const int n = 3 + t % 3;
    const BasisMatrix b = (t % 2) ? oracle::randomHecke(rng, n, 1000003) : oracle::randomReal(rng, n);
    const MinimaProfile m = successiveMinima(b);
    REQUIRE(static_cast<int>(m.betas.size()) == n);
    IntMatrix w(n, n);
    double prod = 1;
    for (int i = 0; i < n; ++i) {
      if (i) CHECK(m.betas[i] >= m.betas[i - 1]);
      CHECK(std::sqrt(m.witnesses[i].normSq) == doctest::Approx(m.betas[i]).epsilon(1e-12));
      w.row(i) = m.witnesses[i].coeffs;
      prod *= m.betas[i];
    }
    CHECK(integerRank(w) == n);
    const auto bracket = minkowskiProductBracket(n);
    CHECK(prod >= bracket.lower);
    CHECK(prod <= bracket.upper);
    if (n <= 4) {
      const auto oracleBetas = oracle::minima(b);
      for (int i = 0; i < n; ++i) CHECK(m.betas[i] == doctest::Approx(oracleBetas[i]).epsilon(1e-9));
    }
    // Enumeration–minima consistency.
    const double b1 = m.betas[0];
    CHECK(enumerateShortVectors(b, b1 * (1 - 1e-9)).empty());
    CHECK(!enumerateShortVectors(b, b1).empty());
    // Reduction invariance.
    const MinimaProfile r = successiveMinima(lllReduce(b));
    for (int i = 0; i < n; ++i) {
      if (b.integral())
        CHECK(r.betas[i] == m.betas[i]);
      else
        CHECK(r.betas[i] == doctest::Approx(m.betas[i]).epsilon(1e-9));
    }
    // Rotation invariance.
    const Matrix q = oracle::randomRotation(rng, n);
    const MinimaProfile rot = successiveMinima(BasisMatrix::fromRows(b.embedding() * q));
    for (int i = 0; i < n; ++i) CHECK(rot.betas[i] == doctest::Approx(m.betas[i]).epsilon(1e-9));
  }
}

TEST_CASE("witness tie-breaking is deterministic") {
  const MinimaProfile m = successiveMinima(BasisMatrix::identity(3));
  // Sign-normalized coefficient vectors, lexicographically smallest first.
  CHECK(m.witnesses[0].coeffs == IntVector((IntVector(3) << 0, 0, 1).finished()));
  CHECK(m.witnesses[1].coeffs == IntVector((IntVector(3) << 0, 1, 0).finished()));
  CHECK(m.witnesses[2].coeffs == IntVector((IntVector(3) << 1, 0, 0).finished()));
}

TEST_CASE("dualBasis") {
  CHECK(dualBasis(BasisMatrix::identity(4)).integerRows() == IntMatrix::Identity(4, 4));
  const BasisMatrix d = dualBasis(diagBasis({0.5, 1.0, 2.0}));
  CHECK(d.embedding()(0, 0) == doctest::Approx(2.0));
  CHECK(d.embedding()(1, 1) == doctest::Approx(1.0));
  CHECK(d.embedding()(2, 2) == doctest::Approx(0.5));

  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 3;
    const BasisMatrix b = (t % 2) ? oracle::randomHecke(rng, n, 1000003) : oracle::randomReal(rng, n);
    const BasisMatrix db = dualBasis(b);
    CHECK(std::abs(std::abs(db.determinant()) - 1.0) < 1e-9);
    // ⟨v, w⟩ ∈ Z for all basis pairs.
    const Matrix g = b.embedding() * db.embedding().transpose();
    CHECK((g - g.array().round().matrix()).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(sameLattice(dualBasis(db), b));
    if (b.integral()) CHECK(db.integral());
  }
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 0) = 1e7;
  bad(1, 1) = 1e-7;
  CHECK_THROWS_AS(dualBasis(BasisMatrix::fromRows(bad)), NumericalRankLoss);
}

TEST_CASE("transference on samples") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 2;
    const BasisMatrix b = oracle::randomHecke(rng, n, 1000003);
    const auto m = successiveMinima(b).betas;
    const auto md = successiveMinima(dualBasis(b)).betas;
    for (int j = 0; j < n; ++j) CHECK(m[j] * md[n - 1 - j] >= 1 - 1e-9);
  }
}

namespace {

// Minimal determinant of a primitive rank-ℓ sublattice by exhausting ℓ-subsets
// of the brute-force point list within `radius`.
double bruteSigma(const BasisMatrix& b, int ell, double radius) {
  auto pts = oracle::points(b, radius);
  const int n = b.dim();
  double best = 1e300;
  std::vector<int> idx(ell);
  std::function<void(int, int)> rec = [&](int depth, int start) {
    if (depth == ell) {
      IntMatrix c(ell, n);
      for (int a = 0; a < ell; ++a) c.row(a) = pts[idx[a]];
      if (integerRank(c) < ell) return;
      if (saturationIndex(c) != 1) return;
      best = std::min(best, std::sqrt(gramDeterminant(b, c)));
      return;
    }
    for (int i = start; i < static_cast<int>(pts.size()); ++i) {
      idx[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace

TEST_CASE("sigmaEll") {
  const SublatticeRecord z = sigmaEll(BasisMatrix::identity(3), 2);
  CHECK(z.detValue == doctest::Approx(1.0));
  CHECK(z.primitive);
  const SublatticeRecord d = sigmaEll(diagBasis({0.5, 1.0, 2.0}), 2);
  CHECK(d.detValue == doctest::Approx(0.5));
  CHECK(d.primitive);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 12; ++t) {
    const int n = 3 + t % 2;
    const BasisMatrix b = (t % 3) ? oracle::randomHecke(rng, n, 997) : oracle::randomReal(rng, n);
    const auto betas = successiveMinima(b).betas;
    const SublatticeRecord one = sigmaEll(b, 1);
    CHECK(one.detValue == doctest::Approx(betas[0]).epsilon(1e-12));
    for (int ell = 2; ell < n; ++ell) {
      const SublatticeRecord rec = sigmaEll(b, ell);
      CHECK(rec.primitive);
      CHECK(rec.rank == ell);
      double prod = 1;
      for (int j = 0; j < ell; ++j) prod *= betas[j];
      CHECK(rec.detValue <= prod * (1 + 1e-12));
      CHECK(rec.ratioToMinima == doctest::Approx(rec.detValue / prod));
      IntMatrix g(ell, n);
      for (int a = 0; a < ell; ++a) g.row(a) = rec.generators[a].coeffs;
      CHECK(rec.detValue * rec.detValue == doctest::Approx(gramDeterminant(b, g)).epsilon(1e-9));
      const double brute = bruteSigma(b, ell, 1.6 * betas[ell - 1]);
      CHECK(rec.detValue == doctest::Approx(brute).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(sigmaEll(BasisMatrix::identity(6), 2), UnsupportedDimension);
}

namespace {

std::int64_t bruteCount(const BasisMatrix& b, int ell, double H, double radius) {
  auto pts = oracle::points(b, radius);
  std::set<std::vector<std::int64_t>> seen;
  const int n = b.dim();
  if (ell == 1) {
    for (const auto& p : pts)
      if (contentGcd(p) == 1 && std::sqrt(static_cast<double>(oracle::normSq(b, p))) <= H * (1 + 1e-12)) {
        const IntVector c = signCanonical(p);
        seen.emplace(c.data(), c.data() + n);
      }
    return static_cast<std::int64_t>(seen.size());
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      IntMatrix c(2, n);
      c.row(0) = pts[i];
      c.row(1) = pts[j];
      if (integerRank(c) < 2 || saturationIndex(c) != 1) continue;
      if (gramDeterminant(b, c) > H * H * (1 + 1e-12)) continue;
      const IntMatrix h = hermiteNormalForm(c);
      seen.emplace(h.data(), h.data() + h.size());
    }
  return static_cast<std::int64_t>(seen.size());
}

}  // namespace

TEST_CASE("countPrimitiveSublattices") {
  const BasisMatrix z = BasisMatrix::identity(3);
  CHECK(countPrimitiveSublattices(z, 1, 1.0) == 3);
  CHECK(countPrimitiveSublattices(z, 2, 1.0) == 3);
  CHECK(countPrimitiveSublattices(z, 1, 0.99) == 0);
  CHECK(countPrimitiveSublattices(z, 1, std::sqrt(2.0)) == 9);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 8; ++t) {
    const BasisMatrix b = oracle::randomHecke(rng, 3, 997);
    const double b1 = successiveMinima(b).betas[0];
    CHECK(countPrimitiveSublattices(b, 1, 0.999 * b1) == 0);
    for (double H : {1.0, 1.6}) {
      CHECK(countPrimitiveSublattices(b, 1, H) == bruteCount(b, 1, H, H));
      CHECK(countPrimitiveSublattices(b, 2, H) == bruteCount(b, 2, H, 2.0 / std::sqrt(3.0) * H / b1 + 1e-9));
    }
  }
  CHECK_THROWS_AS(countPrimitiveSublattices(BasisMatrix::identity(5), 1, 1.0), UnsupportedDimension);
}
