#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "latlab/counting.hpp"
#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/sampler.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

const double kV3 = 4.0 * M_PI / 3.0;

BasisMatrix diagBasis(std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return BasisMatrix::fromRows(m);
}

double volumeForRadius(int n, double r) { return unitBallVolume(n) * std::pow(r, n); }

// Exhaustive rank check over all ordered tuples.
std::uint64_t bruteTilde(const BasisMatrix& b, const RegionFamily& f, double M) {
  std::vector<std::vector<IntVector>> factors;
  for (int j = 0; j < f.ell; ++j) factors.push_back(oracle::points(b, f.radius(j, M)));
  std::uint64_t count = 0;
  std::vector<std::size_t> idx(f.ell, 0);
  for (const auto& fac : factors)
    if (fac.empty()) return 0;
  for (;;) {
    IntMatrix m(f.ell, b.dim());
    for (int j = 0; j < f.ell; ++j) m.row(j) = factors[j][idx[j]];
    count += integerRank(m) == f.ell;
    int j = 0;
    while (j < f.ell && ++idx[j] == factors[j].size()) idx[j++] = 0;
    if (j == f.ell) return count;
  }
}

}  // namespace

TEST_CASE("psi presets") {
  const Psi p = Psi::parse("poly:1.5");
  CHECK(p(4.0) == doctest::Approx(8.0));
  CHECK(Psi::parse(p.name())(3.0) == p(3.0));
  const Psi l = Psi::parse("loglog");
  CHECK(l(1.0) == doctest::Approx(std::log(3.0) * std::log(3.0)));
  CHECK(Psi::parse(l.name()).kind == Psi::Kind::logSquared);
  CHECK_THROWS_AS(Psi::parse("poly:1"), ConfigError);
  CHECK_THROWS_AS(Psi::parse("poly:x"), ConfigError);
  CHECK_THROWS_AS(Psi::parse("exp"), ConfigError);
  CHECK(discrepancyBound(1.0, p) == 0.0);
  CHECK(discrepancyBound(100.0, p) > 0.0);
}

TEST_CASE("region family validation") {
  RegionFamily f = RegionFamily::uniform(3, 2);
  CHECK_NOTHROW(f.validate());
  f.coordinateVolumes = {2.0, 0.5};
  CHECK_NOTHROW(f.validate());
  f.coordinateVolumes = {2.0, 0.6};
  CHECK_THROWS_AS(f.validate(), ConfigError);
  CHECK_THROWS_AS(RegionFamily::uniform(3, 3).validate(), ConfigError);
  CHECK(RegionFamily::uniform(3, 1).radius(0, kV3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(RegionFamily::uniform(3, 1).radius(0, 8.0) < RegionFamily::uniform(3, 1).radius(0, 8.0001));
}

TEST_CASE("hat fixtures on Z3") {
  const auto z = BasisMatrix::identity(3);
  const auto f = RegionFamily::uniform(3, 2);
  const auto atUnit = hatTransform(z, f, kV3);
  CHECK(atUnit.perFactorCounts == std::vector<std::uint64_t>{6, 6});
  CHECK(atUnit.hatValue == 36);
  // 4.18 < V₃: radius 0.9993, no points.
  CHECK(hatTransform(z, f, 4.18).hatValue == 0);
  CHECK(hatTransform(z, RegionFamily::uniform(3, 1), 20.0).hatValue == countInBall(z, 20.0));
  CHECK(hatTransform(z, f, 0.999 * kV3).hatValue == 0);
}

TEST_CASE("tilde fixtures") {
  const auto z = BasisMatrix::identity(3);
  const auto f = RegionFamily::uniform(3, 2);
  const auto t = tildeTransform(z, f, volumeForRadius(3, 1.5));
  CHECK(t.perFactorCounts[0] == 18);
  CHECK(t.hatValue == 324);
  CHECK(t.tildeValue == 288);

  const auto one = tildeTransform(z, RegionFamily::uniform(3, 1), volumeForRadius(3, 2.3));
  CHECK(one.tildeValue == one.hatValue);

  // Only ±0.5e₁ lies in the ball of radius 0.8.
  const auto d = tildeTransform(diagBasis({0.5, 1, 2}), f, volumeForRadius(3, 0.8));
  CHECK(d.hatValue == 4);
  CHECK(d.tildeValue == 0);
}

TEST_CASE("tilde agrees with exhaustive rank checks") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> cdist(0.6, 1.6);
  int checked = 0;
  for (int t = 0; t < 120; ++t) {
    const int n = 3 + t % 2;
    const int ell = (t % 3 == 2 && n == 4) ? 3 : 2;
    const BasisMatrix b = t % 2 ? oracle::randomHecke(rng, n, 1009) : oracle::randomReal(rng, n);
    RegionFamily f = RegionFamily::uniform(n, ell);
    double prod = 1;
    for (int j = 0; j + 1 < ell; ++j) prod *= (f.coordinateVolumes[j] = cdist(rng));
    f.coordinateVolumes[ell - 1] = 1.0 / prod;
    const double M = 4.0 + (t % 7) * 4.0;
    const auto got = tildeTransform(b, f, M);
    std::uint64_t maxN = 0;
    for (auto c : got.perFactorCounts) maxN = std::max(maxN, c);
    if (maxN > 40) continue;
    ++checked;
    REQUIRE(got.tildeValue == bruteTilde(b, f, M));
    std::uint64_t hat = 1;
    for (int j = 0; j < ell; ++j) {
      REQUIRE(got.perFactorCounts[j] == oracle::points(b, f.radius(j, M)).size());
      hat *= got.perFactorCounts[j];
    }
    REQUIRE(got.hatValue == hat);
    REQUIRE(got.tildeValue <= got.hatValue);
  }
  CHECK(checked >= 40);
}

TEST_CASE("hat factorizes and counts are monotone in M") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const BasisMatrix b = oracle::randomHecke(rng, 3, 1000003);
    const auto f2 = RegionFamily::uniform(3, 2);
    std::vector<double> grid;
    for (double M = 1; M <= 400; M *= 1.4) grid.push_back(M);
    const auto counts = tupleCountsOnGrid(b, f2, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto single = tildeTransform(b, f2, grid[i]);
      REQUIRE(single.tildeValue == counts[i].tildeValue);
      const auto n1 = hatTransform(b, RegionFamily::uniform(3, 1), grid[i]).hatValue;
      REQUIRE(counts[i].hatValue == n1 * n1);
      if (i > 0) {
        REQUIRE(counts[i].hatValue >= counts[i - 1].hatValue);
        REQUIRE(counts[i].tildeValue >= counts[i - 1].tildeValue);
      }
    }
  }
}

TEST_CASE("discrepancy") {
  const auto z = BasisMatrix::identity(3);
  const auto f = RegionFamily::uniform(3, 2);
  const Psi psi = Psi::parse("poly:1.5");
  // M = 1 has radius 0.62 on Z³: no points.
  auto d = discrepancy(z, f, {1.0}, psi);
  CHECK(d[0].dFull == 1.0);
  CHECK(d[0].dIndep == 1.0);
  CHECK(d[0].boundValue == 0.0);

  // Z³ at M = 10⁴ against a lattice-point oracle: N from a box count and the
  // collinear pairs from primitive directions, Σ (2⌊r/|w|⌋)² over lines.
  const double M = 1e4;
  const double r2 = std::pow(ballRadius(3, M), 2) * (1 + 1e-12);
  const int R = static_cast<int>(std::sqrt(r2)) + 1;
  std::uint64_t N = 0, dependent = 0;
  for (int x = -R; x <= R; ++x)
    for (int y = -R; y <= R; ++y)
      for (int w = -R; w <= R; ++w) {
        const double q = x * x + y * y + w * w;
        if (q == 0 || q > r2) continue;
        ++N;
        if (std::gcd(std::gcd(std::abs(x), std::abs(y)), std::abs(w)) != 1) continue;
        const auto m = 2 * static_cast<std::uint64_t>(std::floor(std::sqrt(r2 / q)));
        dependent += m * m;  // both signs of w are visited: each line twice
      }
  dependent /= 2;
  d = discrepancy(z, f, {M}, psi);
  CHECK(d[0].dFull == doctest::Approx(std::abs(double(N * N) / (M * M) - 1)).epsilon(1e-14));
  CHECK(d[0].dIndep == doctest::Approx(std::abs(double(N * N - dependent) / (M * M) - 1)).epsilon(1e-14));
  CHECK(d[0].boundValue == doctest::Approx(std::log(M) * std::pow(std::log(M), 0.75) / 100.0));

  CHECK_THROWS_AS(discrepancy(z, f, {0.5}, psi), ConfigError);
  CHECK_THROWS_AS(discrepancy(z, f, {5.0, 2.0}, psi), ConfigError);

  std::mt19937_64 rng(47);
  std::vector<double> grid;
  for (double m = 1; m < 3000; m *= 1.3) grid.push_back(m);
  for (int t = 0; t < 10; ++t) {
    const auto b = oracle::randomHecke(rng, 3, 1000003);
    const auto pts = discrepancy(b, f, grid, psi);
    const auto counts = tupleCountsOnGrid(b, f, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double slack = double(counts[i].hatValue - counts[i].tildeValue) / (grid[i] * grid[i]);
      REQUIRE(pts[i].dIndep <= pts[i].dFull + slack + 1e-12);
      REQUIRE(pts[i].dFull >= 0);
      if (grid[i] > 1) REQUIRE(pts[i].boundValue > 0);
    }
  }
}

TEST_CASE("centered counts") {
  const auto z = BasisMatrix::identity(3);
  const auto f1 = RegionFamily::uniform(3, 1);
  CHECK(centeredCount(z, f1, kV3) == doctest::Approx(6.0 - kV3).epsilon(1e-15));
  CHECK(centeredCount(z, f1, 4.18) == doctest::Approx(-4.18));
  CHECK(centeredCount(z, f1, 0.0) == 0.0);
  const auto f2 = RegionFamily::uniform(3, 2);
  for (double M : {3.0, 50.0, 700.0}) {
    const double c = centeredCount(z, f2, M);
    const auto d = discrepancy(z, f2, {M}, Psi{});
    CHECK(std::abs(c) / (M * M) == doctest::Approx(d[0].dFull).epsilon(1e-14));
  }
}

TEST_CASE("mean value of the independent tuple count") {
  SamplerConfig cfg;
  cfg.seed = 101;
  const auto source = makeSource(cfg);
  const auto r = meanValueCheck(source, RegionFamily::uniform(3, 2), 3.0, 10000, 1);
  INFO("mean=" << r.meanTilde << " se=" << r.standardError);
  CHECK(r.target == 9.0);
  CHECK(r.pass);
  const auto small = meanValueCheck(source, RegionFamily::uniform(3, 2), 1e-3, 1000, 1);
  CHECK(small.meanTilde < 1e-3);
  const auto one = meanValueCheck(source, RegionFamily::uniform(3, 1), 5.0, 2000, 1);
  CHECK(one.meanTilde == validateSampler(source, 5.0, 2000, 1).meanCount);
  CHECK_THROWS_AS(meanValueCheck(source, RegionFamily::uniform(3, 2), 3.0, 10, 1), ConfigError);
}

TEST_CASE("moment gap") {
  const auto zsource = [](std::uint64_t) { return BasisMatrix::identity(3); };
  const auto fixed = momentGapEstimate(zsource, 3, 2, {volumeForRadius(3, 1.5)}, 2, 1);
  CHECK(fixed.points[0].gapOverPower * volumeForRadius(3, 1.5) == doctest::Approx(36.0).epsilon(1e-14));

  // For n = 3, ℓ = 2: E[hat − tilde] = V·(4ζ(2)/ζ(3) − 2) by the primitive
  // Siegel formula summed over multiples on each line.
  const double zeta3 = 1.2020569031595942;
  const double expected = 4 * (M_PI * M_PI / 6) / zeta3 - 2;
  SamplerConfig cfg;
  cfg.seed = 103;
  const auto report = momentGapEstimate(makeSource(cfg), 3, 2, {2, 4, 8, 16, 32}, 20000, 1);
  for (const auto& p : report.points) {
    INFO("V=" << p.V << " gap/V=" << p.gapOverPower << " se=" << p.standardError);
    CHECK(std::abs(p.gapOverPower - expected) <= 4 * p.standardError);
  }
  CHECK(report.bounded);
  const auto tiny = momentGapEstimate(makeSource(cfg), 3, 2, {1e-4}, 1000, 1);
  CHECK(tiny.points[0].gapOverPower == 0.0);
  CHECK_THROWS_AS(momentGapEstimate(zsource, 3, 1, {2}, 10, 1), ConfigError);
}
