#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "doctest.h"
#include "latlab/dual.hpp"
#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/sampler.hpp"
#include "latlab/stats.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

SamplerConfig hecke(int n, std::uint64_t seed) {
  SamplerConfig c;
  c.dim = n;
  c.seed = seed;
  return c;
}

SamplerConfig siegel(int n, std::uint64_t seed) {
  SamplerConfig c;
  c.dim = n;
  c.method = SamplerMethod::siegelIwasawa;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("primality and config validation") {
  CHECK(isPrime(1000003));
  CHECK(isPrime(997));
  CHECK_FALSE(isPrime(1000001));
  CHECK_FALSE(isPrime(1));
  auto c = hecke(3, 1);
  c.heckePrime = 991;
  CHECK_THROWS_AS(sampleHecke(c), ConfigError);
  c.heckePrime = 1000001;
  CHECK_THROWS_AS(sampleHecke(c), ConfigError);
  c = hecke(2, 1);
  CHECK_THROWS_AS(sampleHecke(c), ConfigError);
  CHECK_THROWS_AS(sampleSiegelIwasawa(hecke(3, 1), 0.1), ConfigError);
  CHECK_THROWS_AS(sampleHecke(siegel(3, 1)), ConfigError);
}

TEST_CASE("Hecke fixtures") {
  const auto b = heckeBasis(5, {2, 3});
  IntMatrix expect(3, 3);
  expect << 5, 0, 0, 2, 1, 0, 3, 0, 1;
  CHECK(b.integerRows() == expect);
  CHECK(b.scale() == doctest::Approx(std::pow(5.0, -1.0 / 3)).epsilon(1e-15));
  CHECK(static_cast<std::int64_t>(integerDeterminant(b.integerRows())) == 5);

  const auto z = heckeBasis(1000003, {0, 0, 0});
  CHECK(shortestVectorLength(z) == doctest::Approx(std::pow(1000003.0, -0.25)).epsilon(1e-12));
}

TEST_CASE("Hecke draws are deterministic and exact") {
  for (int n = 3; n <= 6; ++n) {
    auto c = hecke(n, 42);
    for (std::uint64_t t = 0; t < 500; ++t) {
      c.trialIndex = t;
      const auto b = sampleHecke(c);
      REQUIRE(static_cast<std::int64_t>(integerDeterminant(b.integerRows())) == c.heckePrime);
      REQUIRE(b.integerRows() == sampleHecke(c).integerRows());
      for (int i = 1; i < n; ++i) REQUIRE((b.integerRows()(i, 0) >= 0 && b.integerRows()(i, 0) < c.heckePrime));
    }
  }
  auto c1 = hecke(3, 1), c2 = hecke(3, 2);
  int same = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    c1.trialIndex = c2.trialIndex = t;
    same += sampleHecke(c1).integerRows() == sampleHecke(c2).integerRows();
  }
  CHECK(same == 0);
}

TEST_CASE("Siegel-Iwasawa draws") {
  CHECK(composeKau(Matrix::Identity(3, 3), aFromB({1, 1}), Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-15));
  CHECK_THROWS_AS(sampleSiegelIwasawa(siegel(3, 1), 2.0), TruncationTooTight);
  auto c = siegel(4, 9);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    c.trialIndex = t;
    const auto s = sampleSiegelIwasawa(c, 0.05);
    REQUIRE(s.diagnostic);
    REQUIRE(s.weight == 1.0);
    REQUIRE(inSiegelSet(s.g));
    REQUIRE(std::abs(s.basis.determinant() - 1.0) < 1e-9);
    const auto again = sampleSiegelIwasawa(c, 0.05);
    REQUIRE((Matrix(again.g) - Matrix(s.g)).norm() == 0.0);
  }
}

TEST_CASE("b1 follows the power-law density") {
  // Density ∝ b^{n−2} on [ε₀, 2]; ten equal-probability bins via the CDF.
  const int n = 3;
  const double eps = 0.05, k = n - 1;
  auto cdf = [&](double b) { return (std::pow(b, k) - std::pow(eps, k)) / (std::pow(2.0, k) - std::pow(eps, k)); };
  const int bins = 10, draws = 100000;
  std::vector<int> hist(bins);
  auto c = siegel(n, 77);
  for (int t = 0; t < draws; ++t) {
    c.trialIndex = t;
    const auto coords = iwasawaDecompose(sampleSiegelIwasawa(c, eps).g);
    const double b1 = coords.a[0] / coords.a[1];
    REQUIRE((b1 >= eps - 1e-12 && b1 <= 2 + 1e-12));
    ++hist[std::min(bins - 1, static_cast<int>(cdf(b1) * bins))];
  }
  double chi2 = 0;
  const double expected = static_cast<double>(draws) / bins;
  for (int h : hist) chi2 += (h - expected) * (h - expected) / expected;
  CHECK(chiSquareSurvival(chi2, bins - 1) > 0.01);
}

TEST_CASE("countInBall") {
  const auto z = BasisMatrix::identity(3);
  CHECK(countInBall(z, 4.0 * M_PI / 3.0) == 6);
  // Volume 4.18 is just below V₃, so the radius is below 1.
  CHECK(countInBall(z, 4.18) == 0);
  CHECK(countInBall(z, 1e-3) == 0);
  CHECK(countInBall(z, unitBallVolume(3) * std::pow(1.5, 3)) == 18);
}

TEST_CASE("Siegel mean value identity") {
  const auto cfg = hecke(3, 1);
  for (double v : {1.0, 5.0, 20.0}) {
    const auto r = validateSampler(cfg, v, 10000, 1);
    INFO("V=" << v << " mean=" << r.meanCount << " se=" << r.standardError);
    CHECK(r.pass);
    CHECK(r.trials == 10000);
  }
  const auto tiny = validateSampler(cfg, 1e-3, 10000, 1);
  CHECK(tiny.meanCount < 0.01);
  CHECK(tiny.pass);
  CHECK_THROWS_AS(validateSampler(cfg, 5, 999, 1), ConfigError);
}

TEST_CASE("sampler results do not depend on worker count") {
  const auto cfg = hecke(4, 8);
  const auto a = validateSampler(cfg, 5, 2000, 1);
  const auto b = validateSampler(cfg, 5, 2000, 3);
  CHECK(a.meanCount == b.meanCount);
  CHECK(a.standardError == b.standardError);
}

TEST_CASE("duality preserves the Hecke distribution of beta1") {
  auto c = hecke(3, 5);
  const std::size_t draws = 100000;
  std::vector<double> primal(draws), dual(draws);
  for (std::size_t t = 0; t < draws; ++t) {
    c.trialIndex = t;
    const auto b = sampleHecke(c);
    primal[t] = shortestVectorLength(b);
    dual[t] = shortestVectorLength(dualBasis(b));
  }
  CHECK(ksStatistic(primal, dual) < ksCriticalValue(draws, draws, 0.01));
}
