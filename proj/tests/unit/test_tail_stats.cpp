#include <cmath>
#include <random>

#include "doctest.h"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/tails.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

LatticeSource heckeSource(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  return makeSource(cfg);
}

TailEstimate exactEstimate(double threshold, double p) {
  TailEstimate e;
  e.threshold = threshold;
  e.trials = 1000000000;
  e.hits = static_cast<std::uint64_t>(std::llround(p * 1e9));
  e.pHat = p;
  e.ci = wilsonInterval(e.hits, e.trials);
  return e;
}

}  // namespace

TEST_CASE("event specs") {
  for (const char* text : {"betaLeq:1", "betaProdPrefixLeq:2", "betaGeq:3", "betaProdSuffixGeq:2", "zetaGeq:2"}) {
    const EventSpec e = EventSpec::parse(text);
    CHECK(e.name() == text);
    for (double t : {0.2, 1.0, 3.5}) CHECK(e.fromZ(e.toZ(t)) == doctest::Approx(t).epsilon(1e-15));
  }
  const EventSpec lower = EventSpec::parse("betaLeq:1");
  CHECK(lower.lowerTail());
  CHECK(lower.contains(0.3, 0.3));
  CHECK_FALSE(lower.contains(0.31, 0.3));
  CHECK(lower.observable().kind == ObservableSpec::Kind::negLogBeta);
  CHECK(lower.toZ(0.5) == doctest::Approx(std::log(2.0)));
  const EventSpec upper = EventSpec::parse("zetaGeq:2.5");
  CHECK_FALSE(upper.lowerTail());
  CHECK(upper.s == 2.5);
  CHECK(upper.observable().kind == ObservableSpec::Kind::logZeta);
  CHECK_THROWS_AS(EventSpec::parse("betaLeq"), ConfigError);
  CHECK_THROWS_AS(EventSpec::parse("gammaLeq:1"), ConfigError);
  CHECK_THROWS_AS(estimateTail(heckeSource(1), 3, EventSpec::parse("betaLeq:3"), {0.5}, 10000), ConfigError);
  CHECK_THROWS_AS(estimateTail(heckeSource(1), 3, EventSpec::parse("betaGeq:1"), {0.5}, 10000), ConfigError);
  CHECK_THROWS_AS(estimateTail(heckeSource(1), 3, EventSpec::parse("zetaGeq:1.5"), {0.5}, 10000), ConfigError);
  CHECK_THROWS_AS(estimateTail(heckeSource(1), 3, lower, {0.5}, 9999), ConfigError);
}

TEST_CASE("exact power laws are recovered with zero stderr") {
  for (double c : {1.0, 0.37}) {
    std::vector<TailEstimate> est;
    for (double t = 0.15; t <= 0.5; t *= 1.2) est.push_back(exactEstimate(t, c * t * t * t));
    const ExponentFit fit = fitExponent(est);
    CHECK(fit.slope == doctest::Approx(3).epsilon(1e-6));
    CHECK(fit.slopeStderr <= 1e-5);
    CHECK(fit.intercept == doctest::Approx(std::log(c)).epsilon(1e-5));
    CHECK(fit.r2 == doctest::Approx(1).epsilon(1e-9));
    CHECK(fit.gridUsed.size() == est.size());
  }
  std::vector<TailEstimate> few = {exactEstimate(0.2, 0.1), exactEstimate(0.3, 0.2), exactEstimate(0.4, 0.3)};
  CHECK_THROWS_AS(fitExponent(few), InsufficientData);
  // Points under 20 hits are dropped before counting.
  few.push_back(exactEstimate(0.1, 1e-8));
  CHECK_THROWS_AS(fitExponent(few), InsufficientData);
}

TEST_CASE("Wilson intervals cover at least 93 percent") {
  std::mt19937_64 rng(5);
  // np ≥ 20, the regime the exponent fits use.
  for (double p : {0.01, 0.05, 0.3, 0.5}) {
    std::binomial_distribution<std::uint64_t> bin(2000, p);
    int covered = 0;
    for (int r = 0; r < 1000; ++r) {
      const auto k = bin(rng);
      const Interval ci = wilsonInterval(k, 2000);
      CHECK(ci.lo >= 0);
      CHECK(ci.hi <= 1);
      covered += ci.lo <= p && p <= ci.hi;
    }
    CHECK(covered >= 930);
  }
}

TEST_CASE("tail estimates on a Hecke stream") {
  const auto source = heckeSource(9);
  const EventSpec small = EventSpec::parse("betaLeq:1");
  const auto est = estimateTail(source, 3, small, {0.3, 0.6, 1.1}, 10000);
  REQUIRE(est.size() == 3);
  CHECK(est[2].pHat > 0);
  for (const auto& e : est) {
    CHECK(e.ci.lo <= e.pHat);
    CHECK(e.pHat <= e.ci.hi);
    CHECK(e.trials == 10000);
  }
  CHECK(est[0].hits <= est[1].hits);
  CHECK(est[1].hits <= est[2].hits);

  // β₃ ≥ (∏βⱼ)^{1/3} ≥ (2³/(3!·V₃))^{1/3} ≈ 0.6828 on every lattice.
  const double floor3 = std::cbrt(8.0 / (6.0 * 4.0 / 3.0 * M_PI));
  const auto big = estimateTail(source, 3, EventSpec::parse("betaGeq:3"), {0.999 * floor3}, 10000);
  CHECK(big[0].pHat == 1.0);

  // Same trials reuse: estimateTail equals tailFromSample on sampleRaw.
  const auto raw = sampleRaw(source, small.observable(), 3, 10000);
  const auto again = tailFromSample(raw, small, {0.3, 0.6, 1.1});
  for (std::size_t i = 0; i < 3; ++i) CHECK(again[i].hits == est[i].hits);
}

TEST_CASE("zeta tail below the pilot minimum is certain") {
  const auto source = heckeSource(21);
  const EventSpec ev = EventSpec::parse("zetaGeq:2");
  const auto raw = sampleRaw(source, ev.observable(), 3, 2000);
  double lo = raw.front();
  for (double x : raw) lo = std::min(lo, x);
  // ζ(Λ, 2) ≥ 2·β₁^{−4} is far above 1 here; the pilot minimum is a floor.
  CHECK(lo > 1);
  const auto est = tailFromSample(raw, ev, {0.99 * lo});
  CHECK(est[0].pHat == 1.0);
}

TEST_CASE("dlCheck on synthetic exponential tails") {
  std::mt19937_64 rng(8);
  std::exponential_distribution<double> ex(3.0);
  std::vector<double> deltas(200000);
  for (double& d : deltas) d = ex(rng) - 0.4;
  const auto grid = autoZGrid(deltas, 0.2, 8);
  CHECK(grid.size() == 8);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  const DLVerdict v = dlCheck(deltas, 3.0, grid);
  CHECK(v.pass);
  CHECK(v.alphaFitted == doctest::Approx(3).epsilon(0.05));
  CHECK(v.pass == (std::abs(v.alphaFitted - 3.0) <= 3 * v.alphaStderr + 0.3));
  // μ(Δ ≥ z) = e^{−3(z+0.4)}, so C = e^{−1.2}.
  CHECK(v.constantBracket.lo <= std::exp(-1.2) * 1.1);
  CHECK(v.constantBracket.hi >= std::exp(-1.2) * 0.9);

  const DLVerdict wrong = dlCheck(deltas, 6.0, grid);
  CHECK_FALSE(wrong.pass);
  CHECK(wrong.alphaFitted == v.alphaFitted);
  CHECK_THROWS_AS(autoZGrid(std::vector<double>(100, 1.0), 0.2, 8), InsufficientData);
}

TEST_CASE("duality symmetry") {
  const LatticeSource integer = [](std::uint64_t) { return BasisMatrix::identity(3); };
  const DualitySymmetry z = dualitySymmetryCheck(integer, 3, 200);
  REQUIRE(z.ksStatistics.size() == 3);
  for (double ks : z.ksStatistics) CHECK(ks == 0.0);
  CHECK(z.transferenceViolations == 0);
  CHECK(z.maxTransferenceProduct == doctest::Approx(1.0));
  CHECK(z.pass);

  const DualitySymmetry h = dualitySymmetryCheck(heckeSource(4), 3, 20000);
  CHECK(h.transferenceViolations == 0);
  CHECK(h.maxTransferenceProduct >= 1.0);
  CHECK(h.pass);
}

TEST_CASE("Siegel ratio scan") {
  const Matrix id = Matrix::Identity(3, 3);
  for (int l = 1; l <= 3; ++l) CHECK(piEll(id, l) / successiveMinima(latticeOf(id)).betas[l - 1] == 1.0);

  Matrix g = Matrix::Zero(3, 3);
  g(0, 0) = 2;
  g(1, 1) = 1;
  g(2, 2) = 0.5;
  REQUIRE(inSiegelSet(g));
  const auto betas = successiveMinima(latticeOf(g)).betas;
  const double expected[] = {4, 1, 0.25};
  const auto bracket = siegelPilotBracket(3);
  REQUIRE(bracket.has_value());
  for (int l = 1; l <= 3; ++l) {
    const double r = piEll(g, l) / betas[l - 1];
    CHECK(r == doctest::Approx(expected[l - 1]).epsilon(1e-15));
    CHECK((*bracket)[l - 1].lo <= r);
    CHECK(r <= (*bracket)[l - 1].hi);
  }
  CHECK_FALSE(siegelPilotBracket(4).has_value());

  SamplerConfig cfg;
  cfg.method = SamplerMethod::siegelIwasawa;
  cfg.seed = 31;
  const RatioScan scan = siegelRatioScan(cfg, 10000);
  CHECK(scan.bracketKnown);
  CHECK(scan.violations == 0);
  CHECK(scan.trials == 10000);
  for (int l = 0; l < 3; ++l) CHECK(scan.minRatio[l] <= scan.maxRatio[l]);
  CHECK_THROWS_AS(siegelRatioScan(SamplerConfig{}, 10), ConfigError);
}
