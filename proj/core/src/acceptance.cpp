#include "latlab/acceptance.hpp"

#include <boost/rational.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>

#include "latlab/counting.hpp"
#include "latlab/csv.hpp"
#include "latlab/dual.hpp"
#include "latlab/dynamics.hpp"
#include "latlab/enumeration.hpp"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/parallel.hpp"
#include "latlab/rng.hpp"
#include "latlab/sampler.hpp"
#include "latlab/stats.hpp"
#include "latlab/sublattice.hpp"
#include "latlab/tails.hpp"
#include "latlab/zeta.hpp"
#include "latlab/zexpr.hpp"

namespace latlab {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct Context {
  const AcceptanceOptions& options;
  CriterionResult& result;

  void metric(const std::string& name, double value) { result.metrics.emplace_back(name, value); }
  void write(const std::string& name, const CsvTable& table) {
    if (options.outputDir.empty()) return;
    fs::create_directories(options.outputDir);
    const std::string path = (fs::path(options.outputDir) / name).string();
    table.write(path);
    result.files.push_back(name);
  }
  void note(const std::string& text) {
    if (!result.detail.empty()) result.detail += "; ";
    result.detail += text;
  }
  int workers() const { return options.workers; }
};

LatticeSource hecke(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.seed = seed;
  return makeSource(cfg);
}

std::vector<double> logGrid(double a, double b, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = a * std::pow(b / a, static_cast<double>(i) / (points - 1));
  g.back() = b;
  return g;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

// --- 1 ---------------------------------------------------------------------

bool siegelMeanValue(Context& c) {
  const auto source = hecke(101);
  CsvTable t{{"volume", "meanCount", "standardError", "trials", "pass"}, {}};
  bool pass = true;
  for (double V : {1.0, 5.0, 20.0}) {
    const SamplerValidation v = validateSampler(source, V, 10000, c.workers());
    t.addRow({V, v.meanCount, v.standardError, static_cast<double>(v.trials), v.pass ? 1.0 : 0.0});
    c.metric(fmt("mean[V=%g]", V), v.meanCount);
    c.note(fmt("V=%g mean %.4f ± %.4f", V, v.meanCount, v.standardError));
    pass = pass && v.pass;
  }
  c.write("c01_siegel_mean.csv", t);
  return pass;
}

// --- 2 ---------------------------------------------------------------------

bool tupleMeanValue(Context& c) {
  const MeanValueResult m = meanValueCheck(hecke(102), RegionFamily::uniform(3, 2), 3.0, 10000, c.workers());
  CsvTable t{{"M", "meanTilde", "standardError", "target", "trials"}, {}};
  t.addRow({3.0, m.meanTilde, m.standardError, m.target, static_cast<double>(m.trials)});
  c.write("c02_tuple_mean.csv", t);
  c.metric("meanTilde", m.meanTilde);
  c.note(fmt("E[tilde] %.4f ± %.4f vs 9", m.meanTilde, m.standardError));
  return std::abs(m.meanTilde - 9.0) <= 3 * m.standardError;
}

// --- 3 ---------------------------------------------------------------------

bool momentGap(Context& c) {
  const MomentGapReport r = momentGapEstimate(hecke(103), 3, 2, {2, 4, 8, 16, 32}, 20000, c.workers());
  CsvTable t{{"V", "gapOverPower", "standardError"}, {}};
  for (const auto& p : r.points) {
    t.addRow({p.V, p.gapOverPower, p.standardError});
    c.metric(fmt("gap[V=%g]", p.V), p.gapOverPower);
  }
  c.write("c03_moment_gap.csv", t);
  c.note(fmt("Mann-Kendall S=%g p=%.3f", r.trend.statistic, r.trend.pValue));
  return !r.trend.upwardTrend;
}

// --- 4, 5, 7: minima samples ------------------------------------------------

std::vector<std::array<double, 3>> minimaSample(const LatticeSource& source, std::uint64_t trials, int workers) {
  std::vector<std::array<double, 3>> out(trials);
  parallelTrials(trials, workers, [&](std::uint64_t i) {
    const auto b = successiveMinima(source(i)).betas;
    out[i] = {b[0], b[1], b[2]};
  });
  return out;
}

std::vector<double> pick(const std::vector<std::array<double, 3>>& sample, int first, int last) {
  std::vector<double> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double p = 1;
    for (int j = first; j <= last; ++j) p *= sample[i][j];
    out[i] = p;
  }
  return out;
}

// Thresholds whose exceedance probabilities run log-evenly from pMax down to
// max(1e-5, 50/trials).
std::vector<double> upperGrid(const std::vector<double>& raw, double pMax) {
  std::vector<double> logs(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) logs[i] = std::log(raw[i]);
  auto g = autoZGrid(logs, pMax, 8);
  for (double& x : g) x = std::exp(x);
  return g;
}

struct SlopeTarget {
  const char* event;
  int first, last;
  double slope, tol;
};

bool slopeChecks(Context& c, const std::vector<std::array<double, 3>>& sample, const std::vector<SlopeTarget>& targets,
                 const std::string& file, bool lower) {
  CsvTable t{{"event", "threshold", "pHat", "ciLo", "ciHi", "trials"}, {}};
  bool pass = true;
  for (const auto& target : targets) {
    const EventSpec ev = EventSpec::parse(target.event);
    const auto raw = pick(sample, target.first, target.last);
    const auto grid = lower ? logGrid(0.15, 0.5, 8) : upperGrid(raw, 0.2);
    const auto est = tailFromSample(raw, ev, grid);
    for (const auto& e : est)
      t.addRow({target.event, formatNumber(e.threshold), formatNumber(e.pHat), formatNumber(e.ci.lo),
                formatNumber(e.ci.hi), std::to_string(e.trials)});
    const ExponentFit fit = fitExponent(est);
    const bool ok = within(fit.slope, target.slope, target.tol);
    c.metric(std::string("slope[") + target.event + "]", fit.slope);
    c.note(fmt("%s slope %.3f ± %.3f (target %g ± %g)", target.event, fit.slope, fit.slopeStderr, target.slope,
               target.tol));
    pass = pass && ok;
  }
  c.write(file, t);
  return pass;
}

bool lowerTails(Context& c) {
  const auto sample = minimaSample(hecke(104), 1000000, c.workers());
  return slopeChecks(c, sample,
                     {{"betaLeq:1", 0, 0, 3, 0.3}, {"betaLeq:2", 1, 1, 6, 0.9}, {"betaProdPrefixLeq:2", 0, 1, 3, 0.5}},
                     "c04_lower_tails.csv", true);
}

bool upperTails(Context& c) {
  const auto sample = minimaSample(hecke(105), 1000000, c.workers());
  return slopeChecks(
      c, sample,
      {{"betaGeq:3", 2, 2, -3, 0.5}, {"betaGeq:2", 1, 1, -6, 1.0}, {"betaProdSuffixGeq:2", 1, 2, -3, 0.5}},
      "c05_upper_tails.csv", false);
}

// --- 6 ---------------------------------------------------------------------

std::vector<double> zetaSample(const LatticeSource& source, std::uint64_t trials, int workers) {
  return sampleRaw(source, ObservableSpec{ObservableSpec::Kind::logZeta, 1, 2.0}, 3, trials, workers);
}

bool zetaTail(Context& c) {
  const auto raw = zetaSample(hecke(106), 100000, c.workers());
  const EventSpec ev = EventSpec::parse("zetaGeq:2");
  const auto est = tailFromSample(raw, ev, upperGrid(raw, 0.05));
  CsvTable t{{"threshold", "pHat", "ciLo", "ciHi", "trials"}, {}};
  for (const auto& e : est) t.addRow({e.threshold, e.pHat, e.ci.lo, e.ci.hi, static_cast<double>(e.trials)});
  c.write("c06_zeta_tail.csv", t);
  const ExponentFit fit = fitExponent(est);
  c.metric("slope", fit.slope);
  c.note(fmt("slope %.4f ± %.4f (target -0.75 ± 0.1)", fit.slope, fit.slopeStderr));
  return within(fit.slope, -0.75, 0.1);
}

// --- 7 ---------------------------------------------------------------------

bool dlVerdicts(Context& c) {
  const auto sample = minimaSample(hecke(107), 1000000, c.workers());
  const auto zeta = zetaSample(hecke(207), 100000, c.workers());
  struct Item {
    const char* name;
    std::vector<double> deltas;
    double alpha, pMax;
  };
  auto logs = [](const std::vector<double>& raw, double sign) {
    std::vector<double> d(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) d[i] = sign * std::log(raw[i]);
    return d;
  };
  std::vector<Item> items = {
      {"negLogBeta:1", logs(pick(sample, 0, 0), -1), 3, 0.2},
      {"negLogBetaProdPrefix:2", logs(pick(sample, 0, 1), -1), 3, 0.2},
      {"logBeta:3", logs(pick(sample, 2, 2), 1), 3, 0.2},
      {"logBetaProdSuffix:2", logs(pick(sample, 1, 2), 1), 3, 0.2},
      {"logZeta:2", logs(zeta, 1), 0.75, 0.05},
  };
  CsvTable t{{"observable", "alphaExpected", "alphaFitted", "alphaStderr", "cLow", "cHigh", "pass"}, {}};
  bool pass = true;
  for (const auto& item : items) {
    const DLVerdict v = dlCheck(item.deltas, item.alpha, autoZGrid(item.deltas, item.pMax, 8));
    t.addRow({item.name, formatNumber(v.alphaExpected), formatNumber(v.alphaFitted), formatNumber(v.alphaStderr),
              formatNumber(v.constantBracket.lo), formatNumber(v.constantBracket.hi), v.pass ? "1" : "0"});
    c.metric(std::string("alpha[") + item.name + "]", v.alphaFitted);
    c.note(fmt("%s %.3f±%.3f %s", item.name, v.alphaFitted, v.alphaStderr, v.pass ? "ok" : "FAIL"));
    pass = pass && v.pass;
  }
  c.write("c07_dl_verdicts.csv", t);
  return pass;
}

// --- 8 ---------------------------------------------------------------------

// Frozen from the pilot (seed 5, 50 lattices): max D^(2)(10⁴) = 0.1046.
constexpr double kDiscrepancyThreshold = 0.105;

bool discrepancyDecay(Context& c) {
  const auto source = hecke(108);
  const auto family = RegionFamily::uniform(3, 2);
  const Psi psi = Psi::parse("poly:1.5");
  std::vector<double> grid = logGrid(100, 10000, 41);
  const int lattices = 50;
  std::vector<double> supLow(lattices), supHigh(lattices), dEnd(lattices);
  parallelTrials(lattices, c.workers(), [&](std::uint64_t i) {
    const auto pts = discrepancy(source(i), family, grid, psi);
    double lo = 0, hi = 0;
    for (const auto& p : pts) {
      const double stat = p.dFull / p.boundValue;
      if (p.M < 1000)
        lo = std::max(lo, stat);
      else
        hi = std::max(hi, stat);
    }
    supLow[i] = lo;
    supHigh[i] = hi;
    dEnd[i] = pts.back().dFull;
  });
  CsvTable t{{"trial", "supLow", "supHigh", "dAt1e4"}, {}};
  bool finite = true;
  int below = 0;
  for (int i = 0; i < lattices; ++i) {
    t.addRow({static_cast<double>(i), supLow[i], supHigh[i], dEnd[i]});
    finite = finite && std::isfinite(supLow[i]) && std::isfinite(supHigh[i]);
    below += dEnd[i] < kDiscrepancyThreshold;
  }
  c.write("c08_discrepancy.csv", t);
  const double qLow = quantile(supLow, 0.95), qHigh = quantile(supHigh, 0.95);
  c.metric("q95Low", qLow);
  c.metric("q95High", qHigh);
  c.metric("fractionBelow", below / static_cast<double>(lattices));
  c.note(fmt("q95 sup %.4f on [1e2,1e3) vs %.4f on [1e3,1e4]; D(1e4) < %.3f for %d/%d", qLow, qHigh,
             kDiscrepancyThreshold, below, lattices));
  return finite && qHigh <= qLow && below >= 0.9 * lattices;
}

// --- 9 ---------------------------------------------------------------------

BasisMatrix diagonalLattice(const std::vector<double>& d) {
  Matrix m = Matrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return BasisMatrix::fromRows(m);
}

bool exactOracles(Context& c) {
  CsvTable t{{"check", "value", "expected", "pass"}, {}};
  bool pass = true;
  auto record = [&](const std::string& name, double value, double expected, bool ok) {
    t.addRow({name, formatNumber(value), formatNumber(expected), ok ? "1" : "0"});
    if (!ok) c.note("failed: " + name);
    pass = pass && ok;
  };
  const BasisMatrix z3 = BasisMatrix::identity(3);

  const auto n18 = countShortVectors(z3, 1.5);
  record("count Z3 r=1.5", static_cast<double>(n18), 18, n18 == 18);
  const double V3 = 4.0 / 3.0 * M_PI;
  const TupleCounts pairs = tildeTransform(z3, RegionFamily::uniform(3, 2), V3 * 1.5 * 1.5 * 1.5);
  record("hat pairs r=1.5", static_cast<double>(pairs.hatValue), 324, pairs.hatValue == 324);
  record("independent pairs r=1.5", static_cast<double>(pairs.tildeValue), 288, pairs.tildeValue == 288);
  const TupleCounts unit = hatTransform(z3, RegionFamily::uniform(3, 2), V3);
  record("hat pairs r=1", static_cast<double>(unit.hatValue), 36, unit.hatValue == 36);

  const double s2z = sigmaEll(z3, 2).detValue;
  record("sigma2 Z3", s2z, 1, std::abs(s2z - 1) <= 1e-12);
  const double s2d = sigmaEll(diagonalLattice({0.5, 1, 2}), 2).detValue;
  record("sigma2 diag(0.5,1,2)", s2d, 0.5, std::abs(s2d - 0.5) <= 1e-12);
  const BasisMatrix h = hecke(109)(0);
  const double s1 = sigmaEll(h, 1).detValue, b1 = shortestVectorLength(h);
  record("sigma1 = beta1", s1, b1, std::abs(s1 - b1) <= 1e-12 * b1);

  // Diagonal orbits of orthogonal lattices: minima are the sorted row norms.
  const FlowSpec flow = FlowSpec::diagonal({1, 1, -2});
  for (int k = 1; k <= 17; ++k) {
    const double beta = shortestVectorLength(applyFlow(z3, flow, k));
    const double expected = std::exp(-2.0 * k);
    record(fmt("Z3 orbit beta1 t=%d", k), beta, expected, std::abs(beta / expected - 1) <= 1e-12);
  }
  const FlowSpec skew = FlowSpec::diagonal({0.3, -0.7, 0.4});
  const std::vector<double> d = {0.5, 1, 2};
  for (double tt : {-2.0, 1.25, 4.0}) {
    std::vector<double> expected(3);
    for (int i = 0; i < 3; ++i) expected[i] = d[i] * std::exp(skew.weights[i] * tt);
    std::sort(expected.begin(), expected.end());
    const auto betas = successiveMinima(applyFlow(diagonalLattice(d), skew, tt)).betas;
    for (int i = 0; i < 3; ++i)
      record(fmt("diag orbit beta%d t=%g", i + 1, tt), betas[i], expected[i],
             std::abs(betas[i] / expected[i] - 1) <= 1e-12);
  }

  std::mt19937_64 rng(trialEngine(109, 1));
  std::uniform_real_distribution<double> u(0.3, 2.0);
  double worst = 0;
  for (int p = 0; p < 100; ++p) {
    std::vector<double> b(2 + p % 3);
    for (double& x : b) x = u(rng);
    worst = std::max(worst, jacobianAB(b).relativeError);
  }
  record("Jacobian max relative residual", worst, 1e-5, worst <= 1e-5);

  // ∏_{i<j} aᵢ/aⱼ = ∏ bᵢ^{i(n−i)} with bᵢ = aᵢ/aᵢ₊₁, in exact rationals.
  using Q = boost::rational<long long>;
  std::uniform_int_distribution<int> num(1, 9);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + trial % 3;
    std::vector<Q> a(n);
    Q prod = 1;
    for (int i = 0; i + 1 < n; ++i) {
      a[i] = Q(num(rng), num(rng));
      prod *= a[i];
    }
    a[n - 1] = 1 / prod;
    Q lhs = 1, rhs = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) lhs *= a[i] / a[j];
    for (int i = 1; i < n; ++i)
      for (int e = 0; e < i * (n - i); ++e) rhs *= a[i - 1] / a[i];
    mismatches += lhs != rhs;
  }
  record("Haar density identity mismatches", mismatches, 0, mismatches == 0);

  c.write("c09_exact_oracles.csv", t);
  c.note(fmt("%zu checks", t.rows.size()));
  return pass;
}

// --- 10 --------------------------------------------------------------------

bool transferenceInvariants(Context& c) {
  const auto source = hecke(110);
  const std::uint64_t trials = 100000;
  const ProductBracket bracket = minkowskiProductBracket(3);
  std::vector<char> transference(trials), minkowski(trials);
  std::vector<double> worstProduct(trials);
  parallelTrials(trials, c.workers(), [&](std::uint64_t i) {
    const BasisMatrix b = source(i);
    const auto p = successiveMinima(b).betas;
    const auto d = successiveMinima(dualBasis(b)).betas;
    bool tBad = false;
    double lowest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
      const double prod = p[j] * d[2 - j];
      lowest = std::min(lowest, prod);
      tBad |= prod < 1 - 1e-9;
    }
    const double pp = p[0] * p[1] * p[2], dp = d[0] * d[1] * d[2];
    const double slack = 1e-9;
    minkowski[i] = pp < bracket.lower * (1 - slack) || pp > bracket.upper * (1 + slack) ||
                   dp < bracket.lower * (1 - slack) || dp > bracket.upper * (1 + slack);
    transference[i] = tBad;
    worstProduct[i] = lowest;
  });
  std::uint64_t tv = 0, mv = 0;
  double lowest = std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < trials; ++i) {
    tv += transference[i];
    mv += minkowski[i];
    lowest = std::min(lowest, worstProduct[i]);
  }
  CsvTable t{{"quantity", "value"}, {}};
  t.addRow({"trials", std::to_string(trials)});
  t.addRow({"transferenceViolations", std::to_string(tv)});
  t.addRow({"minkowskiViolations", std::to_string(mv)});
  t.addRow({"minTransferenceProduct", formatNumber(lowest)});
  c.write("c10_invariants.csv", t);
  c.metric("minTransferenceProduct", lowest);
  c.note(fmt("%llu transference and %llu Minkowski violations in %llu; min product %.6f",
             static_cast<unsigned long long>(tv), static_cast<unsigned long long>(mv),
             static_cast<unsigned long long>(trials), lowest));
  return tv == 0 && mv == 0;
}

// --- 11 --------------------------------------------------------------------

bool dualitySymmetry(Context& c) {
  const DualitySymmetry d = dualitySymmetryCheck(hecke(111), 3, 100000, c.workers());
  CsvTable t{{"j", "ks", "critical"}, {}};
  for (std::size_t j = 0; j < d.ksStatistics.size(); ++j) {
    t.addRow({static_cast<double>(j + 1), d.ksStatistics[j], d.criticalValue});
    c.metric(fmt("ks[%zu]", j + 1), d.ksStatistics[j]);
    c.note(fmt("KS%zu %.5f", j + 1, d.ksStatistics[j]));
  }
  c.write("c11_duality.csv", t);
  c.note(fmt("critical %.5f, %llu transference violations", d.criticalValue,
             static_cast<unsigned long long>(d.transferenceViolations)));
  return d.pass;
}

// --- 12 --------------------------------------------------------------------

bool logLaws(Context& c) {
  bool pass = true;
  const FlowSpec flow = FlowSpec::diagonal({1, 1, -2});
  const ObservableSpec obs{ObservableSpec::Kind::negLogBeta, 1, 2.0};

  // Closed-form orbit: Δ(ℤ³g_k) = 2k, τ_z = max(2, ⌈z/2⌉).
  const BasisMatrix z3 = BasisMatrix::identity(3);
  std::vector<double> times, zs;
  for (int k = 2; k <= 17; ++k) times.push_back(k);
  for (double z = 0.5; z < 34; z += 1.0) zs.push_back(z);
  const FlowTrace trace = logLawTrace(z3, flow, obs, times);
  int bad = 0;
  for (std::size_t i = 0; i < times.size(); ++i) bad += std::abs(trace.deltaValues[i] / (2 * times[i]) - 1) > 1e-12;
  const auto taus = hittingTimes(z3, flow, obs, zs, 17);
  for (std::size_t i = 0; i < zs.size(); ++i)
    bad += taus[i] != std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(zs[i] / 2)));
  c.note(fmt("closed-form orbit mismatches %d", bad));
  pass = pass && bad == 0;

  // Bands on the median over 20 lattices.
  const std::vector<double> tailSample = sampleRaw(hecke(212), obs, 3, 100000, c.workers());
  const EventSpec ev = EventSpec::parse("betaLeq:1");
  const TailEstimator tail = [&](double z) { return tailFromSample(tailSample, ev, {ev.fromZ(z)}).front(); };
  const auto source = rotatedSource(hecke(112), 112);
  const auto grid = geometricTimeGrid(1e4, 200);
  const std::vector<double> kyLevels = {1.0, 1.5, 2.0};
  const int lattices = 20;
  std::vector<double> ratio(lattices);
  std::vector<std::vector<double>> ky(kyLevels.size(), std::vector<double>(lattices));
  parallelTrials(lattices, c.workers(), [&](std::uint64_t i) {
    const BasisMatrix b = source(i);
    ratio[i] = logLawTrace(b, flow, obs, grid).runningRatioSup.back();
    const auto pts = kelmerYuRatio(b, flow, obs, kyLevels, tail, 1000000);
    for (std::size_t l = 0; l < kyLevels.size(); ++l) ky[l][i] = pts[l].ratio;
  });
  CsvTable t{{"trial", "runningRatioSup", "ky1", "ky1.5", "ky2"}, {}};
  for (int i = 0; i < lattices; ++i) t.addRow({static_cast<double>(i), ratio[i], ky[0][i], ky[1][i], ky[2][i]});
  c.write("c12_log_laws.csv", t);
  const double medRatio = quantile(ratio, 0.5);
  c.metric("medianRunningRatioSup", medRatio);
  c.note(fmt("median runningRatioSup %.3f in [0, 1]", medRatio));
  pass = pass && medRatio >= 0 && medRatio <= 3.0 / 3;
  for (std::size_t l = 0; l < kyLevels.size(); ++l) {
    const double m = quantile(ky[l], 0.5);
    c.metric(fmt("medianKY[z=%g]", kyLevels[l]), m);
    c.note(fmt("median KY(z=%g) %.3f in [0.4, 2.5]", kyLevels[l], m));
    pass = pass && m >= 0.4 && m <= 2.5;
  }
  return pass;
}

// --- 13 --------------------------------------------------------------------

bool borelCantelli(Context& c) {
  const std::uint64_t K = 100000;
  const int lattices = 100;
  const FlowSpec flow = FlowSpec::diagonal({1, 1, -2});
  const ObservableSpec obs{ObservableSpec::Kind::negLogBeta, 1, 2.0};
  const auto divergent = ZExpression::parse("(1/3)*log(k)").sequence(K);
  const auto convergent = ZExpression::parse("(1/3)*log(k) + (2/3)*log(log(k))").sequence(K);
  const auto source = rotatedSource(hecke(113), 113);
  std::vector<std::vector<HitReport>> reports(lattices);
  parallelTrials(lattices, c.workers(), [&](std::uint64_t i) {
    reports[i] = borelCantelliHits(source(i), flow, obs, {divergent, convergent});
  });
  CsvTable t{{"trial", "hitsDivergent", "lastDivergent", "hitsConvergent", "lastConvergent"}, {}};
  int late = 0;
  std::vector<double> lastConvergent;
  for (int i = 0; i < lattices; ++i) {
    const auto& d = reports[i][0];
    const auto& v = reports[i][1];
    const double lastD = d.hits.empty() ? 0.0 : static_cast<double>(d.hits.back());
    const double lastV = v.hits.empty() ? 0.0 : static_cast<double>(v.hits.back());
    late += lastD > K / 2.0;
    lastConvergent.push_back(lastV);
    t.addRow({static_cast<double>(i), static_cast<double>(d.hits.size()), lastD, static_cast<double>(v.hits.size()),
              lastV});
  }
  c.write("c13_borel_cantelli.csv", t);
  const double median = quantile(lastConvergent, 0.5);
  const bool a = late >= 0.95 * lattices;
  const bool b = median < K / 10.0;
  c.metric("fractionLate", late / static_cast<double>(lattices));
  c.metric("medianLastConvergent", median);
  c.note(fmt("divergent: %d/%d with a hit beyond K/2 (need 95) %s", late, lattices, a ? "ok" : "FAIL"));
  c.note(fmt("convergent: median last hit %g (need < %g) %s", median, K / 10.0, b ? "ok" : "FAIL"));
  c.note(fmt("series regimes %s / %s", regimeName(reports[0][0].regime), regimeName(reports[0][1].regime)));
  return a && b && reports[0][0].regime == Regime::divergent && reports[0][1].regime == Regime::convergent;
}

// --- 14 --------------------------------------------------------------------

bool reproducibility(Context& c) {
  const std::vector<int> ids = {1, 2, 8, 9, 11, 12};
  const fs::path root = c.options.outputDir.empty()
                            ? fs::temp_directory_path() / fmt("latlab-repro-%llu", static_cast<unsigned long long>(
                                                                                     std::chrono::steady_clock::now()
                                                                                         .time_since_epoch()
                                                                                         .count()))
                            : fs::path(c.options.outputDir) / "c14_repro";
  int fileMismatches = 0, metricMismatches = 0, files = 0;
  for (int id : ids) {
    AcceptanceOptions a{(root / "run1").string(), 1};
    AcceptanceOptions b{(root / "run2").string(), 2};
    const CriterionResult ra = runCriterion(id, a);
    const CriterionResult rb = runCriterion(id, b);
    if (ra.files != rb.files || ra.metrics.size() != rb.metrics.size()) {
      ++fileMismatches;
      continue;
    }
    for (const auto& f : ra.files) {
      ++files;
      if (readFile((root / "run1" / f).string()) != readFile((root / "run2" / f).string())) {
        ++fileMismatches;
        c.note("differs: " + f);
      }
    }
    for (std::size_t m = 0; m < ra.metrics.size(); ++m) {
      const double x = ra.metrics[m].second, y = rb.metrics[m].second;
      if (!(std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)))) ++metricMismatches;
    }
  }
  if (c.options.outputDir.empty()) fs::remove_all(root);
  c.note(fmt("criteria 1,2,8,9,11,12 rerun with 1 and 2 workers: %d/%d CSVs identical, %d aggregate mismatches",
             files - fileMismatches, files, metricMismatches));
  return fileMismatches == 0 && metricMismatches == 0;
}

struct Criterion {
  const char* title;
  bool (*run)(Context&);
  double budgetSeconds;  // 0: none stated
};

const Criterion kCriteria[kCriterionCount] = {
    {"Siegel mean value", siegelMeanValue, 120},
    {"tuple mean value", tupleMeanValue, 300},
    {"moment gap", momentGap, 600},
    {"lower-tail exponents", lowerTails, 1800},
    {"upper-tail exponents", upperTails, 1800},
    {"zeta tail exponent", zetaTail, 1200},
    {"DL verdicts", dlVerdicts, 0},
    {"discrepancy decay", discrepancyDecay, 1800},
    {"exact oracles", exactOracles, 60},
    {"transference and Minkowski invariants", transferenceInvariants, 600},
    {"duality symmetry", dualitySymmetry, 0},
    {"log laws", logLaws, 0},
    {"Borel-Cantelli", borelCantelli, 2400},
    {"reproducibility", reproducibility, 0},
};

}  // namespace

std::string criterionTitle(int id) {
  if (id < 1 || id > kCriterionCount) throw ConfigError("criteria are numbered 1..14");
  return kCriteria[id - 1].title;
}

CriterionResult runCriterion(int id, const AcceptanceOptions& options) {
  CriterionResult result;
  result.id = id;
  result.title = criterionTitle(id);
  Context ctx{options, result};
  const auto start = std::chrono::steady_clock::now();
  try {
    result.pass = kCriteria[id - 1].run(ctx);
  } catch (const Error& e) {
    result.pass = false;
    ctx.note(std::string(e.kind()) + ": " + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double budget = kCriteria[id - 1].budgetSeconds;
  if (budget > 0 && result.seconds > budget) {
    result.pass = false;
    ctx.note(fmt("runtime %.0f s over the %.0f s budget", result.seconds, budget));
  }
  return result;
}

std::string resultLine(const CriterionResult& r) {
  return fmt("%s [%2d] %s (%.1f s): ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds) + r.detail;
}

}  // namespace latlab
