#include "latlab/tails.hpp"

#include <algorithm>
#include <cmath>

#include "latlab/dual.hpp"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/parallel.hpp"

namespace latlab {

namespace {

struct EventName {
  EventSpec::Kind kind;
  const char* name;
  ObservableSpec::Kind observable;
};

constexpr EventName kEvents[] = {
    {EventSpec::Kind::betaLeq, "betaLeq", ObservableSpec::Kind::negLogBeta},
    {EventSpec::Kind::betaProdPrefixLeq, "betaProdPrefixLeq", ObservableSpec::Kind::negLogBetaProdPrefix},
    {EventSpec::Kind::betaGeq, "betaGeq", ObservableSpec::Kind::logBeta},
    {EventSpec::Kind::betaProdSuffixGeq, "betaProdSuffixGeq", ObservableSpec::Kind::logBetaProdSuffix},
    {EventSpec::Kind::zetaGeq, "zetaGeq", ObservableSpec::Kind::logZeta},
};

}  // namespace

EventSpec EventSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("event needs a parameter: '" + text + "'");
  const std::string head = text.substr(0, colon);
  for (const auto& e : kEvents) {
    if (head != e.name) continue;
    // Reuse the observable grammar for the parameter.
    std::string obsName;
    for (const auto& f : kEvents)
      if (f.kind == e.kind) obsName = ObservableSpec{f.observable, 1, 2.0}.name();
    const ObservableSpec o = ObservableSpec::parse(obsName.substr(0, obsName.find(':')) + text.substr(colon));
    EventSpec ev;
    ev.kind = e.kind;
    ev.ell = o.ell;
    ev.s = o.s;
    return ev;
  }
  throw ConfigError("unknown event '" + head + "'");
}

std::string EventSpec::name() const {
  for (const auto& e : kEvents) {
    if (e.kind != kind) continue;
    const std::string o = observable().name();
    return std::string(e.name) + o.substr(o.find(':'));
  }
  return "?";
}

ObservableSpec EventSpec::observable() const {
  for (const auto& e : kEvents)
    if (e.kind == kind) return ObservableSpec{e.observable, ell, s};
  return {};
}

double EventSpec::toZ(double threshold) const { return lowerTail() ? -std::log(threshold) : std::log(threshold); }
double EventSpec::fromZ(double z) const { return lowerTail() ? std::exp(-z) : std::exp(z); }

std::vector<double> sampleRaw(const LatticeSource& source, const ObservableSpec& observable, int dim,
                              std::uint64_t trials, int workers) {
  observable.validate(dim);
  std::vector<double> raw(trials);
  parallelTrials(trials, workers, [&](std::uint64_t i) { raw[i] = observable.rawValue(source(i)); });
  return raw;
}

std::vector<TailEstimate> tailFromSample(const std::vector<double>& raw, const EventSpec& event,
                                         const std::vector<double>& grid) {
  std::vector<TailEstimate> out;
  for (double t : grid) {
    if (!(t > 0)) throw ConfigError("tail thresholds must be positive");
    std::uint64_t hits = 0;
    for (double x : raw) hits += event.contains(x, t);
    TailEstimate e;
    e.threshold = t;
    e.trials = raw.size();
    e.hits = hits;
    e.pHat = raw.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(raw.size());
    e.ci = wilsonInterval(hits, raw.size());
    out.push_back(e);
  }
  return out;
}

std::vector<TailEstimate> estimateTail(const LatticeSource& source, int dim, const EventSpec& event,
                                       const std::vector<double>& grid, std::uint64_t trials, int workers) {
  if (trials < 10000) throw ConfigError("estimateTail needs at least 10^4 trials");
  return tailFromSample(sampleRaw(source, event.observable(), dim, trials, workers), event, grid);
}

namespace {

// log pHat against x over the estimates with at least 20 hits.
ExponentFit fitLogP(const std::vector<double>& xs, const std::vector<TailEstimate>& estimates) {
  std::vector<double> x, y, w;
  ExponentFit fit;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const auto& e = estimates[i];
    if (e.hits < 20) continue;
    const double h = 0.5 * (std::log(e.ci.hi) - std::log(e.ci.lo));
    if (!(h > 0) || !std::isfinite(h)) continue;
    x.push_back(xs[i]);
    y.push_back(std::log(e.pHat));
    w.push_back(1.0 / (h * h));
    fit.gridUsed.push_back(e.threshold);
  }
  if (x.size() < 4) throw InsufficientData("exponent fit needs at least 4 grid points with 20 or more hits");
  const LinearFit lf = weightedLinearFit(x, y, w);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.slopeStderr = lf.slopeStderr;
  fit.r2 = lf.r2;
  return fit;
}

}  // namespace

ExponentFit fitExponent(const std::vector<TailEstimate>& estimates) {
  std::vector<double> xs;
  for (const auto& e : estimates) {
    if (!(e.threshold > 0)) throw ConfigError("tail thresholds must be positive");
    xs.push_back(std::log(e.threshold));
  }
  return fitLogP(xs, estimates);
}

std::vector<double> autoZGrid(const std::vector<double>& deltas, double pMax, int points) {
  if (deltas.empty() || points < 2) throw InsufficientData("auto grid needs samples and at least 2 points");
  const double pMin = std::max(1e-5, 50.0 / static_cast<double>(deltas.size()));
  if (!(pMin < pMax)) throw InsufficientData("too few trials for the requested tail window");
  std::vector<double> sorted = deltas;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) {
    const double p = pMax * std::pow(pMin / pMax, static_cast<double>(i) / (points - 1));
    const double z = quantile(sorted, 1.0 - p);
    if (grid.empty() || z > grid.back()) grid.push_back(z);
  }
  return grid;
}

DLVerdict dlCheck(const std::vector<double>& deltas, double alphaExpected, const std::vector<double>& zGrid) {
  DLVerdict v;
  v.alphaExpected = alphaExpected;
  std::vector<double> zs;
  for (double z : zGrid) {
    std::uint64_t hits = 0;
    for (double d : deltas) hits += d >= z;
    TailEstimate e;
    e.threshold = z;
    e.trials = deltas.size();
    e.hits = hits;
    e.pHat = deltas.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(deltas.size());
    e.ci = wilsonInterval(hits, deltas.size());
    v.estimates.push_back(e);
    zs.push_back(z);
  }
  const ExponentFit fit = fitLogP(zs, v.estimates);
  v.alphaFitted = -fit.slope;
  v.alphaStderr = fit.slopeStderr;
  v.pass = std::abs(v.alphaFitted - alphaExpected) <= 3 * v.alphaStderr + 0.1 * alphaExpected;
  v.constantBracket = {std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& e : v.estimates) {
    if (e.hits < 20) continue;
    const double c = e.pHat * std::exp(alphaExpected * e.threshold);
    v.constantBracket.lo = std::min(v.constantBracket.lo, c);
    v.constantBracket.hi = std::max(v.constantBracket.hi, c);
  }
  return v;
}

DLVerdict dlCheck(const LatticeSource& source, int dim, const ObservableSpec& observable, std::uint64_t trials,
                  int workers, std::vector<double> zGrid) {
  if (trials < 10000) throw ConfigError("dlCheck needs at least 10^4 trials");
  const std::vector<double> raw = sampleRaw(source, observable, dim, trials, workers);
  std::vector<double> deltas(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) deltas[i] = observable.negated() ? -std::log(raw[i]) : std::log(raw[i]);
  if (zGrid.empty()) {
    const double pMax = observable.kind == ObservableSpec::Kind::logZeta ? 0.05 : 0.2;
    zGrid = autoZGrid(deltas, pMax, 8);
  }
  return dlCheck(deltas, observable.expectedAlpha(dim), zGrid);
}

DualitySymmetry dualitySymmetryCheck(const LatticeSource& source, int dim, std::uint64_t trials, int workers) {
  if (trials < 2) throw ConfigError("duality check needs at least 2 trials");
  std::vector<double> primal(trials * dim), dual(trials * dim), worst(trials);
  std::vector<char> violated(trials);
  parallelTrials(trials, workers, [&](std::uint64_t i) {
    const BasisMatrix b = source(i);
    if (b.dim() != dim) throw ConfigError("sampler dimension mismatch");
    const auto p = successiveMinima(b).betas;
    const auto d = successiveMinima(dualBasis(b)).betas;
    double w = 0;
    bool bad = false;
    for (int j = 0; j < dim; ++j) {
      primal[i * dim + j] = p[j];
      dual[i * dim + j] = d[j];
      const double prod = p[j] * d[dim - 1 - j];
      w = std::max(w, prod);
      bad |= prod < 1 - 1e-9;
    }
    worst[i] = w;
    violated[i] = bad;
  });
  DualitySymmetry out;
  for (std::uint64_t i = 0; i < trials; ++i) {
    out.transferenceViolations += violated[i];
    out.maxTransferenceProduct = std::max(out.maxTransferenceProduct, worst[i]);
  }
  const std::size_t nEven = (trials + 1) / 2, nOdd = trials / 2;
  out.criticalValue = ksCriticalValue(nEven, nOdd, 0.01);
  out.pass = out.transferenceViolations == 0;
  for (int j = 0; j < dim; ++j) {
    std::vector<double> a, b;
    for (std::uint64_t i = 0; i < trials; ++i) (i % 2 == 0 ? a : b).push_back(i % 2 == 0 ? primal[i * dim + j] : dual[i * dim + j]);
    out.ksStatistics.push_back(ksStatistic(std::move(a), std::move(b)));
    out.pass = out.pass && out.ksStatistics.back() < out.criticalValue;
  }
  return out;
}

std::optional<std::vector<Interval>> siegelPilotBracket(int dim) {
  if (dim != 3) return std::nullopt;
  return std::vector<Interval>{{1.0 - 1e-9, 4.0 + 1e-9}, {0.5 - 1e-9, 2.0 + 1e-9}, {0.25 - 1e-9, 1.0 + 1e-9}};
}

RatioScan siegelRatioScan(const SamplerConfig& cfg, std::uint64_t trials, int workers) {
  if (cfg.method != SamplerMethod::siegelIwasawa) throw ConfigError("ratio scan needs the siegel-iwasawa sampler");
  validateConfig(cfg);
  const int n = cfg.dim;
  std::vector<double> ratios(trials * n);
  parallelTrials(trials, workers, [&](std::uint64_t i) {
    SamplerConfig c = cfg;
    c.trialIndex = i;
    const auto s = sampleSiegelIwasawa(c, c.truncation);
    const auto a = iwasawaDecompose(s.g).a;
    const auto betas = successiveMinima(s.basis).betas;
    for (int l = 0; l < n; ++l) ratios[i * n + l] = a[l] / betas[l];
  });
  RatioScan scan;
  scan.trials = trials;
  scan.minRatio.assign(n, std::numeric_limits<double>::infinity());
  scan.maxRatio.assign(n, 0.0);
  const auto bracket = siegelPilotBracket(n);
  scan.bracketKnown = bracket.has_value();
  for (std::uint64_t i = 0; i < trials; ++i) {
    bool outside = false;
    for (int l = 0; l < n; ++l) {
      const double r = ratios[i * n + l];
      scan.minRatio[l] = std::min(scan.minRatio[l], r);
      scan.maxRatio[l] = std::max(scan.maxRatio[l], r);
      if (bracket) outside |= r < (*bracket)[l].lo || r > (*bracket)[l].hi;
    }
    scan.violations += outside;
  }
  return scan;
}

}  // namespace latlab
