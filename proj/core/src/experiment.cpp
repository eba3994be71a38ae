#include "latlab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>

#include "json.hpp"
#include "latlab/acceptance.hpp"
#include "latlab/counting.hpp"
#include "latlab/csv.hpp"
#include "latlab/dynamics.hpp"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/rng.hpp"
#include "latlab/tails.hpp"
#include "latlab/zeta.hpp"
#include "latlab/zexpr.hpp"

#ifndef LATLAB_VERSION
#define LATLAB_VERSION "unknown"
#endif

namespace latlab {

namespace {

namespace fs = std::filesystem;

struct Run {
  const ExperimentConfig& cfg;
  RunManifest& manifest;
  int workers;

  void summary(const std::string& k, double v) { manifest.summary.emplace_back(k, v); }
  void label(const std::string& k, const std::string& v) { manifest.labels.emplace_back(k, v); }
  void check(const std::string& k, bool v) { manifest.checks.emplace_back(k, v); }
  void output(const std::string& bytes) {
    if (cfg.output.empty()) return;
    writeFile(cfg.output, bytes);
    manifest.dataFiles.push_back(cfg.output);
  }
  void output(const CsvTable& t) { output(t.str()); }
  void ranges(std::uint64_t trials) { manifest.workerRanges = partitionTrials(trials, workers); }

  bool fixedBasis() const { return !cfg.basis.empty(); }
  BasisMatrix loadBasis() const { return basisFromJson(readFile(cfg.basis)); }
  // The fixed basis, or trial 0 of the configured stream.
  BasisMatrix single() const { return fixedBasis() ? loadBasis() : cfg.source()(0); }
  // Lattices 0..trials−1, or just the fixed basis.
  LatticeSource stream(std::uint64_t& count) const {
    if (fixedBasis()) {
      count = 1;
      const BasisMatrix b = loadBasis();
      return [b](std::uint64_t) { return b; };
    }
    count = cfg.trials;
    return cfg.source();
  }
  RegionFamily family() const {
    if (cfg.volumes.empty()) return RegionFamily::uniform(cfg.dim, cfg.ell);
    RegionFamily f;
    f.dim = cfg.dim;
    f.ell = cfg.ell;
    f.coordinateVolumes = cfg.volumes;
    f.validate();
    return f;
  }
  FlowSpec flowSpec() const {
    if (cfg.flow.kind == "diagonal") return FlowSpec::diagonal(cfg.flow.weights);
    const int n = cfg.dim;
    if (static_cast<int>(cfg.flow.nilpotent.size()) != n) throw ConfigError("nilpotent generator must be n×n");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(cfg.flow.nilpotent[i].size()) != n) throw ConfigError("nilpotent generator must be n×n");
      for (int j = 0; j < n; ++j) m(i, j) = cfg.flow.nilpotent[i][j];
    }
    return FlowSpec::unipotent(m);
  }
};

std::vector<std::string> numberedHeader(const std::string& first, const std::string& prefix, int n) {
  std::vector<std::string> h{first};
  for (int i = 1; i <= n; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

void runSample(Run& r) {
  std::uint64_t count = 0;
  const auto source = r.stream(count);
  std::vector<std::string> lines(count);
  parallelTrials(count, r.workers, [&](std::uint64_t i) { lines[i] = basisToJson(source(i)); });
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  r.ranges(count);
  r.summary("lattices", static_cast<double>(count));
  r.output(out);
}

void runMinima(Run& r) {
  std::uint64_t count = 0;
  const auto source = r.stream(count);
  const int n = r.cfg.dim;
  std::vector<std::vector<double>> betas(count);
  parallelTrials(count, r.workers, [&](std::uint64_t i) { betas[i] = successiveMinima(source(i)).betas; });
  auto header = numberedHeader("trial", "beta", n);
  header.push_back("product");
  CsvTable t{header, {}};
  const ProductBracket bracket = minkowskiProductBracket(n);
  bool inside = true;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<double> v{static_cast<double>(i)};
    double prod = 1;
    for (double b : betas[i]) {
      v.push_back(b);
      prod *= b;
    }
    v.push_back(prod);
    inside = inside && prod >= bracket.lower * (1 - 1e-9) && prod <= bracket.upper * (1 + 1e-9);
    t.addRow(v);
  }
  r.ranges(count);
  r.check("minkowskiBracket", inside);
  r.output(t);
}

void runZeta(Run& r) {
  std::uint64_t count = 0;
  const auto source = r.stream(count);
  ZetaOptions opt;
  opt.tol = r.cfg.tol;
  std::vector<ZetaResult> res(count);
  parallelTrials(count, r.workers, [&](std::uint64_t i) { res[i] = epsteinZeta(source(i), r.cfg.s, opt); });
  CsvTable t{{"trial", "value", "tailBound", "radiusUsed"}, {}};
  for (std::uint64_t i = 0; i < count; ++i)
    t.addRow({static_cast<double>(i), res[i].value, res[i].tailBound, res[i].radiusUsed});
  if (count == 1) {
    r.summary("value", res[0].value);
    r.summary("tailBound", res[0].tailBound);
    r.summary("radiusUsed", res[0].radiusUsed);
  }
  r.ranges(count);
  r.output(t);
}

void runCount(Run& r) {
  std::uint64_t count = 0;
  const auto source = r.stream(count);
  const auto grid = parseGrid(r.cfg.grid);
  const RegionFamily family = r.family();
  std::vector<std::vector<TupleCounts>> res(count);
  parallelTrials(count, r.workers, [&](std::uint64_t i) { res[i] = tupleCountsOnGrid(source(i), family, grid); });
  CsvTable t{{"trial", "M", "hat", "tilde"}, {}};
  for (std::uint64_t i = 0; i < count; ++i)
    for (std::size_t k = 0; k < grid.size(); ++k)
      t.addRow({std::to_string(i), formatNumber(grid[k]), std::to_string(res[i][k].hatValue),
                std::to_string(res[i][k].tildeValue)});
  r.ranges(count);
  r.output(t);
}

void runDiscrepancy(Run& r) {
  const auto grid = parseGrid(r.cfg.grid);
  const auto pts = discrepancy(r.single(), r.family(), grid, Psi::parse(r.cfg.psi));
  CsvTable t{{"M", "dFull", "dIndep", "boundValue"}, {}};
  double sup = 0;
  for (const auto& p : pts) {
    t.addRow({p.M, p.dFull, p.dIndep, p.boundValue});
    if (p.M > 1) sup = std::max(sup, p.dFull / p.boundValue);
  }
  r.summary("supNormalizedDiscrepancy", sup);
  r.output(t);
}

void runMoments(Run& r) {
  const auto grid = parseGrid(r.cfg.grid);
  const auto rep = momentGapEstimate(r.cfg.source(), r.cfg.dim, r.cfg.ell, grid, r.cfg.trials, r.workers);
  CsvTable t{{"V", "gapOverPower", "standardError"}, {}};
  for (const auto& p : rep.points) t.addRow({p.V, p.gapOverPower, p.standardError});
  r.ranges(r.cfg.trials * grid.size());
  r.summary("mannKendallS", rep.trend.statistic);
  r.summary("mannKendallP", rep.trend.pValue);
  r.check("bounded", rep.bounded);
  r.output(t);
}

void runTails(Run& r) {
  const EventSpec ev = EventSpec::parse(r.cfg.event);
  const auto est =
      estimateTail(r.cfg.source(), r.cfg.dim, ev, parseGrid(r.cfg.grid), r.cfg.trials, r.workers);
  CsvTable t{{"threshold", "pHat", "ciLo", "ciHi", "trials"}, {}};
  for (const auto& e : est) t.addRow({e.threshold, e.pHat, e.ci.lo, e.ci.hi, static_cast<double>(e.trials)});
  try {
    const ExponentFit fit = fitExponent(est);
    r.summary("slope", fit.slope);
    r.summary("slopeStderr", fit.slopeStderr);
    r.summary("r2", fit.r2);
  } catch (const InsufficientData& e) {
    r.label("fit", e.what());
  }
  r.ranges(r.cfg.trials);
  r.output(t);
}

void runDlCheck(Run& r) {
  const ObservableSpec obs = ObservableSpec::parse(r.cfg.observable);
  const std::vector<double> grid = r.cfg.grid.empty() ? std::vector<double>{} : parseGrid(r.cfg.grid);
  const DLVerdict v = dlCheck(r.cfg.source(), r.cfg.dim, obs, r.cfg.trials, r.workers, grid);
  nlohmann::ordered_json j;
  j["observable"] = obs.name();
  j["alphaExpected"] = v.alphaExpected;
  j["alphaFitted"] = v.alphaFitted;
  j["alphaStderr"] = v.alphaStderr;
  j["pass"] = v.pass;
  j["constantBracket"] = {v.constantBracket.lo, v.constantBracket.hi};
  for (const auto& e : v.estimates)
    j["estimates"].push_back(
        {{"z", e.threshold}, {"pHat", e.pHat}, {"ciLo", e.ci.lo}, {"ciHi", e.ci.hi}, {"hits", e.hits}});
  r.summary("alphaFitted", v.alphaFitted);
  r.summary("alphaStderr", v.alphaStderr);
  r.check("dl", v.pass);
  r.ranges(r.cfg.trials);
  r.output(j.dump(2) + "\n");
}

void runFlow(Run& r) {
  const auto trace = logLawTrace(r.single(), r.flowSpec(), ObservableSpec::parse(r.cfg.observable),
                                 geometricTimeGrid(r.cfg.tMax, r.cfg.tPoints));
  CsvTable t{{"t", "delta", "runningRatio"}, {}};
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    t.addRow({trace.times[i], trace.deltaValues[i], trace.runningRatioSup[i]});
  r.summary("finalRunningRatioSup", trace.runningRatioSup.back());
  r.output(t);
}

void runHits(Run& r) {
  std::uint64_t count = 0;
  const auto source = r.stream(count);
  const auto z = ZExpression::parse(r.cfg.zSequence).sequence(r.cfg.K);
  const ObservableSpec obs = ObservableSpec::parse(r.cfg.observable);
  const FlowSpec flow = r.flowSpec();
  std::vector<HitReport> reports(count);
  parallelTrials(count, r.workers, [&](std::uint64_t i) { reports[i] = borelCantelliHits(source(i), flow, obs, z); });
  CsvTable t{{"trial", "hitCount", "firstHit", "lastHit"}, {}};
  double total = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto& h = reports[i].hits;
    total += static_cast<double>(h.size());
    t.addRow({static_cast<double>(i), static_cast<double>(h.size()), h.empty() ? 0.0 : static_cast<double>(h.front()),
              h.empty() ? 0.0 : static_cast<double>(h.back())});
  }
  r.label("regime", regimeName(reports.front().regime));
  r.summary("blockExponent", reports.front().blockExponent);
  r.summary("estimatedMeasureSum", reports.front().estimatedMeasureSum);
  r.summary("meanHits", total / static_cast<double>(count));
  r.ranges(count);
  r.output(t);
}

void runIwasawaCheck(Run& r) {
  const int n = r.cfg.dim;
  const std::uint64_t trials = r.cfg.trials;
  std::vector<JacobianCheck> jac(trials);
  std::vector<double> recon(trials), identity(trials);
  SamplerConfig sc = r.cfg.samplerConfig();
  sc.method = SamplerMethod::siegelIwasawa;
  parallelTrials(trials, r.workers, [&](std::uint64_t i) {
    auto rng = trialEngine(r.cfg.seed, i);
    std::uniform_real_distribution<double> u(0.3, 2.0);
    std::vector<double> b(n - 1);
    for (double& x : b) x = u(rng);
    jac[i] = jacobianAB(b);
    const auto a = aFromB(b);
    identity[i] = std::abs(haarDensityFromB(b) / haarDensity(a) - 1);
    SamplerConfig c = sc;
    c.trialIndex = i;
    recon[i] = iwasawaDecompose(sampleSiegelIwasawa(c, c.truncation).g).reconstructionError;
  });
  CsvTable t{{"point", "numeric", "closedForm", "relativeError", "reconstructionError", "identityResidual"}, {}};
  double worstJ = 0, worstR = 0, worstI = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    t.addRow({static_cast<double>(i), jac[i].numeric, jac[i].closedForm, jac[i].relativeError, recon[i], identity[i]});
    worstJ = std::max(worstJ, jac[i].relativeError);
    worstR = std::max(worstR, recon[i]);
    worstI = std::max(worstI, identity[i]);
  }
  r.summary("maxJacobianRelativeError", worstJ);
  r.summary("maxReconstructionError", worstR);
  r.summary("maxIdentityResidual", worstI);
  r.check("identity", worstI <= 1e-12);
  r.check("jacobian", worstJ <= 1e-5);
  r.check("reconstruction", worstR <= 1e-9);
  r.ranges(trials);
  r.output(t);
}

void runValidateSampler(Run& r) {
  CsvTable t{{"volume", "meanCount", "standardError", "trials", "pass"}, {}};
  const auto source = r.cfg.source();
  for (double V : parseGrid(r.cfg.grid)) {
    const SamplerValidation v = validateSampler(source, V, r.cfg.trials, r.workers);
    t.addRow({V, v.meanCount, v.standardError, static_cast<double>(v.trials), v.pass ? 1.0 : 0.0});
    r.check("V=" + formatNumber(V), v.pass);
  }
  r.ranges(r.cfg.trials);
  r.output(t);
}

void runAccept(Run& r, const std::function<void(const std::string&)>& progress) {
  std::vector<int> ids = r.cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  AcceptanceOptions opt{r.cfg.output, r.workers};
  CsvTable t{{"criterion", "title", "pass", "seconds", "detail"}, {}};
  for (int id : ids) {
    const CriterionResult c = runCriterion(id, opt);
    if (progress) progress(resultLine(c));
    t.addRow({std::to_string(id), c.title, c.pass ? "PASS" : "FAIL", formatNumber(c.seconds), c.detail});
    r.check("criterion " + std::to_string(id), c.pass);
    for (const auto& m : c.metrics) r.summary("c" + std::to_string(id) + "." + m.first, m.second);
    for (const auto& f : c.files) r.manifest.dataFiles.push_back((fs::path(r.cfg.output) / f).string());
  }
  if (!r.cfg.output.empty()) {
    fs::create_directories(r.cfg.output);
    const std::string path = (fs::path(r.cfg.output) / "acceptance.csv").string();
    t.write(path);
    r.manifest.dataFiles.push_back(path);
  }
}

}  // namespace

const char* latlabVersion() { return LATLAB_VERSION; }

int resolveWorkers(int configured) {
  if (std::getenv("LATLAB_WORKERS") || configured <= 0) return configuredWorkers();
  return configured;
}

bool RunManifest::allPass() const {
  for (const auto& c : checks)
    if (!c.second) return false;
  return true;
}

std::string RunManifest::toJson() const {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::parse(config.toJson());
  j["version"] = version;
  j["wallSeconds"] = wallSeconds;
  j["workers"] = workers;
  j["workerRanges"] = nlohmann::ordered_json::array();
  for (const auto& w : workerRanges)
    j["workerRanges"].push_back({{"worker", w.worker}, {"begin", w.begin}, {"end", w.end}});
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) j["summary"][k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(formatNumber(v));
  for (const auto& [k, v] : labels) j["summary"][k] = v;
  j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : checks) j["checks"][k] = v ? "PASS" : "FAIL";
  j["dataFiles"] = dataFiles;
  return j.dump(2) + "\n";
}

RunManifest runExperiment(const ExperimentConfig& config, const std::function<void(const std::string&)>& progress) {
  config.validate();
  RunManifest manifest;
  manifest.config = config;
  manifest.version = latlabVersion();
  manifest.workers = resolveWorkers(config.workers);
  Run run{config, manifest, manifest.workers};
  const auto start = std::chrono::steady_clock::now();
  switch (config.kind) {
    case ExperimentKind::sample:
      runSample(run);
      break;
    case ExperimentKind::minima:
      runMinima(run);
      break;
    case ExperimentKind::zeta:
      runZeta(run);
      break;
    case ExperimentKind::count:
      runCount(run);
      break;
    case ExperimentKind::discrepancy:
      runDiscrepancy(run);
      break;
    case ExperimentKind::moments:
      runMoments(run);
      break;
    case ExperimentKind::tails:
      runTails(run);
      break;
    case ExperimentKind::dlCheck:
      runDlCheck(run);
      break;
    case ExperimentKind::flow:
      runFlow(run);
      break;
    case ExperimentKind::hits:
      runHits(run);
      break;
    case ExperimentKind::iwasawaCheck:
      runIwasawaCheck(run);
      break;
    case ExperimentKind::validateSampler:
      runValidateSampler(run);
      break;
    case ExperimentKind::accept:
      runAccept(run, progress);
      break;
  }
  manifest.wallSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.output.empty()) {
    const bool dir = config.kind == ExperimentKind::accept;
    const std::string path = dir ? (fs::path(config.output) / "manifest.json").string() : config.output + ".manifest.json";
    writeFile(path, manifest.toJson());
  }
  return manifest;
}

}  // namespace latlab
