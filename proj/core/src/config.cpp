#include "latlab/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "latlab/counting.hpp"
#include "latlab/csv.hpp"
#include "latlab/errors.hpp"
#include "latlab/observable.hpp"
#include "latlab/tails.hpp"
#include "latlab/zexpr.hpp"

namespace latlab {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::sample, "sample"},
    {ExperimentKind::minima, "minima"},
    {ExperimentKind::zeta, "zeta"},
    {ExperimentKind::count, "count"},
    {ExperimentKind::discrepancy, "discrepancy"},
    {ExperimentKind::moments, "moments"},
    {ExperimentKind::tails, "tails"},
    {ExperimentKind::dlCheck, "dl-check"},
    {ExperimentKind::flow, "flow"},
    {ExperimentKind::hits, "hits"},
    {ExperimentKind::iwasawaCheck, "iwasawa-check"},
    {ExperimentKind::validateSampler, "validate-sampler"},
    {ExperimentKind::accept, "accept"},
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = text.find(sep, start);
    out.push_back(text.substr(start, p - start));
    if (p == std::string::npos) return out;
    start = p + 1;
  }
}

const char* samplerName(SamplerMethod m) { return m == SamplerMethod::hecke ? "hecke" : "siegel-iwasawa"; }

SamplerMethod parseSampler(const std::string& s) {
  if (s == "hecke") return SamplerMethod::hecke;
  if (s == "siegel-iwasawa") return SamplerMethod::siegelIwasawa;
  throw ConfigError("unknown sampler '" + s + "'");
}

}  // namespace

const char* experimentName(ExperimentKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k.name;
  return "?";
}

ExperimentKind parseExperimentKind(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return k.kind;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<double> parseGrid(const std::string& text) {
  if (text.empty()) throw ConfigError("empty grid");
  const auto parts = split(text, ':');
  auto num = [&](const std::string& s) {
    try {
      return parseNumber(s);
    } catch (const FormatError&) {
      throw ConfigError("grid '" + text + "': bad number '" + s + "'");
    }
  };
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double a = num(parts[1]), b = num(parts[2]);
    const double nd = num(parts[3]);
    if (!(nd >= 2) || nd != std::floor(nd) || nd > 1e6) throw ConfigError("grid '" + text + "': bad point count");
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ConfigError("grid '" + text + "': need a < b");
    const int n = static_cast<int>(nd);
    std::vector<double> g(n);
    if (parts[0] == "log") {
      if (!(a > 0)) throw ConfigError("grid '" + text + "': log grids need a > 0");
      for (int i = 0; i < n; ++i) g[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    } else {
      for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
    }
    g.front() = a;
    g.back() = b;
    return g;
  }
  if (parts.size() != 1) throw ConfigError("grid '" + text + "': expected log:a:b:n, lin:a:b:n or a list");
  std::vector<double> g;
  for (const auto& p : split(text, ',')) g.push_back(num(p));
  return g;
}

ExperimentConfig ExperimentConfig::fromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "dim",  "ell",        "s",     "tol",     "sampler", "prime",  "truncation", "rotate",
      "trials",     "seed", "workers",    "grid",  "psi",     "observable", "event",  "flow",
      "tMax",       "tPoints", "zSequence", "K",   "kMax",    "basis",  "volumes",    "criteria",
      "output"};
  for (const auto& item : j.items())
    if (!known.count(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
  if (!j.contains("experiment")) throw ConfigError("config needs 'experiment'");
  if (!j.contains("seed")) throw ConfigError("config needs an explicit 'seed'");

  ExperimentConfig c;
  try {
    c.kind = parseExperimentKind(j.at("experiment").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dim = j.value("dim", c.dim);
    c.ell = j.value("ell", c.ell);
    c.s = j.value("s", c.s);
    c.tol = j.value("tol", c.tol);
    if (j.contains("sampler")) c.sampler = parseSampler(j["sampler"].get<std::string>());
    c.prime = j.value("prime", c.prime);
    c.truncation = j.value("truncation", c.truncation);
    c.rotate = j.value("rotate", c.rotate);
    c.trials = j.value("trials", c.trials);
    c.workers = j.value("workers", c.workers);
    c.grid = j.value("grid", c.grid);
    c.psi = j.value("psi", c.psi);
    c.observable = j.value("observable", c.observable);
    c.event = j.value("event", c.event);
    if (j.contains("flow")) {
      const auto& f = j["flow"];
      if (!f.is_object()) throw ConfigError("'flow' must be an object");
      for (const auto& item : f.items())
        if (item.key() != "kind" && item.key() != "weights" && item.key() != "nilpotent")
          throw ConfigError("unknown flow key '" + item.key() + "'");
      c.flow.kind = f.value("kind", c.flow.kind);
      c.flow.weights = f.value("weights", c.flow.weights);
      c.flow.nilpotent = f.value("nilpotent", c.flow.nilpotent);
    }
    c.tMax = j.value("tMax", c.tMax);
    c.tPoints = j.value("tPoints", c.tPoints);
    c.zSequence = j.value("zSequence", c.zSequence);
    c.K = j.value("K", c.K);
    c.kMax = j.value("kMax", c.kMax);
    c.basis = j.value("basis", c.basis);
    c.volumes = j.value("volumes", c.volumes);
    c.criteria = j.value("criteria", c.criteria);
    c.output = j.value("output", c.output);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ExperimentConfig::toJson() const {
  nlohmann::ordered_json j;
  j["experiment"] = experimentName(kind);
  j["dim"] = dim;
  j["ell"] = ell;
  j["s"] = s;
  j["tol"] = tol;
  j["sampler"] = samplerName(sampler);
  j["prime"] = prime;
  j["truncation"] = truncation;
  j["rotate"] = rotate;
  j["trials"] = trials;
  j["seed"] = seed;
  j["workers"] = workers;
  j["grid"] = grid;
  j["psi"] = psi;
  j["observable"] = observable;
  j["event"] = event;
  j["flow"] = {{"kind", flow.kind}, {"weights", flow.weights}, {"nilpotent", flow.nilpotent}};
  j["tMax"] = tMax;
  j["tPoints"] = tPoints;
  j["zSequence"] = zSequence;
  j["K"] = K;
  j["kMax"] = kMax;
  j["basis"] = basis;
  j["volumes"] = volumes;
  j["criteria"] = criteria;
  j["output"] = output;
  return j.dump(2);
}

void ExperimentConfig::validate() const {
  if (dim < 3 || dim > 8) throw ConfigError("dim must lie in [3, 8]");
  if (workers < 0) throw ConfigError("workers must be ≥ 0");
  if (kind != ExperimentKind::accept) validateConfig(samplerConfig());
  auto needTrials = [&](std::uint64_t min) {
    if (trials < min) throw ConfigError(std::string(experimentName(kind)) + " needs trials ≥ " + std::to_string(min));
  };
  auto needGrid = [&] {
    const auto g = parseGrid(grid);
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i] > g[i - 1])) throw ConfigError("grid must be increasing");
  };
  switch (kind) {
    case ExperimentKind::sample:
    case ExperimentKind::minima:
    case ExperimentKind::zeta:
      needTrials(1);
      if (kind == ExperimentKind::zeta && !(s > dim / 2.0)) throw ConfigError("zeta needs s > n/2");
      if (kind == ExperimentKind::zeta && !(tol > 0)) throw ConfigError("zeta needs tol > 0");
      break;
    case ExperimentKind::count:
    case ExperimentKind::discrepancy:
      needTrials(1);
      needGrid();
      if (ell < 1) throw ConfigError("ell must be ≥ 1");
      if (!volumes.empty() && static_cast<int>(volumes.size()) != ell)
        throw ConfigError("volumes needs one entry per factor");
      if (kind == ExperimentKind::discrepancy) Psi::parse(psi);
      break;
    case ExperimentKind::moments:
      needTrials(2);
      needGrid();
      break;
    case ExperimentKind::tails:
      needTrials(1);
      needGrid();
      EventSpec::parse(event).observable().validate(dim);
      break;
    case ExperimentKind::dlCheck:
      needTrials(1);
      ObservableSpec::parse(observable).validate(dim);
      if (!grid.empty()) needGrid();
      break;
    case ExperimentKind::flow:
    case ExperimentKind::hits:
      ObservableSpec::parse(observable).validate(dim);
      if (flow.kind != "diagonal" && flow.kind != "unipotent") throw ConfigError("flow kind must be diagonal or unipotent");
      if (flow.kind == "diagonal" && static_cast<int>(flow.weights.size()) != dim)
        throw ConfigError("flow weights need n entries");
      if (kind == ExperimentKind::flow) {
        if (!(tMax > 2)) throw ConfigError("tMax must exceed 2");
        if (tPoints < 2) throw ConfigError("tPoints must be ≥ 2");
      } else {
        needTrials(1);
        if (K < 1) throw ConfigError("hits needs K ≥ 1");
        ZExpression::parse(zSequence);
      }
      break;
    case ExperimentKind::iwasawaCheck:
    case ExperimentKind::validateSampler:
      needTrials(kind == ExperimentKind::validateSampler ? 1000 : 1);
      if (kind == ExperimentKind::validateSampler) needGrid();
      break;
    case ExperimentKind::accept:
      for (int id : criteria)
        if (id < 1 || id > 14) throw ConfigError("criteria are numbered 1..14");
      break;
  }
}

SamplerConfig ExperimentConfig::samplerConfig() const {
  SamplerConfig c;
  c.dim = dim;
  c.method = sampler;
  c.heckePrime = prime;
  c.seed = seed;
  c.truncation = truncation;
  return c;
}

LatticeSource ExperimentConfig::source() const {
  LatticeSource src = makeSource(samplerConfig());
  return rotate ? rotatedSource(std::move(src), seed) : src;
}

}  // namespace latlab
