#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latlab/basis.hpp"
#include "latlab/config.hpp"
#include "latlab/csv.hpp"
#include "latlab/errors.hpp"
#include "latlab/experiment.hpp"
#include "latlab/plot.hpp"

namespace {

using latlab::ExperimentConfig;
using latlab::ExperimentKind;

constexpr std::uint64_t kDefaultSeed = 1;

struct Command {
  ExperimentConfig cfg;
  CLI::App* app = nullptr;
  bool noRotate = false;
  std::string generator;
};

void addCommon(Command& c, bool sampling) {
  auto* app = c.app;
  app->add_option("--n", c.cfg.dim, "dimension")->capture_default_str();
  app->add_option("--seed", c.cfg.seed, "master seed")->capture_default_str();
  app->add_option("--workers", c.cfg.workers, "worker threads (0: hardware; LATLAB_WORKERS wins)");
  app->add_option("--out", c.cfg.output, "data file; the manifest goes to <out>.manifest.json");
  if (!sampling) return;
  const std::map<std::string, latlab::SamplerMethod> methods{{"hecke", latlab::SamplerMethod::hecke},
                                                            {"siegel-iwasawa", latlab::SamplerMethod::siegelIwasawa}};
  app->add_option("--method", c.cfg.sampler, "hecke | siegel-iwasawa")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  app->add_option("--prime", c.cfg.prime, "Hecke prime")->capture_default_str();
  app->add_option("--truncation", c.cfg.truncation, "Siegel-set truncation")->capture_default_str();
  app->add_flag("--rotate", c.cfg.rotate, "right-multiply samples by a Haar rotation");
}

Command& make(std::vector<std::unique_ptr<Command>>& all, CLI::App& root, ExperimentKind kind,
              const std::string& help) {
  auto c = std::make_unique<Command>();
  c->cfg.kind = kind;
  c->cfg.seed = kDefaultSeed;
  c->app = root.add_subcommand(latlab::experimentName(kind), help);
  all.push_back(std::move(c));
  return *all.back();
}

std::vector<std::vector<double>> parseMatrix(const std::string& text) {
  std::vector<std::vector<double>> m;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) m.push_back(latlab::parseGrid(row));
  return m;
}

void defaultFlow(Command& c) {
  auto& f = c.cfg.flow;
  if (!c.generator.empty()) {
    f.kind = "unipotent";
    f.nilpotent = parseMatrix(c.generator);
  }
  if (f.kind == "diagonal" && f.weights.empty()) {
    f.weights.assign(c.cfg.dim, 1.0);
    f.weights.back() = -(c.cfg.dim - 1.0);
  }
  if (c.cfg.basis.empty() && !c.noRotate) c.cfg.rotate = true;
}

void printSummary(const latlab::RunManifest& m) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : m.summary) j[k] = v;
  for (const auto& [k, v] : m.labels) j[k] = v;
  for (const auto& [k, v] : m.checks) j["checks"][k] = v;
  j["pass"] = m.allPass();
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App root{"latlab: random lattices, counting statistics and flows on the space of lattices"};
  root.require_subcommand(1);
  root.set_version_flag("--version", latlab::latlabVersion());

  std::vector<std::unique_ptr<Command>> cmds;

  {
    auto& c = make(cmds, root, ExperimentKind::sample, "sample covolume-one lattices (one basis JSON per line)");
    addCommon(c, true);
    c.app->add_option("--count", c.cfg.trials, "number of lattices")->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::minima, "successive minima of sampled lattices");
    addCommon(c, true);
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::zeta, "Epstein zeta with a certified tail bound");
    addCommon(c, true);
    c.app->add_option("--basis", c.cfg.basis, "basis JSON file (otherwise sample --trials lattices)");
    c.app->add_option("--s", c.cfg.s)->capture_default_str();
    c.app->add_option("--tol", c.cfg.tol)->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::count, "Siegel-transform counts over an M grid");
    addCommon(c, true);
    c.cfg.grid = "log:1:1e4:25";
    c.app->add_option("--basis", c.cfg.basis);
    c.app->add_option("--ell", c.cfg.ell)->capture_default_str();
    c.app->add_option("--m-grid", c.cfg.grid)->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::discrepancy, "counting discrepancy along an M grid");
    addCommon(c, true);
    c.cfg.grid = "log:1:1e4:25";
    c.app->add_option("--basis", c.cfg.basis);
    c.app->add_option("--ell", c.cfg.ell)->capture_default_str();
    c.app->add_option("--m-grid", c.cfg.grid)->capture_default_str();
    c.app->add_option("--psi", c.cfg.psi)->capture_default_str();
    c.app->add_option("--volumes", c.cfg.volumes, "per-coordinate volumes")->delimiter(',');
  }
  {
    auto& c = make(cmds, root, ExperimentKind::moments, "second-moment gap against V");
    addCommon(c, true);
    c.cfg.grid = "2,4,8,16,32";
    c.cfg.trials = 20000;
    c.app->add_option("--ell", c.cfg.ell)->capture_default_str();
    c.app->add_option("--v-grid", c.cfg.grid)->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::tails, "Monte Carlo tail probabilities with Wilson intervals");
    addCommon(c, true);
    c.cfg.grid = "log:0.15:0.5:8";
    c.cfg.trials = 100000;
    c.app->add_option("--event", c.cfg.event)->capture_default_str();
    c.app->add_option("--grid", c.cfg.grid)->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::dlCheck, "fit a tail exponent and compare with the expected one");
    addCommon(c, true);
    c.cfg.trials = 100000;
    c.app->add_option("--observable", c.cfg.observable)->capture_default_str();
    c.app->add_option("--grid", c.cfg.grid, "z grid (default: automatic)");
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::flow, "log-law trace along a flow orbit");
    addCommon(c, true);
    c.app->add_option("--basis", c.cfg.basis, "start lattice (otherwise a rotated sample)");
    c.app->add_option("--kind", c.cfg.flow.kind, "diagonal | unipotent")->capture_default_str();
    c.app->add_option("--weights", c.cfg.flow.weights, "diagonal weights (default 1,..,1,1-n)")->delimiter(',');
    c.app->add_option("--generator", c.generator, "nilpotent generator, rows separated by ';'");
    c.app->add_option("--observable", c.cfg.observable)->capture_default_str();
    c.app->add_option("--t-max", c.cfg.tMax)->capture_default_str();
    c.app->add_option("--t-points", c.cfg.tPoints)->capture_default_str();
    c.app->add_flag("--no-rotate", c.noRotate, "use the sampled start as is");
  }
  {
    auto& c = make(cmds, root, ExperimentKind::hits, "shrinking-target hits at integer times");
    addCommon(c, true);
    c.cfg.zSequence = "(1/3)*log(k)";
    c.cfg.K = 100000;
    c.cfg.trials = 100;
    c.app->add_option("--basis", c.cfg.basis);
    c.app->add_option("--z-seq", c.cfg.zSequence, "threshold sequence in k")->capture_default_str();
    c.app->add_option("--K", c.cfg.K)->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
    c.app->add_option("--kind", c.cfg.flow.kind)->capture_default_str();
    c.app->add_option("--weights", c.cfg.flow.weights)->delimiter(',');
    c.app->add_option("--generator", c.generator);
    c.app->add_option("--observable", c.cfg.observable)->capture_default_str();
    c.app->add_flag("--no-rotate", c.noRotate);
  }
  {
    auto& c = make(cmds, root, ExperimentKind::iwasawaCheck, "Iwasawa reconstruction and Jacobian checks");
    addCommon(c, false);
    c.cfg.trials = 10000;
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
    c.app->add_option("--truncation", c.cfg.truncation)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::validateSampler, "mean lattice-point counts against volume");
    addCommon(c, true);
    c.cfg.grid = "1,5,20";
    c.cfg.trials = 10000;
    c.app->add_option("--volumes", c.cfg.grid, "ball volumes")->capture_default_str();
    c.app->add_option("--trials", c.cfg.trials)->capture_default_str();
  }
  {
    auto& c = make(cmds, root, ExperimentKind::accept, "run the acceptance suite");
    c.app->add_option("--criterion", c.cfg.criteria, "criterion id (repeatable; default all)");
    c.app->add_option("--out", c.cfg.output, "output directory")->capture_default_str();
    c.app->add_option("--workers", c.cfg.workers);
    c.cfg.output = "acceptance-output";
  }

  std::string configFile, configOut;
  auto* run = root.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("--config", configFile)->required()->check(CLI::ExistingFile);
  run->add_option("--out", configOut, "override the config's output");

  std::string plotIn, plotKind, plotOut;
  auto* plot = root.add_subcommand("plot-data", "derive plot-ready columns from a result CSV");
  plot->add_option("--in", plotIn)->required()->check(CLI::ExistingFile);
  plot->add_option("--kind", plotKind, "tails | trace | discrepancy | moments")->required();
  plot->add_option("--out", plotOut, "output CSV (default stdout)");

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return root.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*plot) {
      const latlab::CsvTable t = latlab::emitPlotData(plotIn, plotKind);
      if (plotOut.empty())
        std::cout << t.str();
      else
        t.write(plotOut);
      return 0;
    }

    ExperimentConfig cfg;
    if (*run) {
      cfg = ExperimentConfig::fromJson(latlab::readFile(configFile));
      if (!configOut.empty()) cfg.output = configOut;
    } else {
      for (auto& c : cmds) {
        if (!*c->app) continue;
        if (c->cfg.kind == ExperimentKind::flow || c->cfg.kind == ExperimentKind::hits) defaultFlow(*c);
        cfg = c->cfg;
      }
    }

    const auto progress = [](const std::string& line) { std::cout << line << std::endl; };
    const latlab::RunManifest m = latlab::runExperiment(cfg, progress);
    if (cfg.kind == ExperimentKind::sample && cfg.output.empty()) {
      std::uint64_t count = 0;
      const auto source = cfg.source();
      for (; count < cfg.trials; ++count) std::cout << latlab::basisToJson(source(count)) << "\n";
    } else if (cfg.kind != ExperimentKind::accept) {
      printSummary(m);
    } else {
      std::cout << (m.allPass() ? "all criteria passed" : "some criteria failed") << "\n";
    }
    return m.exitCode();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "latlab: %s\n", e.what());
    return 1;
  }
}
