#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "latlab/config.hpp"
#include "latlab/parallel.hpp"

namespace latlab {

struct RunManifest {
  ExperimentConfig config;
  std::string version;
  double wallSeconds = 0.0;
  int workers = 1;
  std::vector<WorkerRange> workerRanges;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::pair<std::string, std::string>> labels;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> dataFiles;

  bool allPass() const;
  /// 0 when every declared check passed, 2 otherwise.
  int exitCode() const { return allPass() ? 0 : 2; }
  std::string toJson() const;
};

/// Artifact version string.
const char* latlabVersion();

/// Validates the config, dispatches to the experiment, writes the data file
/// to config.output (if set) and the manifest next to it as
/// <output>.manifest.json.
/// `progress` receives one line per finished acceptance criterion.
RunManifest runExperiment(const ExperimentConfig& config,
                          const std::function<void(const std::string&)>& progress = {});

/// Worker count: LATLAB_WORKERS if set, else config.workers if positive,
/// else the hardware concurrency.
int resolveWorkers(int configured);

}  // namespace latlab
