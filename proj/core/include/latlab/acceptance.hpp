#pragma once

#include <string>
#include <utility>
#include <vector>

namespace latlab {

constexpr int kCriterionCount = 14;

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  /// Floating aggregates, compared across reruns.
  std::vector<std::pair<std::string, double>> metrics;
  /// CSV files written under the output directory.
  std::vector<std::string> files;
};

struct AcceptanceOptions {
  /// Directory for per-criterion CSVs; empty disables file output.
  std::string outputDir;
  int workers = 0;
};

std::string criterionTitle(int id);

/// Runs one acceptance criterion with its pinned seeds, sizes and tolerances.
/// Throws ConfigError for ids outside 1..14.
CriterionResult runCriterion(int id, const AcceptanceOptions& options);

/// "PASS [ 4] lower-tail exponents (12.3 s): ..." on one line.
std::string resultLine(const CriterionResult& result);

}  // namespace latlab
