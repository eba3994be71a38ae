#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/sampler.hpp"

namespace latlab {

enum class ExperimentKind {
  sample,
  minima,
  zeta,
  count,
  discrepancy,
  moments,
  tails,
  dlCheck,
  flow,
  hits,
  iwasawaCheck,
  validateSampler,
  accept,
};

/// CLI spelling: "sample", "dl-check", "validate-sampler", ...
const char* experimentName(ExperimentKind kind);
ExperimentKind parseExperimentKind(const std::string& name);

/// "log:a:b:n" (geometric, endpoints exact), "lin:a:b:n" or "x1,x2,...".
std::vector<double> parseGrid(const std::string& text);

struct FlowConfig {
  std::string kind = "diagonal";
  std::vector<double> weights;
  /// Row-major n×n generator (unipotent flows).
  std::vector<std::vector<double>> nilpotent;

  bool operator==(const FlowConfig&) const = default;
};

/// Every parameter of one run. Unknown JSON keys and a missing seed are
/// rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sample;
  int dim = 3;
  int ell = 2;
  double s = 2.0;
  /// Absolute tolerance of zeta evaluations.
  double tol = 1e-10;
  SamplerMethod sampler = SamplerMethod::hecke;
  std::int64_t prime = 1000003;
  double truncation = 0.05;
  /// Right-multiply sampled lattices by an independent Haar rotation.
  bool rotate = false;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string grid;
  std::string psi = "poly:1.5";
  std::string observable = "negLogBeta:1";
  std::string event = "betaLeq:1";
  FlowConfig flow;
  double tMax = 1e4;
  int tPoints = 64;
  std::string zSequence;
  std::uint64_t K = 0;
  std::uint64_t kMax = 1000000;
  /// Optional basis JSON file; replaces sampling where one lattice is used.
  std::string basis;
  std::vector<double> volumes;
  std::vector<int> criteria;
  std::string output;

  bool operator==(const ExperimentConfig&) const = default;

  static ExperimentConfig fromJson(const std::string& text);
  std::string toJson() const;
  /// Schema checks that need no computation; throws ConfigError.
  void validate() const;

  SamplerConfig samplerConfig() const;
  /// The configured lattice stream (rotated when requested).
  LatticeSource source() const;
};

}  // namespace latlab
