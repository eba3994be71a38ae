#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/linalg.hpp"

namespace latlab {

enum class SamplerMethod { hecke, siegelIwasawa };

struct SamplerConfig {
  int dim = 3;
  SamplerMethod method = SamplerMethod::hecke;
  std::int64_t heckePrime = 1000003;
  std::uint64_t seed = 0;
  std::uint64_t trialIndex = 0;
  /// Lower truncation ε₀ of the b-coordinates (siegel-iwasawa only).
  double truncation = 0.05;
};

bool isPrime(std::int64_t p);

/// Throws ConfigError for n < 3, a non-prime p or p < 997.
void validateConfig(const SamplerConfig& cfg);

/// Rows (p,0,…,0) and (aᵢ, 0,…,1,…,0), scale p^{−1/n}.
BasisMatrix heckeBasis(std::int64_t p, const std::vector<std::int64_t>& a);

/// Hecke lattice with a uniform in {0,…,p−1}^{n−1}.
BasisMatrix sampleHecke(const SamplerConfig& cfg);

struct WeightedSample {
  BasisMatrix basis;
  /// Group element; basis rows are its columns.
  Matrix g;
  double weight = 1.0;
  /// Samples a measure comparable to, not equal to, the Haar measure.
  bool diagnostic = false;
};

/// k Haar on SO(n), u uniform on [−1,1] off the diagonal, bᵢ with density
/// ∝ bᵢ^{i(n−i)−1} on [ε₀, 2]. Throws TruncationTooTight if ε₀ ≥ 2.
WeightedSample sampleSiegelIwasawa(const SamplerConfig& cfg, double truncation);

/// Produces the lattice of a given trial index.
using LatticeSource = std::function<BasisMatrix(std::uint64_t trialIndex)>;

LatticeSource makeSource(const SamplerConfig& base);

/// Λ·k for k Haar on SO(n), drawn from a stream derived from (seed, trialIndex)
/// that differs from the sampler's stream for the same seed.
/// Preserves μ_X and removes the alignment of Hecke lattices with the
/// coordinate axes, which diagonal flows would otherwise see: every Hecke
/// lattice contains p^{1−1/n}·eₙ.
LatticeSource rotatedSource(LatticeSource base, std::uint64_t seed);

/// Q from the QR factorization of a Gaussian matrix, R's diagonal made
/// positive and det Q = 1.
Matrix haarRotation(std::mt19937_64& rng, int n);

/// Nonzero lattice points in the centered ball of the given volume.
std::uint64_t countInBall(const BasisMatrix& basis, double volume);

struct SamplerValidation {
  double volume = 0.0;
  double meanCount = 0.0;
  double standardError = 0.0;
  std::uint64_t trials = 0;
  bool pass = false;
};

/// Monte Carlo mean of countInBall; PASS iff |mean − V| ≤ 3·stderr.
SamplerValidation validateSampler(const LatticeSource& source, double volume, std::uint64_t trials, int workers = 0);
SamplerValidation validateSampler(const SamplerConfig& cfg, double volume, std::uint64_t trials, int workers = 0);

}  // namespace latlab
