#include "latlab/sampler.hpp"

#include <cmath>

#include "latlab/enumeration.hpp"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/parallel.hpp"
#include "latlab/rng.hpp"
#include "latlab/stats.hpp"

namespace latlab {

bool isPrime(std::int64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  for (std::int64_t d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

void validateConfig(const SamplerConfig& cfg) {
  if (cfg.dim < 3 || cfg.dim > kMaxDim) throw ConfigError("sampler dimension must lie in [3, 8]");
  if (cfg.method == SamplerMethod::hecke && (cfg.heckePrime < 997 || !isPrime(cfg.heckePrime)))
    throw ConfigError("Hecke prime must be a prime ≥ 997");
}

BasisMatrix heckeBasis(std::int64_t p, const std::vector<std::int64_t>& a) {
  const int n = static_cast<int>(a.size()) + 1;
  IntMatrix m = IntMatrix::Zero(n, n);
  m(0, 0) = p;
  for (int i = 1; i < n; ++i) {
    m(i, 0) = a[i - 1];
    m(i, i) = 1;
  }
  return BasisMatrix::trustedIntegral(std::move(m), std::pow(static_cast<double>(p), -1.0 / n), p);
}

BasisMatrix sampleHecke(const SamplerConfig& cfg) {
  if (cfg.method != SamplerMethod::hecke) throw ConfigError("sampleHecke requires method hecke");
  validateConfig(cfg);
  auto rng = trialEngine(cfg.seed, cfg.trialIndex);
  std::uniform_int_distribution<std::int64_t> u(0, cfg.heckePrime - 1);
  std::vector<std::int64_t> a(cfg.dim - 1);
  for (auto& x : a) x = u(rng);
  return heckeBasis(cfg.heckePrime, a);
}

Matrix haarRotation(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

WeightedSample sampleSiegelIwasawa(const SamplerConfig& cfg, double truncation) {
  if (cfg.method != SamplerMethod::siegelIwasawa) throw ConfigError("sampleSiegelIwasawa requires method siegel-iwasawa");
  if (truncation >= 2.0) throw TruncationTooTight("truncation must be below 2");
  if (!(truncation > 0.0)) throw ConfigError("truncation must be positive");
  validateConfig(cfg);
  const int n = cfg.dim;
  auto rng = trialEngine(cfg.seed, cfg.trialIndex);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  const Matrix q = haarRotation(rng, n);

  std::vector<double> b(n - 1);
  for (int i = 1; i < n; ++i) {
    const double k = i * (n - i);
    const double lo = std::pow(truncation, k);
    b[i - 1] = std::pow(lo + unit(rng) * (std::pow(2.0, k) - lo), 1.0 / k);
  }
  Matrix u = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) u(i, j) = sym(rng);

  WeightedSample s{BasisMatrix::identity(3), Matrix(), 1.0, true};
  s.g = composeKau(q, aFromB(b), u);
  s.basis = BasisMatrix::trustedReal(s.g.transpose());
  return s;
}

LatticeSource makeSource(const SamplerConfig& base) {
  validateConfig(base);
  return [base](std::uint64_t trialIndex) {
    SamplerConfig c = base;
    c.trialIndex = trialIndex;
    if (c.method == SamplerMethod::hecke) return sampleHecke(c);
    return sampleSiegelIwasawa(c, c.truncation).basis;
  };
}

LatticeSource rotatedSource(LatticeSource base, std::uint64_t seed) {
  return [base = std::move(base), seed](std::uint64_t trialIndex) {
    const BasisMatrix b = base(trialIndex);
    auto rng = trialEngine(splitmix64(seed), trialIndex);
    return BasisMatrix::trustedReal(b.embedding() * haarRotation(rng, b.dim()));
  };
}

std::uint64_t countInBall(const BasisMatrix& basis, double volume) {
  return countShortVectors(basis, ballRadius(basis.dim(), volume));
}

SamplerValidation validateSampler(const LatticeSource& source, double volume, std::uint64_t trials, int workers) {
  if (trials < 1000) throw ConfigError("validateSampler needs at least 1000 trials");
  std::vector<double> counts(trials);
  parallelTrials(trials, workers, [&](std::uint64_t i) {
    counts[i] = static_cast<double>(countInBall(source(i), volume));
  });
  const MeanEstimate m = meanEstimate(counts);
  SamplerValidation v;
  v.volume = volume;
  v.meanCount = m.mean;
  v.standardError = m.standardError;
  v.trials = trials;
  v.pass = std::abs(m.mean - volume) <= 3.0 * m.standardError;
  return v;
}

SamplerValidation validateSampler(const SamplerConfig& cfg, double volume, std::uint64_t trials, int workers) {
  return validateSampler(makeSource(cfg), volume, trials, workers);
}

}  // namespace latlab
