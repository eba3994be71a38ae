#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/observable.hpp"
#include "latlab/stats.hpp"
#include "latlab/tails.hpp"

namespace latlab {

/// One-parameter subgroup g_t acting on row vectors: Λ ↦ Λg_t.
struct FlowSpec {
  enum class Kind { diagonal, unipotent };
  Kind kind = Kind::diagonal;
  /// g_t = diag(e^{wᵢt}); Σwᵢ = 0.
  std::vector<double> weights;
  /// g_t = exp(tN); N strictly upper triangular.
  Matrix nilpotent;

  static FlowSpec diagonal(std::vector<double> weights);
  static FlowSpec unipotent(const Matrix& nilpotent);
  int dim() const;
  bool noncompact() const;
  /// Throws ConfigError on malformed specs.
  void validate() const;
  Matrix at(double t) const;
};

/// LLL(basis·g_t), covolume re-verified. Throws NumericalRankLoss when
/// |t|·max|wᵢ| > 300.
BasisMatrix applyFlow(const BasisMatrix& basis, const FlowSpec& spec, double t);

/// Follows Λg_t forward in substeps with max|wᵢ|·dt ≤ 1 (diagonal) or
/// ‖dt·N‖ ≤ 1 (unipotent), re-reducing after each one. Rounding makes this a
/// pseudo-orbit; the covolume is re-normalized when it drifts (≤ 1e-9).
class FlowIterator {
 public:
  FlowIterator(const BasisMatrix& start, const FlowSpec& spec);
  void advanceTo(double t);
  double time() const { return t_; }
  const BasisMatrix& basis() const { return current_; }

 private:
  FlowSpec spec_;
  BasisMatrix current_;
  double t_ = 0.0;
  double maxStep_ = 1.0;
};

struct FlowTrace {
  std::vector<double> times;
  std::vector<double> deltaValues;
  std::vector<double> runningRatioSup;
};

/// Increasing grid t = 2·q^i ending at T.
std::vector<double> geometricTimeGrid(double tMax, int points);

/// Δ(Λg_t) on an increasing grid in [2, ∞) and the running sup of Δ/log t.
FlowTrace logLawTrace(const BasisMatrix& basis, const FlowSpec& spec, const ObservableSpec& observable,
                      const std::vector<double>& times);

/// Smallest integer k ≥ 2 with Δ(Λg_k) ≥ z, or nullopt if none up to kMax.
std::optional<std::uint64_t> hittingTime(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable, double z, std::uint64_t kMax);
/// Hitting times for several levels from one orbit.
std::vector<std::optional<std::uint64_t>> hittingTimes(const BasisMatrix& basis, const FlowSpec& spec,
                                                       const ObservableSpec& observable,
                                                       const std::vector<double>& zGrid, std::uint64_t kMax);

struct KelmerYuPoint {
  double z = 0.0;
  std::optional<std::uint64_t> tau;
  double tailProbability = 0.0;
  /// log τ_z / (−log μ̂(Δ ≥ z)); +∞ when τ_z exceeds kMax.
  double ratio = 0.0;
};

using TailEstimator = std::function<TailEstimate(double z)>;

/// Throws InsufficientTail when an estimate's CI reaches 0.
std::vector<KelmerYuPoint> kelmerYuRatio(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable, const std::vector<double>& zGrid,
                                         const TailEstimator& tail, std::uint64_t kMax);
/// The same ratios from precomputed hitting times.
std::vector<KelmerYuPoint> kelmerYuFromTimes(const std::vector<double>& zGrid,
                                             const std::vector<std::optional<std::uint64_t>>& taus,
                                             const TailEstimator& tail);

/// μ(Δ ≥ z) ≈ C·e^{−αz} with C in [cLow, cHigh].
struct TailModel {
  double alpha = 0.0;
  double cLow = 1.0;
  double cHigh = 1.0;
};

enum class Regime { convergent, divergent, inconclusive };
const char* regimeName(Regime r);

struct HitReport {
  std::vector<double> thresholds;
  std::vector<std::uint64_t> hits;
  /// Σ_k C·e^{−αz_k} with C at its point estimate √(cLow·cHigh), and its range.
  double estimatedMeasureSum = 0.0;
  Interval measureSumRange;
  Regime regime = Regime::inconclusive;
  /// Fitted decay exponent p of the dyadic block sums B_j ∝ j^{−p}.
  double blockExponent = 0.0;
  double blockExponentStderr = 0.0;
};

/// Series classification of Σ e^{−αz_k}, k = 1..K, from dyadic blocks: the
/// block sums over [2^j, 2^{j+1}) are fitted to j^{−p}; convergent iff
/// p − 2·stderr > 1, divergent iff p + 2·stderr < 1.
Regime classifySeries(const std::vector<double>& z, double alpha, double* exponent = nullptr,
                      double* exponentStderr = nullptr);

/// Hits k ∈ [1, K] with Δ(Λg_k) ≥ z_k for every sequence, from one orbit.
/// zSequences[i][k−1] = z_k. The regime uses the model's α (the expected
/// exponent when model.alpha is 0); the measure sum uses the full model.
std::vector<HitReport> borelCantelliHits(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable,
                                         const std::vector<std::vector<double>>& zSequences,
                                         const TailModel& model = {});
HitReport borelCantelliHits(const BasisMatrix& basis, const FlowSpec& spec, const ObservableSpec& observable,
                            const std::vector<double>& zSequence, const TailModel& model = {});

}  // namespace latlab
