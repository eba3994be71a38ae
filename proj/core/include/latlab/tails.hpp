#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latlab/observable.hpp"
#include "latlab/sampler.hpp"
#include "latlab/stats.hpp"

namespace latlab {

/// Tail events {X ≤ ε} or {X ≥ M} for X a minimum, a product of minima or ζ.
struct EventSpec {
  enum class Kind { betaLeq, betaProdPrefixLeq, betaGeq, betaProdSuffixGeq, zetaGeq };
  Kind kind = Kind::betaLeq;
  int ell = 1;
  double s = 2.0;

  /// "betaLeq:1", "betaProdPrefixLeq:2", "betaGeq:3", "betaProdSuffixGeq:2",
  /// "zetaGeq:2".
  static EventSpec parse(const std::string& text);
  std::string name() const;
  /// The observable Δ with {Δ ≥ z} equal to this event at z = toZ(threshold).
  ObservableSpec observable() const;
  bool lowerTail() const { return kind == Kind::betaLeq || kind == Kind::betaProdPrefixLeq; }
  double toZ(double threshold) const;
  double fromZ(double z) const;
  bool contains(double rawValue, double threshold) const {
    return lowerTail() ? rawValue <= threshold : rawValue >= threshold;
  }
};

struct TailEstimate {
  double threshold = 0.0;
  double pHat = 0.0;
  Interval ci;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
};

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStderr = 0.0;
  double r2 = 0.0;
  std::vector<double> gridUsed;
};

struct DLVerdict {
  double alphaExpected = 0.0;
  double alphaFitted = 0.0;
  double alphaStderr = 0.0;
  bool pass = false;
  /// Range of pHat(z)·e^{αz} over the fitted grid.
  Interval constantBracket;
  /// Estimates of μ(Δ ≥ z), threshold = z.
  std::vector<TailEstimate> estimates;
};

/// Raw values X(Λ) of the event's observable for trials 0..trials−1.
std::vector<double> sampleRaw(const LatticeSource& source, const ObservableSpec& observable, int dim,
                              std::uint64_t trials, int workers = 0);

/// Fraction of raw values inside the event per threshold, with Wilson CIs.
std::vector<TailEstimate> tailFromSample(const std::vector<double>& raw, const EventSpec& event,
                                         const std::vector<double>& grid);

/// Monte Carlo tail probabilities; trials ≥ 10⁴.
std::vector<TailEstimate> estimateTail(const LatticeSource& source, int dim, const EventSpec& event,
                                       const std::vector<double>& grid, std::uint64_t trials, int workers = 0);

/// Weighted least squares of log pHat on log threshold over the estimates with
/// at least 20 hits, weights 1/h² for h the half-width of the log-scale CI.
/// Throws InsufficientData with fewer than 4 usable points.
ExponentFit fitExponent(const std::vector<TailEstimate>& estimates);

/// z-grid between the (1 − pMax) and (1 − pMin) quantiles of Δ, pMin =
/// max(1e-5, 50/trials), evenly spaced in log p.
std::vector<double> autoZGrid(const std::vector<double>& deltas, double pMax, int points);

/// Fits μ(Δ ≥ z) ≈ C e^{−αz}. PASS iff |α̂ − α| ≤ 3·stderr + 0.1·α.
DLVerdict dlCheck(const std::vector<double>& deltas, double alphaExpected, const std::vector<double>& zGrid);
DLVerdict dlCheck(const LatticeSource& source, int dim, const ObservableSpec& observable, std::uint64_t trials,
                  int workers = 0, std::vector<double> zGrid = {});

struct DualitySymmetry {
  /// KS statistic of βⱼ(Λ) against βⱼ(Λ*), j = 1..n.
  std::vector<double> ksStatistics;
  double criticalValue = 0.0;
  /// Samples with βⱼ(Λ)·β_{n−j+1}(Λ*) < 1 − 1e-9 for some j.
  std::uint64_t transferenceViolations = 0;
  /// Largest βⱼ(Λ)·β_{n−j+1}(Λ*) seen.
  double maxTransferenceProduct = 0.0;
  bool pass = false;
};

/// Even trials give the primal sample, odd trials the dual one, so the two
/// KS samples are independent. PASS iff every statistic is below the 1%
/// critical value and no transference violation occurred.
DualitySymmetry dualitySymmetryCheck(const LatticeSource& source, int dim, std::uint64_t trials, int workers = 0);

struct RatioScan {
  std::vector<double> minRatio;
  std::vector<double> maxRatio;
  std::uint64_t trials = 0;
  /// Draws outside the frozen bracket (0 when no bracket is known).
  std::uint64_t violations = 0;
  bool bracketKnown = false;
};

/// Pilot bracket of π_ℓ(g)/β_ℓ on Siegel-set draws (n = 3, ε₀ = 0.05).
std::optional<std::vector<Interval>> siegelPilotBracket(int dim);

/// π_ℓ(g)/β_ℓ(lattice of g) over Siegel-Iwasawa draws.
RatioScan siegelRatioScan(const SamplerConfig& cfg, std::uint64_t trials, int workers = 0);

}  // namespace latlab
