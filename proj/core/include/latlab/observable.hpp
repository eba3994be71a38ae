#pragma once

#include <string>

#include "latlab/basis.hpp"

namespace latlab {

/// Functions Δ on lattices whose upper tails μ(Δ ≥ z) decay like e^{−αz}.
struct ObservableSpec {
  enum class Kind {
    negLogBeta,            // −log β_ℓ,            1 ≤ ℓ ≤ n−1, α = nℓ
    negLogBetaProdPrefix,  // −log ∏_{j≤ℓ} βⱼ,      1 ≤ ℓ ≤ n−1, α = n
    logBeta,               // log β_ℓ,             2 ≤ ℓ ≤ n,   α = n(n−ℓ+1)
    logBetaProdSuffix,     // log ∏_{j≥ℓ} βⱼ,       2 ≤ ℓ ≤ n,   α = n
    logZeta,               // log ζ(Λ, s),         s > n/2,     α = n/(2s)
  };
  Kind kind = Kind::negLogBeta;
  int ell = 1;
  double s = 2.0;

  /// "negLogBeta:1", "negLogBetaProdPrefix:2", "logBeta:3",
  /// "logBetaProdSuffix:2" or "logZeta:2".
  static ObservableSpec parse(const std::string& text);
  std::string name() const;
  /// Throws ConfigError when the parameter is outside its range for dimension n.
  void validate(int n) const;
  double expectedAlpha(int n) const;
  /// The quantity X with Δ = ±log X: β_ℓ, a product of minima, or ζ.
  double rawValue(const BasisMatrix& basis) const;
  /// True when Δ = −log X (small X is the rare event).
  bool negated() const { return kind == Kind::negLogBeta || kind == Kind::negLogBetaProdPrefix; }
  double evaluate(const BasisMatrix& basis) const;
};

}  // namespace latlab
