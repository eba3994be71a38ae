#pragma once

#include "latlab/basis.hpp"
#include "latlab/enumeration.hpp"

namespace latlab {

struct ZetaResult {
  /// Certified lower end: the true value lies in [value, value + tailBound].
  double value = 0.0;
  double tailBound = 0.0;
  /// Truncation radius of the primal sum.
  double radiusUsed = 0.0;
  /// Truncation radius of the dual sum (0 for the direct method).
  double dualRadiusUsed = 0.0;
  double s = 0.0;
};

struct ZetaOptions {
  double tol = 1e-10;
  /// Interpret tol relative to the value.
  bool relative = false;
  EnumerationOptions enumeration;
};

/// ζ(Λ, s) = Σ_{v≠0} ‖v‖^{−2s} for real s > n/2.
///
/// Theta splitting at a scale a > 0 chosen from both reduced bases:
///   π^{−s}Γ(s)ζ = Σ_{v≠0} a^s E_s(πa‖v‖²) + Σ_{w∈Λ*∖0} a^{s−n/2} E_{n/2−s}(π‖w‖²/a)
///                 + a^{s−n/2}/(s − n/2) − a^s/s,
/// with E_σ(x) = x^{−σ}Γ(σ, x). Both sums are truncated and their tails bounded
/// with the packing count #{‖v‖ ≤ t} ≤ (1 + 2t/λ)ⁿ, λ the smallest
/// Gram–Schmidt norm of the reduced basis (a lower bound for β₁).
/// Throws SNearPole for s ≤ n/2 + 1e-6.
ZetaResult epsteinZeta(const BasisMatrix& basis, double s, const ZetaOptions& options = {});

/// Partial sum over ‖v‖ ≤ ⌈radius⌉ plus the packing-count tail
/// Σ_{k>K} (1 + 2k/λ)ⁿ((k−1)^{−2s} − k^{−2s}), summed per monomial in closed
/// form. Converges only like K^{n−2s}; kept as an independent reference.
ZetaResult epsteinZetaDirect(const BasisMatrix& basis, double s, double radius,
                             const EnumerationOptions& options = {});

/// log(value + tailBound/2) at relative tolerance 1e-6.
double zetaObservable(const BasisMatrix& basis, double s);

/// x^{−σ}Γ(σ, x) for any real σ and x > 0.
double scaledUpperGamma(double sigma, double x);

}  // namespace latlab
