#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/errors.hpp"
#include "latlab/lll.hpp"

namespace latlab {

struct EnumerationOptions {
  /// ExplosionGuard fires when the predicted or actual number of visited
  /// points exceeds this cap.
  double maxCount = 1e8;
};

namespace detail {

struct GramSchmidt {
  int n = 0;
  long double mu[kMaxDim][kMaxDim] = {};
  long double norm[kMaxDim] = {};
};

GramSchmidt gramSchmidt(const Matrix& rows);

/// Upper bound on the number of integer vectors visited below `bound`.
double predictedVisits(const GramSchmidt& gs, long double bound);

// Schnorr–Euchner enumeration of every nonzero x with
// Σᵢ (xᵢ + Σ_{j>i} xⱼμⱼᵢ)² ‖b*ᵢ‖² ≤ bound. Vectors whose coordinates at levels
// ≥ tailStart all vanish are skipped. The visitor may lower `bound`.
template <class Visit>
void enumerate(const GramSchmidt& gs, long double& bound, int tailStart, double cap, Visit&& visit) {
  const int n = gs.n;
  long double center[kMaxDim + 1];
  long double partial[kMaxDim + 1];
  std::int64_t x[kMaxDim];
  std::int64_t dx[kMaxDim];
  std::int64_t ddx[kMaxDim];
  partial[n] = 0;
  int i = n - 1;
  center[i] = 0;
  x[i] = 0;
  dx[i] = ddx[i] = 1;
  double visits = 0;

  auto zigzag = [&](int level) {
    x[level] += dx[level];
    ddx[level] = -ddx[level];
    dx[level] = ddx[level] - dx[level];
  };
  auto tailZero = [&]() {
    for (int j = tailStart; j < n; ++j)
      if (x[j] != 0) return false;
    return true;
  };

  for (;;) {
    const long double diff = static_cast<long double>(x[i]) - center[i];
    const long double li = partial[i + 1] + diff * diff * gs.norm[i];
    if (li <= bound) {
      if (i == 0) {
        if (!tailZero()) {
          if (++visits > cap) throw ExplosionGuard("enumeration visited more points than the configured cap");
          visit(static_cast<const std::int64_t*>(x), li);
        }
        zigzag(0);
      } else if (i == tailStart && tailZero()) {
        zigzag(i);
      } else {
        partial[i] = li;
        --i;
        long double c = 0;
        for (int j = i + 1; j < n; ++j) c -= static_cast<long double>(x[j]) * gs.mu[j][i];
        center[i] = c;
        x[i] = static_cast<std::int64_t>(std::llround(c));
        dx[i] = ddx[i] = (c >= static_cast<long double>(x[i])) ? 1 : -1;
      }
    } else {
      ++i;
      if (i == n) break;
      zigzag(i);
    }
  }
}

}  // namespace detail

/// A lattice together with an LLL-reduced basis and its Gram–Schmidt data,
/// prepared once for repeated enumeration.
class ReducedLattice {
 public:
  explicit ReducedLattice(const BasisMatrix& input, const EnumerationOptions& options = {});
  ReducedLattice(const BasisMatrix& input, Reduction reduction, const EnumerationOptions& options = {});

  const BasisMatrix& input() const { return input_; }
  const BasisMatrix& reduced() const { return reduction_.basis; }
  /// reduced.rows = transform · input.rows
  const IntMatrix& transform() const { return reduction_.transform; }
  const detail::GramSchmidt& gramSchmidt() const { return gs_; }
  int dim() const { return input_.dim(); }
  const EnumerationOptions& options() const { return options_; }

  /// Coefficients relative to the input basis of the reduced-basis vector x.
  IntVector toInputCoeffs(const IntVector& reducedCoeffs) const { return reducedCoeffs * reduction_.transform; }

  /// Calls visit(reducedCoeffs, normSq, exactNormSq) for every nonzero vector
  /// with ‖v‖ ≤ radius, exactly once each. exactNormSq is the unscaled integer
  /// norm for integral provenance and -1 otherwise.
  template <class Visit>
  void forEach(double radius, Visit&& visit) const {
    if (!(radius > 0)) return;
    const int n = dim();
    const bool exact = reduced().integral();
    const double s = reduced().scale();
    const Int128 intBound = exact ? integerNormBound(reduced(), radius) : 0;
    const double realBound = realNormBound(radius);
    long double bound = exact ? static_cast<long double>(intBound) : static_cast<long double>(realBound);
    bound = bound * (1.0L + 1e-9L) + 1e-9L;
    if (detail::predictedVisits(gs_, bound) > options_.maxCount)
      throw ExplosionGuard("predicted enumeration count exceeds cap");
    IntVector coeffs(n);
    detail::enumerate(gs_, bound, 0, options_.maxCount, [&](const std::int64_t* x, long double) {
      for (int j = 0; j < n; ++j) coeffs(j) = x[j];
      if (exact) {
        const Int128 e = exactNorm(coeffs);
        if (e > intBound) return;
        visit(static_cast<const IntVector&>(coeffs), static_cast<double>(e) * s * s, e);
      } else {
        const double ns = (coeffs.cast<double>() * reduced().embedding()).squaredNorm();
        if (ns > realBound) return;
        visit(static_cast<const IntVector&>(coeffs), ns, Int128(-1));
      }
    });
  }

  /// Exact squared norm of x·reducedRows (integral provenance).
  Int128 exactNorm(const IntVector& reducedCoeffs) const;

 private:
  BasisMatrix input_;
  Reduction reduction_;
  detail::GramSchmidt gs_;
  EnumerationOptions options_;
};

/// Exactly the nonzero lattice vectors of norm ≤ radius; coefficients are
/// relative to `basis`. Ordered by norm, ties lexicographically.
std::vector<LatticePoint> enumerateShortVectors(const BasisMatrix& basis, double radius,
                                                const EnumerationOptions& options = {});

/// Number of nonzero lattice vectors of norm ≤ radius.
std::uint64_t countShortVectors(const BasisMatrix& basis, double radius, const EnumerationOptions& options = {});

}  // namespace latlab
