#pragma once

#include <vector>

#include "latlab/basis.hpp"
#include "latlab/enumeration.hpp"

namespace latlab {

/// β₁ ≤ … ≤ β_k with linearly independent witnesses, ‖wᵢ‖ = βᵢ. Witness
/// coefficients are relative to the input basis, sign-normalized (first
/// nonzero coefficient positive) and lexicographically smallest among
/// equal-norm candidates.
struct MinimaProfile {
  std::vector<double> betas;
  std::vector<LatticePoint> witnesses;
};

MinimaProfile successiveMinima(const BasisMatrix& basis, const EnumerationOptions& options = {});

/// The first `count` successive minima only.
MinimaProfile leadingMinima(const BasisMatrix& basis, int count, const EnumerationOptions& options = {});

double shortestVectorLength(const BasisMatrix& basis, const EnumerationOptions& options = {});

/// Minkowski's second theorem for covolume one: lower ≤ ∏βⱼ ≤ upper.
struct ProductBracket {
  double lower;
  double upper;
};
ProductBracket minkowskiProductBracket(int n);

}  // namespace latlab
