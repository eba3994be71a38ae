#pragma once

#include <cstdint>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/enumeration.hpp"

namespace latlab {

struct SublatticeRecord {
  int rank = 0;
  /// Basis of the sublattice; coefficients relative to the input basis.
  std::vector<LatticePoint> generators;
  /// Square root of the Gram determinant of the generators.
  double detValue = 0.0;
  bool primitive = false;
  /// detValue / ∏_{j≤ℓ} βⱼ.
  double ratioToMinima = 0.0;
};

/// A primitive rank-ℓ sublattice of minimal determinant σ_ℓ(Λ). n ≤ 5.
SublatticeRecord sigmaEll(const BasisMatrix& basis, int ell, const EnumerationOptions& options = {});

/// Number of primitive rank-ℓ sublattices of determinant ≤ H. n ≤ 4, ℓ ≤ 2.
std::int64_t countPrimitiveSublattices(const BasisMatrix& basis, int ell, double H,
                                       const EnumerationOptions& options = {});

/// Gram determinant of rows given as coefficients relative to `basis`.
double gramDeterminant(const BasisMatrix& basis, const IntMatrix& coeffRows);

/// True iff the coefficient rows extend to a basis of the lattice (unit
/// elementary divisors).
bool isPrimitive(const IntMatrix& coeffRows);

}  // namespace latlab
