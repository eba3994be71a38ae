#pragma once

#include <cstdint>

#include "latlab/linalg.hpp"

namespace latlab {

using Int128 = __int128;

/// Column reduction rows·V = [H | 0] with V unimodular, H lower triangular with
/// positive diagonal. `inverse` holds V⁻¹, so rows = [H | 0]·inverse and the
/// first `rank` rows of `inverse` span the saturation of the row space.
struct ColumnEchelon {
  IntMatrix h;
  IntMatrix transform;  // V
  IntMatrix inverse;    // V⁻¹
  int rank = 0;
};

/// Requires linearly independent rows.
ColumnEchelon columnEchelon(const IntMatrix& rows);

/// Integer basis (as rows) of {x ∈ Zⁿ : rows·xᵀ = 0}; saturated by construction.
IntMatrix integerKernel(const IntMatrix& rows);

/// Row Hermite normal form; zero rows are dropped, so the result is canonical
/// for the Z-module spanned by the rows.
IntMatrix hermiteNormalForm(const IntMatrix& rows);

/// Unimodular m×m matrix whose first row is the primitive vector v.
IntMatrix unimodularCompletion(const IntVector& v);

int integerRank(const IntMatrix& rows);
Int128 integerDeterminant(const IntMatrix& square);

/// Gcd of the maximal minors of a full-row-rank matrix, i.e. the index of the
/// row lattice in its saturation.
std::int64_t saturationIndex(const IntMatrix& rows);

std::int64_t contentGcd(const IntVector& v);

/// v / gcd(v) with the first nonzero entry positive; identifies the line Qv.
IntVector primitiveDirection(const IntVector& v);

/// Flips the sign so that the first nonzero entry is positive.
IntVector signCanonical(const IntVector& v);

bool lexLess(const IntVector& a, const IntVector& b);

std::int64_t narrow(Int128 value);

}  // namespace latlab
