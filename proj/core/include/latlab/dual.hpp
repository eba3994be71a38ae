#pragma once

#include "latlab/basis.hpp"

namespace latlab {

/// Basis of the dual lattice Λ* = {w : ⟨w, v⟩ ∈ Z for all v ∈ Λ}.
/// Real bases: inverse-transpose of the rows. Integral bases are LLL-reduced
/// first and dualized exactly through the adjugate, so the result keeps
/// integral provenance.
BasisMatrix dualBasis(const BasisMatrix& basis);

/// Rows D with basis·Dᵀ = I (exactly, for integral provenance).
BasisMatrix inverseTransposeBasis(const BasisMatrix& basis);

/// Integer C with a = C·b (as embeddings) and |det C| = 1, if one exists.
bool unimodularChange(const BasisMatrix& a, const BasisMatrix& b, IntMatrix& change, double tol = 1e-6);

/// True iff both bases span the same lattice: the change of basis is integral
/// and its Hermite normal form is the identity.
bool sameLattice(const BasisMatrix& a, const BasisMatrix& b, double tol = 1e-6);

}  // namespace latlab
