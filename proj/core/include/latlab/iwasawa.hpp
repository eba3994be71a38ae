#pragma once

#include <vector>

#include "latlab/basis.hpp"
#include "latlab/linalg.hpp"

namespace latlab {

/// g = k·diag(a)·u with k ∈ SO(n), a > 0, u unit upper triangular.
///
/// This is the QR factorization of g with positive diagonal. The lattice
/// attached to g is generated by the columns of g (see latticeOf), so a are
/// the Gram–Schmidt norms of that basis and u its Gram–Schmidt coefficients.
struct IwasawaCoords {
  Matrix k;
  std::vector<double> a;
  Matrix u;
  /// ‖k·diag(a)·u − g‖_F / ‖g‖_F as computed.
  double reconstructionError = 0.0;
};

/// Requires |det g − 1| ≤ 1e-6. Throws NumericalRankLoss on a singular input
/// or a reconstruction error above 1e-9.
IwasawaCoords iwasawaDecompose(const Matrix& g);

Matrix composeKau(const Matrix& k, const std::vector<double>& a, const Matrix& u);

/// Lattice Zⁿ-span of the columns of g: basis rows are the columns of g.
BasisMatrix latticeOf(const Matrix& g);

/// aᵢ/aᵢ₊₁ ≤ 2 and |uᵢⱼ| ≤ 1 for i < j, each with 1e-9 slack.
bool inSiegelSet(const Matrix& g);
bool inSiegelSet(const IwasawaCoords& c);

/// ∏_{i<j} aᵢ/aⱼ.
double haarDensity(const std::vector<double>& a);

/// a_ℓ of the decomposition, 1 ≤ ℓ ≤ n.
double piEll(const Matrix& g, int ell);

/// bᵢ = aᵢ/aᵢ₊₁.
std::vector<double> bCoords(const std::vector<double>& a);

/// Inverse of bCoords on ∏aᵢ = 1: aⱼⁿ = ∏_{i<j} bᵢ^{−i} · ∏_{i≥j} bᵢ^{n−i}.
std::vector<double> aFromB(const std::vector<double>& b);

/// ∏ᵢ bᵢ^{i(n−i)}, equal to haarDensity(aFromB(b)).
double haarDensityFromB(const std::vector<double>& b);

/// Finite-difference Jacobian determinant of b ↦ (a₁,…,a_{n−1}) against the
/// closed form 1/(n·a₁).
struct JacobianCheck {
  double numeric = 0.0;
  double closedForm = 0.0;
  double relativeError = 0.0;
};
JacobianCheck jacobianAB(const std::vector<double>& b);

}  // namespace latlab
