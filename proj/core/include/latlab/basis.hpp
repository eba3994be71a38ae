#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "latlab/integer.hpp"
#include "latlab/linalg.hpp"

namespace latlab {

enum class Provenance { real, integral };

/// Basis of a covolume-one lattice; rows are the basis vectors.
///
/// Integral provenance keeps an exact integer matrix plus a positive scale so
/// that the lattice is (integer rows)·scale. All membership decisions on such
/// bases are made in integer arithmetic.
class BasisMatrix {
 public:
  /// Real basis. If |det| is not within 1e-9 of 1 the rows are rescaled by
  /// |det|^{-1/n} and a warning is logged.
  static BasisMatrix fromRows(const Matrix& rows);

  /// Integral basis; scale is |det|^{-1/n}.
  static BasisMatrix fromIntegerRows(const IntMatrix& rows, std::optional<std::int64_t> prime = std::nullopt);

  static BasisMatrix identity(int n);

  int dim() const { return static_cast<int>(embedding_.rows()); }
  Provenance provenance() const { return provenance_; }
  bool integral() const { return provenance_ == Provenance::integral; }

  /// The true basis vectors (scaled).
  const Matrix& embedding() const { return embedding_; }
  /// Unscaled rows: the integer matrix for integral provenance, else embedding().
  Matrix rows() const;
  const IntMatrix& integerRows() const { return integerRows_; }
  double scale() const { return scale_; }
  std::optional<std::int64_t> prime() const { return prime_; }
  double determinant() const;

  Vector embed(const IntVector& coeffs) const;

  // Construction without validation, for bases derived from a valid one by a
  // unimodular change of basis.
  static BasisMatrix trustedIntegral(IntMatrix rows, double scale, std::optional<std::int64_t> prime);
  static BasisMatrix trustedReal(Matrix rows);

 private:
  Provenance provenance_ = Provenance::real;
  Matrix embedding_;
  IntMatrix integerRows_;
  double scale_ = 1.0;
  std::optional<std::int64_t> prime_;
};

/// A lattice vector with coordinates relative to a specific basis.
struct LatticePoint {
  IntVector coeffs;
  Vector embedding;
  double normSq = 0.0;
};

LatticePoint makePoint(const BasisMatrix& basis, const IntVector& coeffs);

/// Exact squared norm of coeffs·integerRows (integral provenance only).
Int128 exactNormSq(const BasisMatrix& basis, const IntVector& coeffs);

/// Integer bound b with ‖v‖² ≤ radius² ⇔ exactNormSq ≤ b for integral bases.
/// Values within relative 1e-12 below an integer snap up to it, so radii
/// computed in floating point from exact boundaries stay inclusive.
Int128 integerNormBound(const BasisMatrix& basis, double radius);

/// Floating counterpart with the same relative slack.
double realNormBound(double radius);

/// JSON record {dim, rows, scale, provenance, prime}; rows are written with
/// 17 significant digits (integers for integral provenance).
std::string basisToJson(const BasisMatrix& basis);
BasisMatrix basisFromJson(const std::string& text);

}  // namespace latlab
