#include "latlab/basis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "latlab/errors.hpp"
#include "latlab/log.hpp"

namespace latlab {

namespace {

void checkDimension(Eigen::Index rows, Eigen::Index cols) {
  if (rows != cols) throw ConfigError("basis must be square");
  if (rows < 3 || rows > kMaxDim)
    throw UnsupportedDimension("basis dimension " + std::to_string(rows) + " outside [3, " +
                               std::to_string(kMaxDim) + "]");
}

// Determinant of the embedding after checking the echelon pivots.
double checkedDeterminant(const Matrix& m) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double scaleMax = m.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < u.rows(); ++i)
    if (std::abs(u(i, i)) < 1e-12 * std::max(1.0, scaleMax))
      throw NumericalRankLoss("basis rows are numerically dependent");
  return lu.determinant();
}

std::string formatDouble(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

BasisMatrix BasisMatrix::fromRows(const Matrix& rows) {
  checkDimension(rows.rows(), rows.cols());
  if (!rows.allFinite()) throw NumericalRankLoss("basis has non-finite entries");
  const double det = checkedDeterminant(rows);
  BasisMatrix b;
  b.provenance_ = Provenance::real;
  b.embedding_ = rows;
  const int n = static_cast<int>(rows.rows());
  if (std::abs(std::abs(det) - 1.0) > 1e-9) {
    logWarning("basis determinant " + formatDouble(det) + " renormalized to covolume 1");
    b.embedding_ *= std::pow(std::abs(det), -1.0 / n);
  }
  return b;
}

BasisMatrix BasisMatrix::fromIntegerRows(const IntMatrix& rows, std::optional<std::int64_t> prime) {
  checkDimension(rows.rows(), rows.cols());
  const Int128 det = integerDeterminant(rows);
  if (det == 0) throw NumericalRankLoss("integer basis is singular");
  const int n = static_cast<int>(rows.rows());
  const double absDet = std::abs(static_cast<double>(det));
  return trustedIntegral(rows, std::pow(absDet, -1.0 / n), prime);
}

BasisMatrix BasisMatrix::identity(int n) {
  return fromIntegerRows(IntMatrix::Identity(n, n));
}

BasisMatrix BasisMatrix::trustedIntegral(IntMatrix rows, double scale, std::optional<std::int64_t> prime) {
  BasisMatrix b;
  b.provenance_ = Provenance::integral;
  b.integerRows_ = std::move(rows);
  b.scale_ = scale;
  b.prime_ = prime;
  b.embedding_ = b.integerRows_.cast<double>() * scale;
  return b;
}

BasisMatrix BasisMatrix::trustedReal(Matrix rows) {
  BasisMatrix b;
  b.provenance_ = Provenance::real;
  b.embedding_ = std::move(rows);
  return b;
}

Matrix BasisMatrix::rows() const {
  if (integral()) return integerRows_.cast<double>();
  return embedding_;
}

double BasisMatrix::determinant() const {
  if (integral()) {
    try {
      const long double det = static_cast<long double>(integerDeterminant(integerRows_));
      return static_cast<double>(det * std::pow(static_cast<long double>(scale_), dim()));
    } catch (const NumericalRankLoss&) {
      // Exact determinant overflows; fall back to floating LU.
    }
  }
  return embedding_.determinant();
}

Vector BasisMatrix::embed(const IntVector& coeffs) const {
  if (integral()) {
    Vector v(dim());
    for (int j = 0; j < dim(); ++j) {
      Int128 acc = 0;
      for (int i = 0; i < dim(); ++i) acc += static_cast<Int128>(coeffs(i)) * integerRows_(i, j);
      v(j) = static_cast<double>(acc) * scale_;
    }
    return v;
  }
  return coeffs.cast<double>() * embedding_;
}

LatticePoint makePoint(const BasisMatrix& basis, const IntVector& coeffs) {
  LatticePoint p;
  p.coeffs = coeffs;
  p.embedding = basis.embed(coeffs);
  if (basis.integral())
    p.normSq = static_cast<double>(exactNormSq(basis, coeffs)) * basis.scale() * basis.scale();
  else
    p.normSq = p.embedding.squaredNorm();
  return p;
}

Int128 exactNormSq(const BasisMatrix& basis, const IntVector& coeffs) {
  const int n = basis.dim();
  const IntMatrix& r = basis.integerRows();
  Int128 total = 0;
  for (int j = 0; j < n; ++j) {
    Int128 acc = 0;
    for (int i = 0; i < n; ++i) acc += static_cast<Int128>(coeffs(i)) * r(i, j);
    total += acc * acc;
  }
  return total;
}

Int128 integerNormBound(const BasisMatrix& basis, double radius) {
  if (radius <= 0.0) return -1;
  const long double q = static_cast<long double>(radius) / basis.scale();
  const long double qq = q * q;
  if (qq > 1e30L) throw ExplosionGuard("radius too large for exact integer bound");
  return static_cast<Int128>(std::floor(qq * (1.0L + 1e-12L)));
}

double realNormBound(double radius) { return radius * radius * (1.0 + 1e-12); }

std::string basisToJson(const BasisMatrix& basis) {
  std::ostringstream out;
  const int n = basis.dim();
  out << "{\"dim\":" << n << ",\"provenance\":\"" << (basis.integral() ? "integral" : "real") << "\",\"rows\":[";
  for (int i = 0; i < n; ++i) {
    out << (i ? ",[" : "[");
    for (int j = 0; j < n; ++j) {
      if (j) out << ',';
      if (basis.integral())
        out << basis.integerRows()(i, j);
      else
        out << formatDouble(basis.embedding()(i, j));
    }
    out << ']';
  }
  out << "],\"scale\":" << formatDouble(basis.scale());
  if (basis.prime()) out << ",\"prime\":" << *basis.prime();
  out << '}';
  return out.str();
}

BasisMatrix basisFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("basis JSON: ") + e.what());
  }
  try {
    const int n = j.at("dim").get<int>();
    if (n < 3 || n > kMaxDim) throw UnsupportedDimension("basis dimension " + std::to_string(n));
    const auto& rows = j.at("rows");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) throw FormatError("basis JSON: rows must be n×n");
    const std::string prov = j.value("provenance", std::string("real"));
    if (prov == "integral") {
      IntMatrix m(n, n);
      for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n) throw FormatError("basis JSON: rows must be n×n");
        for (int c = 0; c < n; ++c) m(r, c) = rows[r][c].get<std::int64_t>();
      }
      std::optional<std::int64_t> prime;
      if (j.contains("prime")) prime = j["prime"].get<std::int64_t>();
      BasisMatrix b = BasisMatrix::fromIntegerRows(m, prime);
      if (j.contains("scale")) {
        const double stated = j["scale"].get<double>();
        if (std::abs(stated - b.scale()) > 1e-12 * b.scale())
          logWarning("basis JSON scale inconsistent with integer determinant; using |det|^{-1/n}");
      }
      return b;
    }
    if (prov != "real") throw FormatError("basis JSON: unknown provenance '" + prov + "'");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(rows[r].size()) != n) throw FormatError("basis JSON: rows must be n×n");
      for (int c = 0; c < n; ++c) m(r, c) = rows[r][c].get<double>();
    }
    const double scale = j.value("scale", 1.0);
    return BasisMatrix::fromRows(m * scale);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("basis JSON: ") + e.what());
  }
}

}  // namespace latlab
