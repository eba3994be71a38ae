#include "latlab/lll.hpp"

#include <cmath>
#include <type_traits>

#include "latlab/errors.hpp"

namespace latlab {

namespace {

struct GsState {
  long double mu[kMaxDim][kMaxDim];
  long double bstar[kMaxDim][kMaxDim];
  long double norm[kMaxDim];
};

template <class Rows>
void subtractRow(Rows& rows, int target, int source, std::int64_t q) {
  if constexpr (std::is_same_v<typename Rows::Scalar, std::int64_t>) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j)
      rows(target, j) = narrow(static_cast<Int128>(rows(target, j)) - static_cast<Int128>(q) * rows(source, j));
  } else {
    rows.row(target) -= static_cast<double>(q) * rows.row(source);
  }
}

template <class Rows>
void lllKernel(Rows& b, IntMatrix& u, const LllOptions& opt, long double scaleSq) {
  if (!(opt.delta > 0.25 && opt.delta < 1.0)) throw ConfigError("LLL delta must lie in (0.25, 1)");
  const int m = static_cast<int>(b.rows());
  const int n = static_cast<int>(b.cols());
  if (m > kMaxDim || n > kMaxDim) throw UnsupportedDimension("LLL dimension too large");
  GsState gs;

  auto gsRow = [&](int k) {
    for (int j = 0; j < n; ++j) gs.bstar[k][j] = static_cast<long double>(b(k, j));
    for (int i = 0; i < k; ++i) {
      long double dot = 0;
      for (int j = 0; j < n; ++j) dot += gs.bstar[k][j] * gs.bstar[i][j];
      const long double mu = dot / gs.norm[i];
      gs.mu[k][i] = mu;
      for (int j = 0; j < n; ++j) gs.bstar[k][j] -= mu * gs.bstar[i][j];
    }
    long double s = 0;
    for (int j = 0; j < n; ++j) s += gs.bstar[k][j] * gs.bstar[k][j];
    gs.norm[k] = s;
    if (!(s * scaleSq >= 1e-30L)) throw NumericalRankLoss("Gram-Schmidt norm below 1e-15");
  };

  long long budget = 200000LL * m;
  int k = 0;
  while (k < m) {
    if (--budget < 0) throw NumericalRankLoss("LLL failed to converge");
    gsRow(k);
    if (k == 0) {
      k = 1;
      continue;
    }
    for (;;) {
      bool large = false;
      for (int j = k - 1; j >= 0; --j) {
        const long double q = std::round(gs.mu[k][j]);
        if (q == 0) continue;
        if (std::fabs(q) > 9e15L) throw NumericalRankLoss("LLL size reduction overflow");
        const auto qi = static_cast<std::int64_t>(q);
        subtractRow(b, k, j, qi);
        subtractRow(u, k, j, qi);
        for (int i = 0; i < j; ++i) gs.mu[k][i] -= q * gs.mu[j][i];
        gs.mu[k][j] -= q;
        if (std::fabs(q) > 1048576.0L) large = true;
      }
      if (!large) break;
      gsRow(k);
    }
    const long double muk = gs.mu[k][k - 1];
    if (k != opt.fixedPrefix && gs.norm[k] < (opt.delta - muk * muk) * gs.norm[k - 1]) {
      b.row(k).swap(b.row(k - 1));
      u.row(k).swap(u.row(k - 1));
      --k;
    } else {
      ++k;
    }
  }
}

}  // namespace

void lllReduceRows(IntMatrix& rows, IntMatrix& transform, const LllOptions& options, double scaleSq) {
  lllKernel(rows, transform, options, scaleSq);
}

void lllReduceRows(Matrix& rows, IntMatrix& transform, const LllOptions& options) {
  lllKernel(rows, transform, options, 1.0L);
}

Reduction lllReduceWithTransform(const BasisMatrix& basis, const LllOptions& options) {
  const int n = basis.dim();
  IntMatrix u = IntMatrix::Identity(n, n);
  if (basis.integral()) {
    IntMatrix rows = basis.integerRows();
    lllKernel(rows, u, options, static_cast<long double>(basis.scale()) * basis.scale());
    return {BasisMatrix::trustedIntegral(std::move(rows), basis.scale(), basis.prime()), u};
  }
  Matrix rows = basis.embedding();
  lllKernel(rows, u, options, 1.0L);
  return {BasisMatrix::trustedReal(std::move(rows)), u};
}

BasisMatrix lllReduce(const BasisMatrix& basis, double delta) {
  return lllReduceWithTransform(basis, LllOptions{delta, 0}).basis;
}

}  // namespace latlab
