#include "latlab/integer.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "latlab/errors.hpp"

namespace latlab {

namespace {

Int128 abs128(Int128 x) { return x < 0 ? -x : x; }

Int128 gcd128(Int128 a, Int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    Int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t subMul(std::int64_t a, std::int64_t q, std::int64_t b) {
  return narrow(static_cast<Int128>(a) - static_cast<Int128>(q) * b);
}

}  // namespace

std::int64_t narrow(Int128 value) {
  if (value > INT64_MAX || value < INT64_MIN) throw NumericalRankLoss("integer overflow in exact lattice arithmetic");
  return static_cast<std::int64_t>(value);
}

ColumnEchelon columnEchelon(const IntMatrix& rows) {
  const int m = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  IntMatrix c = rows;
  IntMatrix w = IntMatrix::Identity(n, n);
  IntMatrix v = IntMatrix::Identity(n, n);
  auto addColumn = [&](int target, int source, std::int64_t q) {  // col_target -= q·col_source
    for (int i = 0; i < m; ++i) c(i, target) = subMul(c(i, target), q, c(i, source));
    for (int i = 0; i < n; ++i) v(i, target) = subMul(v(i, target), q, v(i, source));
    for (int j = 0; j < n; ++j) w(source, j) = narrow(static_cast<Int128>(w(source, j)) + static_cast<Int128>(q) * w(target, j));
  };
  auto swapColumns = [&](int a, int b) {
    c.col(a).swap(c.col(b));
    v.col(a).swap(v.col(b));
    w.row(a).swap(w.row(b));
  };
  for (int r = 0; r < m; ++r) {
    if (r >= n) throw std::invalid_argument("columnEchelon: more rows than columns");
    for (;;) {
      int best = -1;
      for (int j = r; j < n; ++j)
        if (c(r, j) != 0 && (best < 0 || std::llabs(c(r, j)) < std::llabs(c(r, best)))) best = j;
      if (best < 0) throw std::invalid_argument("columnEchelon: rows are linearly dependent");
      if (best != r) swapColumns(r, best);
      bool done = true;
      for (int j = r + 1; j < n; ++j) {
        if (c(r, j) == 0) continue;
        addColumn(j, r, c(r, j) / c(r, r));
        if (c(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (c(r, r) < 0) {
      c.col(r) = -c.col(r);
      v.col(r) = -v.col(r);
      w.row(r) = -w.row(r);
    }
  }
  ColumnEchelon out;
  out.h = c.leftCols(m);
  out.transform = v;
  out.inverse = w;
  out.rank = m;
  return out;
}

IntMatrix integerKernel(const IntMatrix& rows) {
  ColumnEchelon ce = columnEchelon(rows);
  const int n = static_cast<int>(rows.cols());
  return ce.transform.rightCols(n - ce.rank).transpose();
}

IntMatrix hermiteNormalForm(const IntMatrix& rows) {
  IntMatrix a = rows;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  auto subRow = [&](int target, int source, std::int64_t q) {
    for (int j = 0; j < n; ++j) a(target, j) = subMul(a(target, j), q, a(source, j));
  };
  int pr = 0;
  for (int col = 0; col < n && pr < m; ++col) {
    for (;;) {
      int best = -1;
      for (int i = pr; i < m; ++i)
        if (a(i, col) != 0 && (best < 0 || std::llabs(a(i, col)) < std::llabs(a(best, col)))) best = i;
      if (best < 0) break;
      if (best != pr) a.row(pr).swap(a.row(best));
      bool done = true;
      for (int i = pr + 1; i < m; ++i) {
        if (a(i, col) == 0) continue;
        subRow(i, pr, a(i, col) / a(pr, col));
        if (a(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (a(pr, col) == 0) continue;
    if (a(pr, col) < 0) a.row(pr) = -a.row(pr);
    const std::int64_t pivot = a(pr, col);
    for (int i = 0; i < pr; ++i) {
      std::int64_t q = a(i, col) / pivot;
      if (a(i, col) - q * pivot < 0) --q;
      if (q != 0) subRow(i, pr, q);
    }
    ++pr;
  }
  return a.topRows(pr);
}

IntMatrix unimodularCompletion(const IntVector& v) {
  IntMatrix row = v;
  ColumnEchelon ce = columnEchelon(row);
  if (ce.h(0, 0) != 1) throw std::invalid_argument("unimodularCompletion: vector is not primitive");
  return ce.inverse;
}

int integerRank(const IntMatrix& rows) {
  const int m = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  std::vector<std::vector<Int128>> a(m, std::vector<Int128>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = rows(i, j);
  int rank = 0;
  for (int col = 0; col < n && rank < m; ++col) {
    int p = -1;
    for (int i = rank; i < m; ++i)
      if (a[i][col] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[rank]);
    for (int i = rank + 1; i < m; ++i) {
      if (a[i][col] == 0) continue;
      const Int128 f = a[i][col];
      const Int128 piv = a[rank][col];
      Int128 g = 0;
      for (int j = col; j < n; ++j) {
        Int128 x, y;
        if (__builtin_mul_overflow(piv, a[i][j], &x) || __builtin_mul_overflow(f, a[rank][j], &y) ||
            __builtin_sub_overflow(x, y, &x))
          throw NumericalRankLoss("integer overflow in exact rank");
        a[i][j] = x;
        g = gcd128(g, a[i][j]);
      }
      if (g > 1)
        for (int j = col; j < n; ++j) a[i][j] /= g;
    }
    ++rank;
  }
  return rank;
}

Int128 integerDeterminant(const IntMatrix& square) {
  const int n = static_cast<int>(square.rows());
  std::vector<std::vector<Int128>> a(n, std::vector<Int128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = square(i, j);
  Int128 sign = 1;
  Int128 prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int128 x, y;
        if (__builtin_mul_overflow(a[i][j], a[k][k], &x) || __builtin_mul_overflow(a[i][k], a[k][j], &y) ||
            __builtin_sub_overflow(x, y, &x))
          throw NumericalRankLoss("integer overflow in exact determinant");
        a[i][j] = x / prev;
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::int64_t saturationIndex(const IntMatrix& rows) {
  ColumnEchelon ce = columnEchelon(rows);
  Int128 index = 1;
  for (int i = 0; i < ce.rank; ++i) index *= ce.h(i, i);
  return narrow(index);
}

std::int64_t contentGcd(const IntVector& v) {
  std::int64_t g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = std::gcd(g, v(i));
  return g;
}

IntVector signCanonical(const IntVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > 0) return v;
    if (v(i) < 0) return -v;
  }
  return v;
}

IntVector primitiveDirection(const IntVector& v) {
  const std::int64_t g = contentGcd(v);
  if (g == 0) return v;
  IntVector d = v / g;
  return signCanonical(d);
}

bool lexLess(const IntVector& a, const IntVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

}  // namespace latlab
