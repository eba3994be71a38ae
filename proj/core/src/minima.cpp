#include "latlab/minima.hpp"

#include <cmath>
#include <type_traits>

#include "latlab/integer.hpp"

namespace latlab {

namespace {

// Greedy extraction: the k-th minimum is the shortest vector outside the span
// W of the previous witnesses. The working basis keeps a basis of W ∩ Λ in its
// first k rows, so "outside W" is "some coordinate at index ≥ k is nonzero".
template <class Rows>
MinimaProfile greedyMinima(const BasisMatrix& input, Rows cur, IntMatrix t, int count,
                           const EnumerationOptions& options) {
  constexpr bool kExact = std::is_same_v<typename Rows::Scalar, std::int64_t>;
  const int n = input.dim();
  const double scale = kExact ? input.scale() : 1.0;
  MinimaProfile out;
  IntVector x(n);

  auto normOf = [&](const IntVector& c) -> long double {
    if constexpr (kExact) {
      Int128 total = 0;
      for (int j = 0; j < n; ++j) {
        Int128 acc = 0;
        for (int i = 0; i < n; ++i) acc += static_cast<Int128>(c(i)) * cur(i, j);
        total += acc * acc;
      }
      return static_cast<long double>(total);
    } else {
      return (c.cast<double>() * cur).squaredNorm();
    }
  };

  for (int k = 0; k < count; ++k) {
    detail::GramSchmidt gs = detail::gramSchmidt(cur.template cast<double>());
    long double best = -1;
    IntVector bestLocal(n);
    IntVector bestInput(n);

    auto offer = [&](const IntVector& c) {
      const long double ns = normOf(c);
      bool take = false;
      IntVector canon = signCanonical(IntVector(c * t));
      if (best < 0) {
        take = true;
      } else if (kExact) {
        take = ns < best || (ns == best && lexLess(canon, bestInput));
      } else {
        const long double tol = 1e-12L * best;
        take = ns < best - tol || (std::fabs(ns - best) <= tol && lexLess(canon, bestInput));
      }
      if (take) {
        best = ns;
        bestLocal = c;
        bestInput = canon;
      }
    };

    for (int j = k; j < n; ++j) {
      IntVector e = IntVector::Zero(n);
      e(j) = 1;
      offer(e);
    }
    long double bound = best * (1.0L + 1e-9L) + 1e-300L;
    if (detail::predictedVisits(gs, bound) > options.maxCount)
      throw ExplosionGuard("predicted enumeration count exceeds cap");
    detail::enumerate(gs, bound, k, options.maxCount, [&](const std::int64_t* xs, long double) {
      for (int j = 0; j < n; ++j) x(j) = xs[j];
      offer(x);
      bound = best * (1.0L + 1e-9L) + 1e-300L;
    });

    out.betas.push_back(std::sqrt(static_cast<double>(best)) * scale);
    out.witnesses.push_back(makePoint(input, bestInput));
    if (k + 1 == count) break;

    // Rebuild the working basis so that rows [0, k] span the saturated W.
    const int m = n - k;
    IntVector tail = bestLocal.tail(m);
    tail /= contentGcd(tail);
    IntMatrix v = unimodularCompletion(tail);
    Rows newTail(m, n);
    IntMatrix newT(m, n);
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) {
        if constexpr (kExact) {
          Int128 acc = 0;
          for (int i = 0; i < m; ++i) acc += static_cast<Int128>(v(r, i)) * cur(k + i, j);
          newTail(r, j) = narrow(acc);
        } else {
          double acc = 0;
          for (int i = 0; i < m; ++i) acc += static_cast<double>(v(r, i)) * cur(k + i, j);
          newTail(r, j) = acc;
        }
        Int128 acc = 0;
        for (int i = 0; i < m; ++i) acc += static_cast<Int128>(v(r, i)) * t(k + i, j);
        newT(r, j) = narrow(acc);
      }
    }
    cur.bottomRows(m) = newTail;
    t.bottomRows(m) = newT;
    IntMatrix u = IntMatrix::Identity(n, n);
    LllOptions opt;
    opt.fixedPrefix = k + 1;
    if constexpr (kExact)
      lllReduceRows(cur, u, opt, scale * scale);
    else
      lllReduceRows(cur, u, opt);
    t = u * t;
  }
  return out;
}

}  // namespace

MinimaProfile leadingMinima(const BasisMatrix& basis, int count, const EnumerationOptions& options) {
  Reduction red = lllReduceWithTransform(basis);
  if (basis.integral())
    return greedyMinima(basis, red.basis.integerRows(), red.transform, count, options);
  return greedyMinima(basis, red.basis.embedding(), red.transform, count, options);
}

MinimaProfile successiveMinima(const BasisMatrix& basis, const EnumerationOptions& options) {
  return leadingMinima(basis, basis.dim(), options);
}

double shortestVectorLength(const BasisMatrix& basis, const EnumerationOptions& options) {
  return leadingMinima(basis, 1, options).betas.front();
}

ProductBracket minkowskiProductBracket(int n) {
  const double vn = unitBallVolume(n);
  const double upper = std::pow(2.0, n) / vn;
  return {upper / std::tgamma(n + 1.0), upper};
}

}  // namespace latlab
