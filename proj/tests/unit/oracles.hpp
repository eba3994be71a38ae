// Brute-force reference computations shared by the unit tests. They work
// directly on coefficient boxes and never call the enumeration kernel.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/integer.hpp"
#include "latlab/linalg.hpp"

namespace oracle {

using latlab::Int128;
using latlab::IntMatrix;
using latlab::IntVector;
using latlab::Matrix;

// |xᵢ| ≤ R·‖dᵢ‖ for every lattice vector xB of norm ≤ R, d = B^{-T}.
inline std::vector<std::int64_t> coefficientBox(const Matrix& emb, double radius) {
  const Eigen::MatrixXd d = Eigen::MatrixXd(emb).inverse().transpose();
  std::vector<std::int64_t> box;
  for (int i = 0; i < d.rows(); ++i) box.push_back(static_cast<std::int64_t>(std::floor(radius * d.row(i).norm() + 1e-9)));
  return box;
}

inline void forBox(const std::vector<std::int64_t>& box, const std::function<void(const IntVector&)>& f) {
  const int n = static_cast<int>(box.size());
  IntVector x(n);
  for (int i = 0; i < n; ++i) x(i) = -box[i];
  for (;;) {
    f(x);
    int i = 0;
    while (i < n && x(i) == box[i]) {
      x(i) = -box[i];
      ++i;
    }
    if (i == n) return;
    ++x(i);
  }
}

inline long double normSq(const latlab::BasisMatrix& b, const IntVector& x) {
  if (b.integral()) {
    const long double s = b.scale();
    return static_cast<long double>(latlab::exactNormSq(b, x)) * s * s;
  }
  long double total = 0;
  for (int j = 0; j < b.dim(); ++j) {
    long double acc = 0;
    for (int i = 0; i < b.dim(); ++i) acc += static_cast<long double>(x(i)) * b.embedding()(i, j);
    total += acc * acc;
  }
  return total;
}

// Nonzero vectors with norm ≤ radius, coefficients relative to b.
inline std::vector<IntVector> points(const latlab::BasisMatrix& b, double radius) {
  std::vector<IntVector> out;
  const auto box = coefficientBox(b.embedding(), radius);
  const latlab::Int128 ib = b.integral() ? latlab::integerNormBound(b, radius) : 0;
  forBox(box, [&](const IntVector& x) {
    if (x.isZero()) return;
    const bool in = b.integral() ? latlab::exactNormSq(b, x) <= ib
                                 : normSq(b, x) <= static_cast<long double>(latlab::realNormBound(radius));
    if (in) out.push_back(x);
  });
  return out;
}

// Successive minima by sorting all short vectors and greedily taking the
// rank-increasing ones; radius doubles until rank n is reached.
inline std::vector<double> minima(const latlab::BasisMatrix& b) {
  const int n = b.dim();
  for (double r = 1.0;; r *= 1.5) {
    auto pts = points(b, r);
    std::sort(pts.begin(), pts.end(), [&](const IntVector& a, const IntVector& c) { return normSq(b, a) < normSq(b, c); });
    std::vector<double> betas;
    IntMatrix chosen(0, n);
    for (const auto& p : pts) {
      IntMatrix next(chosen.rows() + 1, n);
      next.topRows(chosen.rows()) = chosen;
      next.row(chosen.rows()) = p;
      if (latlab::integerRank(next) > chosen.rows()) {
        chosen = next;
        betas.push_back(std::sqrt(static_cast<double>(normSq(b, p))));
      }
    }
    if (static_cast<int>(betas.size()) == n) return betas;
  }
}

inline Matrix randomRotation(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

inline latlab::BasisMatrix heckeBasis(std::int64_t p, const std::vector<std::int64_t>& a) {
  const int n = static_cast<int>(a.size()) + 1;
  IntMatrix m = IntMatrix::Zero(n, n);
  m(0, 0) = p;
  for (int i = 1; i < n; ++i) {
    m(i, 0) = a[i - 1];
    m(i, i) = 1;
  }
  return latlab::BasisMatrix::fromIntegerRows(m, p);
}

inline latlab::BasisMatrix randomHecke(std::mt19937_64& rng, int n, std::int64_t p) {
  std::uniform_int_distribution<std::int64_t> u(0, p - 1);
  std::vector<std::int64_t> a(n - 1);
  for (auto& x : a) x = u(rng);
  return heckeBasis(p, a);
}

// Random real covolume-one basis: rotation times a random triangular matrix.
inline latlab::BasisMatrix randomReal(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> d(0.3, 1.5);
  Matrix t = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = d(rng);
    for (int j = i + 1; j < n; ++j) t(i, j) = u(rng);
  }
  Matrix m = t * randomRotation(rng, n);
  m /= std::pow(std::abs(m.determinant()), 1.0 / n);
  return latlab::BasisMatrix::fromRows(m);
}

}  // namespace oracle
