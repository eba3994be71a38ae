#include <boost/rational.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "latlab/errors.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/minima.hpp"
#include "latlab/sampler.hpp"
#include "oracles.hpp"

using namespace latlab;

namespace {

Matrix diag(std::vector<double> d) {
  const int n = static_cast<int>(d.size());
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

// Gaussian matrix rescaled to determinant exactly 1 up to rounding.
Matrix randomSl(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    const double d = Eigen::MatrixXd(m).determinant();
    if (std::abs(d) < 1e-3) continue;
    if (d < 0) m.row(0) = -m.row(0);
    return m / std::pow(std::abs(d), 1.0 / n);
  }
}

std::vector<double> randomA(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<double> a(n);
  double total = 0;
  for (auto& x : a) total += (x = u(rng));
  for (auto& x : a) x = std::exp(x - total / n);
  return a;
}

}  // namespace

TEST_CASE("decomposition fixtures") {
  auto id = iwasawaDecompose(Matrix::Identity(3, 3));
  CHECK((id.k - Matrix::Identity(3, 3)).norm() < 1e-15);
  CHECK((id.u - Matrix::Identity(3, 3)).norm() < 1e-15);
  for (double a : id.a) CHECK(a == doctest::Approx(1.0).epsilon(1e-15));

  auto d = iwasawaDecompose(diag({2, 1, 0.5}));
  CHECK((d.k - Matrix::Identity(3, 3)).norm() < 1e-15);
  CHECK(d.a[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(d.a[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.a[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK((d.u - Matrix::Identity(3, 3)).norm() < 1e-15);

  std::mt19937_64 rng(5);
  for (int n = 3; n <= 6; ++n) {
    const Matrix q = oracle::randomRotation(rng, n);
    auto c = iwasawaDecompose(q);
    CHECK((c.k - q).norm() < 1e-12);
    CHECK((c.u - Matrix::Identity(n, n)).norm() < 1e-12);
    for (double a : c.a) CHECK(std::abs(a - 1.0) < 1e-12);
  }
}

TEST_CASE("decomposition rejects bad input") {
  CHECK_THROWS_AS(iwasawaDecompose(diag({2, 1, 1})), NumericalRankLoss);
  Matrix sing = Matrix::Zero(3, 3);
  sing(0, 0) = 1;
  CHECK_THROWS_AS(iwasawaDecompose(sing), NumericalRankLoss);
}

TEST_CASE("reconstruction on random inputs") {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int t = 0; t < 10000; ++t) {
    const int n = 3 + t % 4;
    const Matrix g = randomSl(n, rng);
    const auto c = iwasawaDecompose(g);
    const double err = (composeKau(c.k, c.a, c.u) - g).norm() / g.norm();
    worst = std::max(worst, err);
    REQUIRE(Eigen::MatrixXd(c.k).determinant() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE((c.k.transpose() * c.k - Matrix::Identity(n, n)).norm() < 1e-12);
    double prod = 1;
    for (int i = 0; i < n; ++i) {
      REQUIRE(c.a[i] > 0);
      REQUIRE(c.u(i, i) == 1.0);
      for (int j = 0; j < i; ++j) REQUIRE(c.u(i, j) == 0.0);
      prod *= c.a[i];
    }
    REQUIRE(std::abs(prod - 1.0) <= 1e-9);
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("lattice of g is spanned by its columns") {
  std::mt19937_64 rng(3);
  const Matrix g = randomSl(4, rng);
  const auto c = iwasawaDecompose(g);
  const BasisMatrix b = latticeOf(g);
  // Gram–Schmidt norms of the columns are the a-coordinates.
  Eigen::MatrixXd cols = Eigen::MatrixXd(g);
  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXd v = cols.col(j);
    for (int i = 0; i < j; ++i) {
      Eigen::VectorXd e = cols.col(i);
      v -= e.dot(cols.col(j)) / e.squaredNorm() * e;
    }
    cols.col(j) = v;
    CHECK(v.norm() == doctest::Approx(c.a[j]).epsilon(1e-12));
  }
  CHECK((Matrix(b.embedding()) - Matrix(g.transpose())).norm() < 1e-15);
}

TEST_CASE("Siegel set membership") {
  CHECK(inSiegelSet(Matrix::Identity(3, 3)));
  CHECK_FALSE(inSiegelSet(diag({4, 1, 0.25})));
  CHECK(inSiegelSet(diag({2, 1, 0.5})));
  Matrix u = Matrix::Identity(3, 3);
  u(0, 2) = 1.5;
  CHECK_FALSE(inSiegelSet(u));
  u(0, 2) = -1.0;
  CHECK(inSiegelSet(u));
}

TEST_CASE("Haar density") {
  CHECK(haarDensity({1, 1, 1}) == 1.0);
  CHECK(haarDensity({2, 1, 0.5}) == doctest::Approx(16.0).epsilon(1e-15));
  std::mt19937_64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    const int n = 3 + t % 4;
    const auto a = randomA(n, rng);
    const auto b = bCoords(a);
    REQUIRE(haarDensityFromB(b) == doctest::Approx(haarDensity(a)).epsilon(1e-9));
    const auto back = aFromB(b);
    for (int j = 0; j < n; ++j) REQUIRE(back[j] == doctest::Approx(a[j]).epsilon(1e-9));
  }
}

TEST_CASE("Haar density identity in exact arithmetic") {
  using Q = boost::rational<long long>;
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> num(1, 9);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + t % 3;
    std::vector<Q> a(n);
    Q prod = 1;
    for (int i = 0; i + 1 < n; ++i) {
      a[i] = Q(num(rng), num(rng));
      prod *= a[i];
    }
    a[n - 1] = 1 / prod;
    Q lhs = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) lhs *= a[i] / a[j];
    Q rhs = 1;
    for (int i = 1; i < n; ++i)
      for (int e = 0; e < i * (n - i); ++e) rhs *= a[i - 1] / a[i];
    REQUIRE(lhs == rhs);
  }
}

TEST_CASE("Jacobian of b to a") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 3;
    std::vector<double> b(n - 1);
    for (auto& x : b) x = u(rng);
    const auto j = jacobianAB(b);
    worst = std::max(worst, j.relativeError);
    CHECK(j.closedForm == doctest::Approx(1.0 / (n * aFromB(b)[0])).epsilon(1e-14));
  }
  CHECK(worst <= 1e-5);
  // n = 2: the constant is 1/(2a₁).
  const auto j2 = jacobianAB({1.7});
  CHECK(j2.numeric == doctest::Approx(1.0 / (2 * aFromB({1.7})[0])).epsilon(1e-5));
}

TEST_CASE("piEll") {
  for (int l = 1; l <= 3; ++l) CHECK(piEll(Matrix::Identity(3, 3), l) == doctest::Approx(1.0));
  CHECK(piEll(diag({2, 1, 0.5}), 1) == doctest::Approx(2.0));
  CHECK_THROWS_AS(piEll(Matrix::Identity(3, 3), 4), ConfigError);
}

TEST_CASE("piEll is comparable to the successive minima on the Siegel set") {
  // Bracket frozen from pilots of 10⁴ and 2·10⁵ draws (ε₀ = 0.05).
  const double lo[3] = {1.0 - 1e-9, 0.5 - 1e-9, 0.25 - 1e-9};
  const double hi[3] = {4.0 + 1e-9, 2.0 + 1e-9, 1.0 + 1e-9};
  SamplerConfig cfg;
  cfg.dim = 3;
  cfg.method = SamplerMethod::siegelIwasawa;
  cfg.seed = 2024;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    cfg.trialIndex = t;
    const auto s = sampleSiegelIwasawa(cfg, 0.05);
    const auto m = successiveMinima(s.basis);
    for (int l = 1; l <= 3; ++l) {
      const double r = piEll(s.g, l) / m.betas[l - 1];
      REQUIRE(r >= lo[l - 1]);
      REQUIRE(r <= hi[l - 1]);
    }
  }
}
