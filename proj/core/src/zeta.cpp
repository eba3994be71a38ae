#include "latlab/zeta.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>

#include "latlab/dual.hpp"
#include "latlab/errors.hpp"
#include "latlab/minima.hpp"
#include "latlab/stats.hpp"

namespace latlab {

double scaledUpperGamma(double sigma, double x) {
  if (!(x > 0)) throw ConfigError("scaledUpperGamma needs x > 0");
  if (sigma > 0) return std::pow(x, -sigma) * boost::math::tgamma(sigma, x);
  // Γ(σ, x) = (Γ(σ+1, x) − x^σ e^{−x}) / σ, stepped up from σ + m ∈ (0, 1] or 0.
  const int m = static_cast<int>(std::ceil(-sigma));
  double top = sigma + m;
  double g = top > 0 ? boost::math::tgamma(top, x) : boost::math::expint(1, x);
  for (double a = top - 1; a >= sigma - 1e-12; a -= 1.0) g = (g - std::pow(x, a) * std::exp(-x)) / a;
  return std::pow(x, -sigma) * g;
}

namespace {

// Gram–Schmidt norms of the reduced basis in embedding units.
std::vector<double> gramSchmidtNorms(const ReducedLattice& lattice) {
  const auto& gs = lattice.gramSchmidt();
  const double scale = lattice.reduced().scale();
  std::vector<double> out(gs.n);
  for (int i = 0; i < gs.n; ++i) out[i] = std::sqrt(static_cast<double>(gs.norm[i])) * scale;
  return out;
}

double minGramSchmidtNorm(const ReducedLattice& lattice) {
  const auto norms = gramSchmidtNorms(lattice);
  return *std::min_element(norms.begin(), norms.end());
}

double packingCount(double t, double lambda, int n) { return std::pow(1.0 + 2.0 * t / lambda, n); }

// Bound on Σ_{‖v‖>R} g(‖v‖) given g(t) ≤ g(R)·e^{−c(t²−R²)}, via shells of
// width h. The term ratio decreases in k, so once it drops below q < 1 the rest
// is at most term·q/(1−q).
double gaussianTail(double gR, double c, double R, double lambda, int n) {
  if (gR == 0) return 0;
  const double h = 0.5 / std::sqrt(c);
  double total = 0;
  double prev = -1;
  for (int k = 0; k < 100000; ++k) {
    const double inner = R + k * h;
    const double term = packingCount(inner + h, lambda, n) * std::exp(-c * (inner * inner - R * R));
    total += term;
    if (prev > 0) {
      const double q = term / prev;
      if (q < 0.5 && term < 1e-18 * total) return gR * (total + term * q / (1 - q));
    }
    prev = term;
  }
  throw ExplosionGuard("zeta tail bound did not converge");
}

struct Side {
  ReducedLattice lattice;
  std::vector<double> norms;
  double lambda;
  explicit Side(const BasisMatrix& b, const EnumerationOptions& o)
      : lattice(b, o), norms(gramSchmidtNorms(lattice)), lambda(*std::min_element(norms.begin(), norms.end())) {}

  // Enumeration cost proxy ∏(1 + 2R/‖bᵢ*‖).
  double cost(double R) const {
    double c = 1;
    for (double b : norms) c *= 1.0 + 2.0 * R / b;
    return c;
  }
};

}  // namespace

ZetaResult epsteinZeta(const BasisMatrix& basis, double s, const ZetaOptions& options) {
  const int n = basis.dim();
  if (!(s > n / 2.0 + 1e-6)) throw SNearPole("s must exceed n/2 + 1e-6");
  if (!(options.tol > 0)) throw ConfigError("zeta tolerance must be positive");
  const Side primal(basis, options.enumeration);
  const Side dual(dualBasis(basis), options.enumeration);
  const double sigma = n / 2.0 - s;

  // Split scale a: primal terms decay like e^{−πa t²}, dual like e^{−πt²/a}.
  double a = 1.0, best = std::numeric_limits<double>::infinity();
  for (int k = -80; k <= 80; ++k) {
    const double cand = std::ldexp(1.0, k);
    const double c = primal.cost(std::sqrt(20 / (M_PI * cand))) + dual.cost(std::sqrt(20 * cand / M_PI));
    if (c < best) {
      best = c;
      a = cand;
    }
  }
  const double prefactor = std::pow(M_PI, s) / std::tgamma(s);
  const double constant = std::pow(a, s - n / 2.0) / (s - n / 2.0) - std::pow(a, s) / s;

  for (double x0 = 16.0;; x0 += 8.0) {
    if (x0 > 700) throw ExplosionGuard("zeta tolerance not reachable");
    const double Rp = std::sqrt(x0 / (M_PI * a));
    const double Rd = std::sqrt(x0 * a / M_PI);
    CompensatedSum sum, magnitude;
    std::uint64_t terms = 0;
    primal.lattice.forEach(Rp, [&](const IntVector&, double normSq, Int128) {
      sum.add(std::pow(a, s) * scaledUpperGamma(s, M_PI * a * normSq));
      ++terms;
    });
    dual.lattice.forEach(Rd, [&](const IntVector&, double normSq, Int128) {
      sum.add(std::pow(a, -sigma) * scaledUpperGamma(sigma, M_PI * normSq / a));
      ++terms;
    });
    const double partial = sum.value() + constant;
    const double tail = gaussianTail(std::pow(a, s) * scaledUpperGamma(s, M_PI * a * Rp * Rp), M_PI * a, Rp,
                                     primal.lambda, n) +
                        gaussianTail(std::pow(a, -sigma) * scaledUpperGamma(sigma, M_PI * Rd * Rd / a), M_PI / a,
                                     Rd, dual.lambda, n);
    // Rounding in the special functions and the sum.
    const double rounding = 2e-14 * (std::abs(sum.value()) + std::abs(constant)) * (1.0 + 1e-4 * terms);
    ZetaResult r;
    r.s = s;
    r.value = prefactor * (partial - rounding);
    r.tailBound = prefactor * (tail + 2 * rounding);
    r.radiusUsed = Rp;
    r.dualRadiusUsed = Rd;
    const double target = options.relative ? options.tol * r.value : options.tol;
    if (r.tailBound <= target || (tail <= rounding && x0 >= 64)) {
      const double beta1 = shortestVectorLength(basis, options.enumeration);
      if (r.value + r.tailBound < std::pow(beta1, -2 * s) * (1 - 1e-9))
        throw NumericalRankLoss("zeta value below its shortest-vector term");
      return r;
    }
  }
}

ZetaResult epsteinZetaDirect(const BasisMatrix& basis, double s, const double radius,
                             const EnumerationOptions& options) {
  const int n = basis.dim();
  if (!(s > n / 2.0 + 1e-6)) throw SNearPole("s must exceed n/2 + 1e-6");
  const ReducedLattice lattice(basis, options);
  const double lambda = minGramSchmidtNorm(lattice);
  const int K = std::max(2, static_cast<int>(std::ceil(radius)));
  CompensatedSum sum;
  lattice.forEach(K, [&](const IntVector&, double normSq, Int128) { sum.add(std::pow(normSq, -s)); });

  // Σ_{k>K} P(k)((k−1)^{−2s} − k^{−2s}) ≤ 2s Σ_{m≥K} P(m+1) m^{−2s−1} with
  // P(m+1) = Σⱼ cⱼ mʲ, and Σ_{m≥K} m^{−e} ≤ K^{−e} + K^{1−e}/(e−1).
  double tail = 0;
  const double base = 1.0 + 2.0 / lambda, slope = 2.0 / lambda;
  for (int j = 0; j <= n; ++j) {
    const double c = boost::math::binomial_coefficient<double>(n, j) * std::pow(slope, j) * std::pow(base, n - j);
    const double e = 2 * s + 1 - j;
    tail += 2 * s * c * (std::pow(K, -e) + std::pow(K, 1 - e) / (e - 1));
  }
  ZetaResult r;
  r.s = s;
  r.value = sum.value() * (1 - 1e-13);
  r.tailBound = tail + 2e-13 * sum.value();
  r.radiusUsed = K;
  return r;
}

double zetaObservable(const BasisMatrix& basis, double s) {
  ZetaOptions o;
  o.tol = 1e-6;
  o.relative = true;
  const ZetaResult r = epsteinZeta(basis, s, o);
  return std::log(r.value + r.tailBound / 2);
}

}  // namespace latlab
