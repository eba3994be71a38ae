#include "latlab/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latlab/errors.hpp"

namespace latlab {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    carry_ += (sum_ - t) + x;
  else
    carry_ += (x - t) + sum_;
  sum_ = t;
}

MeanEstimate meanEstimate(const std::vector<double>& values) {
  MeanEstimate out;
  out.count = values.size();
  if (values.empty()) return out;
  CompensatedSum s;
  for (double v : values) s.add(v);
  out.mean = s.value() / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  CompensatedSum ss;
  for (double v : values) ss.add((v - out.mean) * (v - out.mean));
  const double var = ss.value() / static_cast<double>(values.size() - 1);
  out.standardError = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

Interval wilsonInterval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (hits == 0) ci.lo = 0.0;
  if (hits == trials) ci.hi = 1.0;
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

double ksStatistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("KS statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ksCriticalValue(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

namespace {

int kendallS(const std::vector<double>& x) {
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) s += (x[j] > x[i]) - (x[j] < x[i]);
  return s;
}

}  // namespace

TrendTest mannKendall(const std::vector<double>& series, double alpha) {
  const std::size_t n = series.size();
  if (n < 3) throw InsufficientData("Mann-Kendall needs at least 3 points");
  TrendTest out;
  const int s = kendallS(series);
  out.statistic = s;
  if (n <= 10) {
    // Exact null distribution of S under exchangeability (no ties).
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> y(n);
    std::uint64_t total = 0, atLeast = 0;
    do {
      for (std::size_t i = 0; i < n; ++i) y[i] = perm[i];
      ++total;
      if (kendallS(y) >= s) ++atLeast;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.pValue = static_cast<double>(atLeast) / static_cast<double>(total);
  } else {
    const double nn = static_cast<double>(n);
    const double var = nn * (nn - 1) * (2 * nn + 5) / 18.0;
    const double z = s > 0 ? (s - 1) / std::sqrt(var) : (s < 0 ? (s + 1) / std::sqrt(var) : 0.0);
    out.pValue = boost::math::cdf(boost::math::complement(boost::math::normal(), z));
  }
  out.upwardTrend = out.pValue < alpha;
  return out;
}

LinearFit weightedLinearFit(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& w) {
  const std::size_t m = x.size();
  if (m < 2 || y.size() != m || w.size() != m) throw InsufficientData("linear fit needs ≥ 2 matching points");
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
    sxy += w[i] * (x[i] - mx) * (y[i] - my);
    syy += w[i] * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0)) throw InsufficientData("linear fit needs distinct abscissae");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += w[i] * r * r;
  }
  f.r2 = syy > 0 ? 1.0 - rss / syy : 1.0;
  f.slopeStderr = m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
  return f;
}

double chiSquareSurvival(double statistic, double dof) {
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), statistic));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InsufficientData("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

}  // namespace latlab
