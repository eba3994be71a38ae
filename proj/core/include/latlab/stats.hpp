#pragma once

#include <cstdint>
#include <vector>

namespace latlab {

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double standardError = 0.0;
  std::uint64_t count = 0;
};

/// Sample mean and standard error, accumulated in index order.
MeanEstimate meanEstimate(const std::vector<double>& values);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval at 95% (z = 1.96).
Interval wilsonInterval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

/// Two-sample Kolmogorov–Smirnov statistic sup |F_a − F_b|.
double ksStatistic(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(α)·sqrt((n+m)/(nm)).
double ksCriticalValue(std::size_t n, std::size_t m, double alpha);

struct TrendTest {
  double statistic = 0.0;  // Mann–Kendall S
  double pValue = 1.0;     // one-sided, against an upward trend
  bool upwardTrend = false;
};

/// Mann–Kendall test for an upward trend: exact null distribution for up to
/// 10 points, normal approximation with continuity correction beyond.
TrendTest mannKendall(const std::vector<double>& series, double alpha = 0.05);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStderr = 0.0;
  double r2 = 0.0;
};

/// Weighted least squares y ≈ intercept + slope·x. The slope standard error
/// uses the residual variance, so exact data give zero.
LinearFit weightedLinearFit(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& w);

double chiSquareSurvival(double statistic, double dof);

/// Linear-interpolation quantile (type 7).
double quantile(std::vector<double> values, double q);

}  // namespace latlab
