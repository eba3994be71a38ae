#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/basis.hpp"
#include "latlab/enumeration.hpp"
#include "latlab/sampler.hpp"
#include "latlab/stats.hpp"

namespace latlab {

/// Nondecreasing weight ψ with ∫^∞ 1/ψ < ∞.
struct Psi {
  enum class Kind { power, logSquared };
  Kind kind = Kind::power;
  /// ψ(t) = t^exponent for Kind::power; exponent > 1.
  double exponent = 1.5;

  double operator()(double t) const;
  /// "poly:<e>" or "loglog" (ψ(t) = t·log²(2+t)).
  static Psi parse(const std::string& text);
  std::string name() const;
};

/// Products of nested centered balls E_{j,M} with m(E_{j,M}) = cⱼ·M.
struct RegionFamily {
  int dim = 3;
  int ell = 1;
  std::vector<double> coordinateVolumes;

  static RegionFamily uniform(int dim, int ell);
  /// Throws ConfigError on bad ranges or ∏cⱼ ∉ 1 ± 1e-12.
  void validate() const;
  double volume(int j, double M) const { return coordinateVolumes[j] * M; }
  double radius(int j, double M) const;
};

struct TupleCounts {
  std::vector<std::uint64_t> perFactorCounts;
  std::uint64_t hatValue = 0;
  std::uint64_t tildeValue = 0;
};

struct DiscrepancyPoint {
  double M = 0.0;
  double dFull = 0.0;
  double dIndep = 0.0;
  double boundValue = 0.0;
};

/// hatValue and perFactorCounts only (tildeValue left at 0).
TupleCounts hatTransform(const BasisMatrix& basis, const RegionFamily& family, double M,
                         const EnumerationOptions& options = {});
/// Both transforms.
TupleCounts tildeTransform(const BasisMatrix& basis, const RegionFamily& family, double M,
                           const EnumerationOptions& options = {});
/// Both transforms on every grid point from a single enumeration.
std::vector<TupleCounts> tupleCountsOnGrid(const BasisMatrix& basis, const RegionFamily& family,
                                           const std::vector<double>& grid, const EnumerationOptions& options = {});

/// (log M)·M^{−1/2}·ψ(log M)^{1/2}.
double discrepancyBound(double M, const Psi& psi);

std::vector<DiscrepancyPoint> discrepancy(const BasisMatrix& basis, const RegionFamily& family,
                                          const std::vector<double>& grid, const Psi& psi,
                                          const EnumerationOptions& options = {});

/// hatValue − M^ℓ.
double centeredCount(const BasisMatrix& basis, const RegionFamily& family, double M,
                     const EnumerationOptions& options = {});

struct MeanValueResult {
  double meanTilde = 0.0;
  double standardError = 0.0;
  double target = 0.0;
  std::uint64_t trials = 0;
  bool pass = false;
};

/// Monte Carlo E[tilde] against M^ℓ; PASS iff within 3·stderr.
MeanValueResult meanValueCheck(const LatticeSource& source, const RegionFamily& family, double M,
                               std::uint64_t trials, int workers = 0);

struct MomentGapPoint {
  double V = 0.0;
  double gapOverPower = 0.0;  // E[hat − tilde] / V^{ℓ−1}
  double standardError = 0.0;
};

struct MomentGapReport {
  std::vector<MomentGapPoint> points;
  TrendTest trend;
  bool bounded = false;
};

/// E[hat − tilde]/V^{ℓ−1} on an increasing grid with uniform coordinate
/// volumes. Grid point k uses trial indices [k·trials, (k+1)·trials).
/// Bounded iff Mann–Kendall finds no upward trend at 5%. Grids of
/// fewer than 3 points are not tested and count as bounded.
MomentGapReport momentGapEstimate(const LatticeSource& source, int dim, int ell, const std::vector<double>& grid,
                                  std::uint64_t trials, int workers = 0);

}  // namespace latlab
