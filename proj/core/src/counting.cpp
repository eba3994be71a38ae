#include "latlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "latlab/errors.hpp"
#include "latlab/integer.hpp"
#include "latlab/parallel.hpp"

namespace latlab {

double Psi::operator()(double t) const {
  if (kind == Kind::power) return std::pow(t, exponent);
  const double l = std::log(2.0 + t);
  return t * l * l;
}

Psi Psi::parse(const std::string& text) {
  Psi p;
  if (text == "loglog") {
    p.kind = Kind::logSquared;
    return p;
  }
  if (text.rfind("poly:", 0) == 0) {
    std::size_t used = 0;
    try {
      p.exponent = std::stod(text.substr(5), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size() - 5) throw ConfigError("bad psi exponent in '" + text + "'");
    if (!(p.exponent > 1.0)) throw ConfigError("psi exponent must exceed 1 for a convergent integral");
    return p;
  }
  throw ConfigError("unknown psi preset '" + text + "' (expected poly:<e> or loglog)");
}

std::string Psi::name() const {
  if (kind == Kind::logSquared) return "loglog";
  char buf[64];
  std::snprintf(buf, sizeof buf, "poly:%.17g", exponent);
  return buf;
}

RegionFamily RegionFamily::uniform(int dim, int ell) {
  RegionFamily f;
  f.dim = dim;
  f.ell = ell;
  f.coordinateVolumes.assign(ell, 1.0);
  return f;
}

void RegionFamily::validate() const {
  if (dim < 3 || dim > kMaxDim) throw ConfigError("region family dimension must lie in [3, 8]");
  if (ell < 1 || ell > dim - 1) throw ConfigError("ell must lie in [1, n−1]");
  if (static_cast<int>(coordinateVolumes.size()) != ell) throw ConfigError("need one coordinate volume per factor");
  double prod = 1.0;
  for (double c : coordinateVolumes) {
    if (!(c > 0)) throw ConfigError("coordinate volumes must be positive");
    prod *= c;
  }
  if (std::abs(prod - 1.0) > 1e-12) throw ConfigError("coordinate volumes must multiply to 1");
}

double RegionFamily::radius(int j, double M) const { return ballRadius(dim, volume(j, M)); }

namespace {

struct Point {
  IntVector coeffs;  // relative to the reduced basis
  double normSq;
  Int128 exact;  // −1 for real provenance
  int line = -1;
};

struct Bound {
  Int128 exact;
  double real;
};

bool inside(const Point& p, const Bound& b) { return p.exact >= 0 ? p.exact <= b.exact : p.normSq <= b.real; }

struct LineHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (auto x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
    return h;
  }
};

bool lessByNorm(const Point& a, const Point& b) { return a.exact >= 0 ? a.exact < b.exact : a.normSq < b.normSq; }

std::uint64_t checkedProduct(const std::vector<std::uint64_t>& xs) {
  std::uint64_t out = 1;
  for (auto x : xs)
    if (__builtin_mul_overflow(out, x, &out)) throw ExplosionGuard("tuple count overflows 64 bits");
  return out;
}

// Points of Λ∖{0} in the largest ball of the grid, sorted by norm, with
// their lines (rational directions) numbered.
struct PointSet {
  std::vector<Point> points;
  std::vector<std::vector<std::size_t>> lines;  // point indices per line, sorted by norm
  const ReducedLattice* lattice = nullptr;

  Bound bound(double radius) const {
    const BasisMatrix& b = lattice->reduced();
    return {b.integral() ? integerNormBound(b, radius) : Int128(0), realNormBound(radius)};
  }
  std::uint64_t countInside(const Bound& b) const {
    return static_cast<std::uint64_t>(
        std::partition_point(points.begin(), points.end(), [&](const Point& p) { return inside(p, b); }) -
        points.begin());
  }
  std::uint64_t countOnLine(int line, const Bound& b) const {
    const auto& idx = lines[line];
    return static_cast<std::uint64_t>(
        std::partition_point(idx.begin(), idx.end(), [&](std::size_t i) { return inside(points[i], b); }) -
        idx.begin());
  }
};

PointSet collect(const ReducedLattice& lattice, double radius) {
  PointSet set;
  set.lattice = &lattice;
  lattice.forEach(radius, [&](const IntVector& x, double normSq, Int128 exact) {
    set.points.push_back({x, normSq, exact, -1});
  });
  std::sort(set.points.begin(), set.points.end(), lessByNorm);
  std::unordered_map<std::vector<std::int64_t>, int, LineHash> ids;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    const IntVector d = primitiveDirection(set.points[i].coeffs);
    auto [it, fresh] = ids.try_emplace(std::vector<std::int64_t>(d.data(), d.data() + d.size()),
                                       static_cast<int>(set.lines.size()));
    if (fresh) set.lines.emplace_back();
    set.points[i].line = it->second;
    set.lines[it->second].push_back(i);
  }
  return set;
}

// Ordered rank-ℓ tuples with vⱼ ∈ Eⱼ, recursing over all but the last factor
// and counting the last one as N_ℓ minus the points inside the partial span.
std::uint64_t tildeRecursive(const PointSet& set, const std::vector<Bound>& bounds, std::uint64_t cap) {
  const int ell = static_cast<int>(bounds.size());
  const int n = set.lattice->dim();
  std::vector<std::vector<std::size_t>> members(ell);
  for (int j = 0; j < ell; ++j)
    for (std::size_t i = 0; i < set.points.size() && inside(set.points[i], bounds[j]); ++i) members[j].push_back(i);
  std::uint64_t total = 0, work = 0;
  IntMatrix span(0, n);
  std::function<void(int)> recurse = [&](int level) {
    const IntMatrix kernel = span.rows() == 0 ? IntMatrix::Identity(n, n) : integerKernel(span);
    auto inSpan = [&](const IntVector& x) {
      if (span.rows() == 0) return false;
      for (int r = 0; r < kernel.rows(); ++r)
        if (kernel.row(r).dot(x) != 0) return false;
      return true;
    };
    if (level == ell - 1) {
      std::uint64_t dependent = 0;
      for (std::size_t i : members[level]) dependent += inSpan(set.points[i].coeffs);
      work += members[level].size();
      total += members[level].size() - dependent;
    } else {
      for (std::size_t i : members[level]) {
        if (++work > cap) throw ExplosionGuard("tuple enumeration exceeds cap");
        const IntVector& x = set.points[i].coeffs;
        if (inSpan(x)) continue;
        span.conservativeResize(span.rows() + 1, n);
        span.row(span.rows() - 1) = x;
        recurse(level + 1);
        span.conservativeResize(span.rows() - 1, n);
      }
    }
  };
  recurse(0);
  return total;
}

TupleCounts countsAt(const PointSet& set, const RegionFamily& family, double M, bool withTilde, std::uint64_t cap) {
  TupleCounts out;
  if (!(M > 0)) {
    out.perFactorCounts.assign(family.ell, 0);
    return out;
  }
  std::vector<Bound> bounds;
  for (int j = 0; j < family.ell; ++j) {
    bounds.push_back(set.bound(family.radius(j, M)));
    out.perFactorCounts.push_back(set.countInside(bounds.back()));
  }
  out.hatValue = checkedProduct(out.perFactorCounts);
  if (!withTilde) return out;
  if (family.ell == 1) {
    out.tildeValue = out.hatValue;
  } else if (family.ell == 2) {
    // Dependent pairs are the collinear ones: Σ over lines of m₁(L)·m₂(L).
    std::uint64_t dependent = 0;
    for (std::size_t i = 0; i < set.points.size() && inside(set.points[i], bounds[0]); ++i)
      dependent += set.countOnLine(set.points[i].line, bounds[1]);
    out.tildeValue = out.hatValue - dependent;
  } else {
    out.tildeValue = tildeRecursive(set, bounds, cap);
  }
  return out;
}

double largestRadius(const RegionFamily& family, const std::vector<double>& grid) {
  double r = 0;
  for (double M : grid) {
    if (M < 0 || !std::isfinite(M)) throw ConfigError("M must be finite and nonnegative");
    for (int j = 0; j < family.ell; ++j)
      if (M > 0) r = std::max(r, family.radius(j, M));
  }
  return r;
}

std::vector<TupleCounts> onGrid(const BasisMatrix& basis, const RegionFamily& family, const std::vector<double>& grid,
                                bool withTilde, const EnumerationOptions& options) {
  family.validate();
  if (basis.dim() != family.dim) throw ConfigError("basis dimension does not match region family");
  const ReducedLattice lattice(basis, options);
  const PointSet set = collect(lattice, largestRadius(family, grid));
  std::vector<TupleCounts> out;
  out.reserve(grid.size());
  for (double M : grid) out.push_back(countsAt(set, family, M, withTilde, options.maxCount));
  return out;
}

}  // namespace

TupleCounts hatTransform(const BasisMatrix& basis, const RegionFamily& family, double M,
                         const EnumerationOptions& options) {
  return onGrid(basis, family, {M}, false, options).front();
}

TupleCounts tildeTransform(const BasisMatrix& basis, const RegionFamily& family, double M,
                           const EnumerationOptions& options) {
  return onGrid(basis, family, {M}, true, options).front();
}

std::vector<TupleCounts> tupleCountsOnGrid(const BasisMatrix& basis, const RegionFamily& family,
                                           const std::vector<double>& grid, const EnumerationOptions& options) {
  return onGrid(basis, family, grid, true, options);
}

double discrepancyBound(double M, const Psi& psi) {
  const double l = std::log(M);
  return l * std::sqrt(psi(l) / M);
}

std::vector<DiscrepancyPoint> discrepancy(const BasisMatrix& basis, const RegionFamily& family,
                                          const std::vector<double>& grid, const Psi& psi,
                                          const EnumerationOptions& options) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 1.0)) throw ConfigError("discrepancy grid needs M ≥ 1");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("discrepancy grid must be increasing");
  }
  const auto counts = tupleCountsOnGrid(basis, family, grid, options);
  std::vector<DiscrepancyPoint> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double M = grid[i];
    const double vol = std::pow(M, family.ell);
    out.push_back({M, std::abs(static_cast<double>(counts[i].hatValue) / vol - 1.0),
                   std::abs(static_cast<double>(counts[i].tildeValue) / vol - 1.0), discrepancyBound(M, psi)});
  }
  return out;
}

double centeredCount(const BasisMatrix& basis, const RegionFamily& family, double M,
                     const EnumerationOptions& options) {
  return static_cast<double>(hatTransform(basis, family, M, options).hatValue) - std::pow(M, family.ell);
}

MeanValueResult meanValueCheck(const LatticeSource& source, const RegionFamily& family, double M,
                               std::uint64_t trials, int workers) {
  family.validate();
  if (trials < 1000) throw ConfigError("meanValueCheck needs at least 1000 trials");
  std::vector<double> values(trials);
  parallelTrials(trials, workers, [&](std::uint64_t i) {
    values[i] = static_cast<double>(tildeTransform(source(i), family, M).tildeValue);
  });
  const MeanEstimate m = meanEstimate(values);
  MeanValueResult r;
  r.meanTilde = m.mean;
  r.standardError = m.standardError;
  r.target = std::pow(M, family.ell);
  r.trials = trials;
  r.pass = std::abs(m.mean - r.target) <= 3.0 * m.standardError;
  return r;
}

MomentGapReport momentGapEstimate(const LatticeSource& source, int dim, int ell, const std::vector<double>& grid,
                                  std::uint64_t trials, int workers) {
  if (ell < 2) throw ConfigError("moment gap needs ell ≥ 2");
  if (grid.empty()) throw ConfigError("moment gap grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0) || (i > 0 && !(grid[i] > grid[i - 1]))) throw ConfigError("V grid must be positive and increasing");
  const RegionFamily family = RegionFamily::uniform(dim, ell);
  family.validate();
  if (trials < 2) throw ConfigError("moment gap needs at least 2 trials");
  const std::size_t g = grid.size();
  MomentGapReport report;
  std::vector<double> series;
  for (std::size_t k = 0; k < g; ++k) {
    // Fresh lattices per grid point keep the means independent, as the trend
    // test assumes.
    std::vector<double> gaps(trials);
    parallelTrials(trials, workers, [&](std::uint64_t i) {
      const auto c = tildeTransform(source(k * trials + i), family, grid[k]);
      gaps[i] = static_cast<double>(c.hatValue - c.tildeValue) / std::pow(grid[k], ell - 1);
    });
    const MeanEstimate m = meanEstimate(gaps);
    report.points.push_back({grid[k], m.mean, m.standardError});
    series.push_back(m.mean);
  }
  if (series.size() >= 3) report.trend = mannKendall(series);
  report.bounded = !report.trend.upwardTrend;
  return report;
}

}  // namespace latlab
