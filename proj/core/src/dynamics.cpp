#include "latlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latlab/errors.hpp"
#include "latlab/lll.hpp"

namespace latlab {

FlowSpec FlowSpec::diagonal(std::vector<double> weights) {
  FlowSpec f;
  f.kind = Kind::diagonal;
  f.weights = std::move(weights);
  return f;
}

FlowSpec FlowSpec::unipotent(const Matrix& nilpotent) {
  FlowSpec f;
  f.kind = Kind::unipotent;
  f.nilpotent = nilpotent;
  return f;
}

int FlowSpec::dim() const {
  return kind == Kind::diagonal ? static_cast<int>(weights.size()) : static_cast<int>(nilpotent.rows());
}

bool FlowSpec::noncompact() const {
  if (kind == Kind::diagonal) return std::any_of(weights.begin(), weights.end(), [](double w) { return w != 0; });
  return !nilpotent.isZero(0);
}

void FlowSpec::validate() const {
  const int n = dim();
  if (n < 3 || n > kMaxDim) throw ConfigError("flow dimension must lie in [3, 8]");
  if (kind == Kind::diagonal) {
    double sum = 0;
    for (double w : weights) {
      if (!std::isfinite(w)) throw ConfigError("flow weights must be finite");
      sum += w;
    }
    if (std::abs(sum) > 1e-12) throw ConfigError("flow weights must sum to 0");
  } else {
    if (nilpotent.cols() != n) throw ConfigError("nilpotent generator must be square");
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        if (nilpotent(i, j) != 0) throw ConfigError("nilpotent generator must be strictly upper triangular");
  }
}

Matrix FlowSpec::at(double t) const {
  const int n = dim();
  if (kind == Kind::diagonal) {
    Matrix g = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = std::exp(weights[i] * t);
    return g;
  }
  // exp(tN) = Σ_{k<n} (tN)^k / k!
  Matrix g = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k < n; ++k) {
    term = term * nilpotent * (t / k);
    g += term;
  }
  return g;
}

namespace {

double maxStep(const FlowSpec& spec) {
  if (spec.kind == FlowSpec::Kind::diagonal) {
    double m = 0;
    for (double w : spec.weights) m = std::max(m, std::abs(w));
    return m > 0 ? 1.0 / m : std::numeric_limits<double>::infinity();
  }
  const double norm = spec.nilpotent.norm();
  return norm > 0 ? 1.0 / norm : std::numeric_limits<double>::infinity();
}

void guard(const FlowSpec& spec, double t) {
  if (spec.kind == FlowSpec::Kind::diagonal) {
    double m = 0;
    for (double w : spec.weights) m = std::max(m, std::abs(w));
    if (std::abs(t) * m > 300) throw NumericalRankLoss("flow time too large: |t|·max|w| > 300");
  } else if (std::abs(t) * spec.nilpotent.norm() > 1e8) {
    throw NumericalRankLoss("flow time too large for the unipotent generator");
  }
}

// LLL(basis·g_step) with the covolume checked and re-normalized.
BasisMatrix step(const BasisMatrix& basis, const FlowSpec& spec, double dt) {
  Matrix m = basis.embedding() * spec.at(dt);
  const int n = basis.dim();
  const double det = Eigen::MatrixXd(m).determinant();
  if (!std::isfinite(det) || std::abs(std::abs(det) - 1.0) > 1e-9)
    throw NumericalRankLoss("covolume drifted along the flow");
  m /= std::pow(std::abs(det), 1.0 / n);
  return lllReduce(BasisMatrix::trustedReal(std::move(m)));
}

}  // namespace

BasisMatrix applyFlow(const BasisMatrix& basis, const FlowSpec& spec, double t) {
  spec.validate();
  if (spec.dim() != basis.dim()) throw ConfigError("flow dimension does not match the basis");
  guard(spec, t);
  FlowIterator it(basis, spec);
  it.advanceTo(t);
  return it.basis();
}

FlowIterator::FlowIterator(const BasisMatrix& start, const FlowSpec& spec)
    : spec_(spec), current_(start), maxStep_(maxStep(spec)) {
  spec_.validate();
  if (spec_.dim() != start.dim()) throw ConfigError("flow dimension does not match the basis");
}

void FlowIterator::advanceTo(double t) {
  if (!std::isfinite(t)) throw ConfigError("flow time must be finite");
  if (!std::isfinite(maxStep_)) {
    t_ = t;
    return;
  }
  // Substeps land on multiples of maxStep so that the state at a given time
  // does not depend on the times requested before it.
  while (t_ != t) {
    double next;
    if (t > t_) {
      next = (std::floor(t_ / maxStep_ + 1e-9) + 1) * maxStep_;
      if (next > t) next = t;
    } else {
      next = (std::ceil(t_ / maxStep_ - 1e-9) - 1) * maxStep_;
      if (next < t) next = t;
    }
    current_ = step(current_, spec_, next - t_);
    t_ = next;
  }
}

std::vector<double> geometricTimeGrid(double tMax, int points) {
  if (!(tMax > 2) || points < 2) throw ConfigError("time grid needs tMax > 2 and at least 2 points");
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) out[i] = 2.0 * std::pow(tMax / 2.0, static_cast<double>(i) / (points - 1));
  out.back() = tMax;
  return out;
}

namespace {

// State at integer-multiple anchors of the step; values at t are computed by
// a last partial step from the anchor, so they depend on t only.
class GridEvaluator {
 public:
  GridEvaluator(const BasisMatrix& start, const FlowSpec& spec) : spec_(spec), anchor_(start, spec), h_(maxStep(spec)) {}

  BasisMatrix at(double t) {
    if (!std::isfinite(h_)) return anchor_.basis();
    const double node = std::floor(t / h_ + 1e-9) * h_;
    if (node < anchor_.time()) throw ConfigError("times must be increasing");
    anchor_.advanceTo(node);
    return t == node ? anchor_.basis() : step(anchor_.basis(), spec_, t - node);
  }

 private:
  FlowSpec spec_;
  FlowIterator anchor_;
  double h_;
};

void requireNoncompact(const FlowSpec& spec) {
  spec.validate();
  if (!spec.noncompact()) throw ConfigError("flow must have noncompact closure (nonzero generator)");
}

}  // namespace

FlowTrace logLawTrace(const BasisMatrix& basis, const FlowSpec& spec, const ObservableSpec& observable,
                      const std::vector<double>& times) {
  requireNoncompact(spec);
  observable.validate(basis.dim());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 2.0)) throw ConfigError("trace times must be ≥ 2");
    if (i > 0 && !(times[i] > times[i - 1])) throw ConfigError("trace times must be increasing");
  }
  GridEvaluator eval(basis, spec);
  FlowTrace trace;
  double sup = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double delta = observable.evaluate(eval.at(t));
    sup = std::max(sup, delta / std::log(t));
    trace.times.push_back(t);
    trace.deltaValues.push_back(delta);
    trace.runningRatioSup.push_back(sup);
  }
  return trace;
}

std::vector<std::optional<std::uint64_t>> hittingTimes(const BasisMatrix& basis, const FlowSpec& spec,
                                                       const ObservableSpec& observable,
                                                       const std::vector<double>& zGrid, std::uint64_t kMax) {
  requireNoncompact(spec);
  observable.validate(basis.dim());
  std::vector<std::optional<std::uint64_t>> out(zGrid.size());
  if (zGrid.empty()) return out;
  GridEvaluator eval(basis, spec);
  std::size_t open = zGrid.size();
  for (std::uint64_t k = 2; k <= kMax && open > 0; ++k) {
    const double delta = observable.evaluate(eval.at(static_cast<double>(k)));
    for (std::size_t i = 0; i < zGrid.size(); ++i) {
      if (!out[i] && delta >= zGrid[i]) {
        out[i] = k;
        --open;
      }
    }
  }
  return out;
}

std::optional<std::uint64_t> hittingTime(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable, double z, std::uint64_t kMax) {
  return hittingTimes(basis, spec, observable, {z}, kMax).front();
}

std::vector<KelmerYuPoint> kelmerYuFromTimes(const std::vector<double>& zGrid,
                                             const std::vector<std::optional<std::uint64_t>>& taus,
                                             const TailEstimator& tail) {
  if (taus.size() != zGrid.size()) throw ConfigError("one hitting time per level required");
  std::vector<KelmerYuPoint> out;
  for (std::size_t i = 0; i < zGrid.size(); ++i) {
    const TailEstimate e = tail(zGrid[i]);
    if (!(e.ci.lo > 0)) throw InsufficientTail("tail estimate at z = " + std::to_string(zGrid[i]) + " may be 0");
    KelmerYuPoint p;
    p.z = zGrid[i];
    p.tau = taus[i];
    p.tailProbability = e.pHat;
    p.ratio = taus[i] ? std::log(static_cast<double>(*taus[i])) / -std::log(e.pHat)
                      : std::numeric_limits<double>::infinity();
    out.push_back(p);
  }
  return out;
}

std::vector<KelmerYuPoint> kelmerYuRatio(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable, const std::vector<double>& zGrid,
                                         const TailEstimator& tail, std::uint64_t kMax) {
  return kelmerYuFromTimes(zGrid, hittingTimes(basis, spec, observable, zGrid, kMax), tail);
}

const char* regimeName(Regime r) {
  switch (r) {
    case Regime::convergent:
      return "convergent";
    case Regime::divergent:
      return "divergent";
    case Regime::inconclusive:
      return "inconclusive";
  }
  return "?";
}

Regime classifySeries(const std::vector<double>& z, double alpha, double* exponent, double* exponentStderr) {
  auto report = [&](Regime r, double p, double se) {
    if (exponent) *exponent = p;
    if (exponentStderr) *exponentStderr = se;
    return r;
  };
  const std::size_t K = z.size();
  // Full dyadic blocks [2^j, 2^{j+1}) ⊆ [1, K].
  std::vector<double> blocks;
  for (std::size_t lo = 1; 2 * lo - 1 <= K; lo *= 2) {
    double b = 0;
    for (std::size_t k = lo; k < 2 * lo; ++k) b += std::exp(-alpha * z[k - 1]);
    blocks.push_back(b);
  }
  const std::size_t J = blocks.size();
  const std::size_t first = std::max<std::size_t>(2, J / 2);
  if (J < first + 3) return report(Regime::inconclusive, std::nan(""), std::nan(""));
  std::vector<double> x, y, w;
  bool anyInfinite = false;
  for (std::size_t j = first; j < J; ++j) {
    if (std::isinf(blocks[j])) anyInfinite = true;
    if (!(blocks[j] > 0) || std::isinf(blocks[j])) continue;
    x.push_back(std::log(static_cast<double>(j)));
    y.push_back(std::log(blocks[j]));
    w.push_back(1.0);
  }
  if (anyInfinite) return report(Regime::divergent, -std::numeric_limits<double>::infinity(), 0);
  if (x.size() < 3) return report(Regime::convergent, std::numeric_limits<double>::infinity(), 0);
  const LinearFit fit = weightedLinearFit(x, y, w);
  const double p = -fit.slope, se = fit.slopeStderr;
  if (p - 2 * se > 1) return report(Regime::convergent, p, se);
  if (p + 2 * se < 1) return report(Regime::divergent, p, se);
  return report(Regime::inconclusive, p, se);
}

std::vector<HitReport> borelCantelliHits(const BasisMatrix& basis, const FlowSpec& spec,
                                         const ObservableSpec& observable,
                                         const std::vector<std::vector<double>>& zSequences,
                                         const TailModel& model) {
  requireNoncompact(spec);
  if (spec.kind != FlowSpec::Kind::diagonal) throw ConfigError("Borel–Cantelli hits need a diagonal flow");
  observable.validate(basis.dim());
  if (zSequences.empty()) return {};
  const std::size_t K = zSequences.front().size();
  for (const auto& seq : zSequences)
    if (seq.size() != K) throw ConfigError("all z sequences must have the same length");
  const double alpha = model.alpha > 0 ? model.alpha : observable.expectedAlpha(basis.dim());

  std::vector<HitReport> reports(zSequences.size());
  for (std::size_t i = 0; i < zSequences.size(); ++i) {
    auto& r = reports[i];
    r.thresholds = zSequences[i];
    CompensatedSum sum;
    for (double z : zSequences[i]) sum.add(std::exp(-alpha * z));
    const double s = sum.value();
    r.estimatedMeasureSum = std::sqrt(model.cLow * model.cHigh) * s;
    r.measureSumRange = {model.cLow * s, model.cHigh * s};
    r.regime = classifySeries(zSequences[i], alpha, &r.blockExponent, &r.blockExponentStderr);
  }
  // Skip the orbit when no sequence can be hit.
  bool anyFinite = false;
  for (const auto& seq : zSequences)
    for (double z : seq) anyFinite |= z != std::numeric_limits<double>::infinity();
  if (!anyFinite) return reports;
  GridEvaluator eval(basis, spec);
  for (std::size_t k = 1; k <= K; ++k) {
    const double delta = observable.evaluate(eval.at(static_cast<double>(k)));
    for (std::size_t i = 0; i < zSequences.size(); ++i)
      if (delta >= zSequences[i][k - 1]) reports[i].hits.push_back(k);
  }
  return reports;
}

HitReport borelCantelliHits(const BasisMatrix& basis, const FlowSpec& spec, const ObservableSpec& observable,
                            const std::vector<double>& zSequence, const TailModel& model) {
  return borelCantelliHits(basis, spec, observable, std::vector<std::vector<double>>{zSequence}, model).front();
}

}  // namespace latlab
