#include "latlab/observable.hpp"

#include <cmath>

#include "latlab/errors.hpp"
#include "latlab/minima.hpp"
#include "latlab/zeta.hpp"

namespace latlab {

namespace {

struct KindName {
  ObservableSpec::Kind kind;
  const char* name;
};

constexpr KindName kNames[] = {
    {ObservableSpec::Kind::negLogBeta, "negLogBeta"},
    {ObservableSpec::Kind::negLogBetaProdPrefix, "negLogBetaProdPrefix"},
    {ObservableSpec::Kind::logBeta, "logBeta"},
    {ObservableSpec::Kind::logBetaProdSuffix, "logBetaProdSuffix"},
    {ObservableSpec::Kind::logZeta, "logZeta"},
};

double parseNumber(const std::string& text, const std::string& whole) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError("bad observable parameter in '" + whole + "'");
  return v;
}

}  // namespace

ObservableSpec ObservableSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("observable needs a parameter: '" + text + "'");
  const std::string head = text.substr(0, colon);
  const double param = parseNumber(text.substr(colon + 1), text);
  for (const auto& [kind, name] : kNames) {
    if (head != name) continue;
    ObservableSpec o;
    o.kind = kind;
    if (kind == Kind::logZeta) {
      o.s = param;
    } else {
      if (param != std::floor(param)) throw ConfigError("observable index must be an integer: '" + text + "'");
      o.ell = static_cast<int>(param);
    }
    return o;
  }
  throw ConfigError("unknown observable '" + head + "'");
}

std::string ObservableSpec::name() const {
  for (const auto& [k, n] : kNames) {
    if (k != kind) continue;
    if (kind == Kind::logZeta) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s:%.17g", n, s);
      return buf;
    }
    return std::string(n) + ":" + std::to_string(ell);
  }
  return "?";
}

void ObservableSpec::validate(int n) const {
  switch (kind) {
    case Kind::negLogBeta:
    case Kind::negLogBetaProdPrefix:
      if (ell < 1 || ell > n - 1) throw ConfigError(name() + ": index must lie in [1, n−1]");
      break;
    case Kind::logBeta:
    case Kind::logBetaProdSuffix:
      if (ell < 2 || ell > n) throw ConfigError(name() + ": index must lie in [2, n]");
      break;
    case Kind::logZeta:
      if (!(s > n / 2.0 + 1e-6)) throw ConfigError(name() + ": s must exceed n/2");
      break;
  }
}

double ObservableSpec::expectedAlpha(int n) const {
  switch (kind) {
    case Kind::negLogBeta:
      return n * ell;
    case Kind::logBeta:
      return n * (n - ell + 1);
    case Kind::negLogBetaProdPrefix:
    case Kind::logBetaProdSuffix:
      return n;
    case Kind::logZeta:
      return n / (2 * s);
  }
  return 0;
}

double ObservableSpec::rawValue(const BasisMatrix& basis) const {
  const int n = basis.dim();
  validate(n);
  switch (kind) {
    case Kind::negLogBeta:
      return ell == 1 ? shortestVectorLength(basis) : leadingMinima(basis, ell).betas[ell - 1];
    case Kind::negLogBetaProdPrefix: {
      const auto m = leadingMinima(basis, ell);
      double p = 1;
      for (int j = 0; j < ell; ++j) p *= m.betas[j];
      return p;
    }
    case Kind::logBeta:
      return leadingMinima(basis, ell).betas[ell - 1];
    case Kind::logBetaProdSuffix: {
      const auto m = successiveMinima(basis);
      double p = 1;
      for (int j = ell - 1; j < n; ++j) p *= m.betas[j];
      return p;
    }
    case Kind::logZeta:
      return std::exp(zetaObservable(basis, s));
  }
  return 0;
}

double ObservableSpec::evaluate(const BasisMatrix& basis) const {
  if (kind == Kind::logZeta) {
    validate(basis.dim());
    return zetaObservable(basis, s);
  }
  const double x = rawValue(basis);
  return negated() ? -std::log(x) : std::log(x);
}

}  // namespace latlab
