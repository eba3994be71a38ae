#include "latlab/plot.hpp"

#include <cmath>
#include <cstdint>

#include "latlab/errors.hpp"
#include "latlab/stats.hpp"
#include "latlab/tails.hpp"

namespace latlab {

namespace {

CsvTable tailsPlot(const CsvTable& data) {
  const auto t = data.column("threshold");
  const auto p = data.column("pHat");
  const auto n = data.column("trials");
  std::vector<TailEstimate> est;
  for (std::size_t i = 0; i < t.size(); ++i) {
    TailEstimate e;
    e.threshold = t[i];
    e.pHat = p[i];
    e.trials = static_cast<std::uint64_t>(n[i]);
    e.hits = static_cast<std::uint64_t>(std::llround(p[i] * n[i]));
    e.ci = wilsonInterval(e.hits, e.trials);
    est.push_back(e);
  }
  bool haveFit = true;
  ExponentFit fit;
  try {
    fit = fitExponent(est);
  } catch (const InsufficientData&) {
    haveFit = false;
  }
  CsvTable out{{"logThreshold", "logP", "fitLine"}, {}};
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::log(t[i]);
    out.addRow({x, std::log(p[i]), haveFit ? fit.intercept + fit.slope * x : NAN});
  }
  return out;
}

CsvTable tracePlot(const CsvTable& data) {
  const auto t = data.column("t");
  const auto r = data.column("runningRatio");
  CsvTable out{{"logT", "ratio"}, {}};
  for (std::size_t i = 0; i < t.size(); ++i) out.addRow({std::log(t[i]), r[i]});
  return out;
}

CsvTable discrepancyPlot(const CsvTable& data) {
  const auto m = data.column("M");
  const auto d = data.column("dFull");
  const auto b = data.column("boundValue");
  CsvTable out{{"logM", "logD", "logBound"}, {}};
  for (std::size_t i = 0; i < m.size(); ++i) out.addRow({std::log(m[i]), std::log(d[i]), std::log(b[i])});
  return out;
}

CsvTable momentsPlot(const CsvTable& data) {
  const auto v = data.column("V");
  const auto g = data.column("gapOverPower");
  const auto se = data.column("standardError");
  CsvTable out{{"V", "gap", "lo", "hi"}, {}};
  for (std::size_t i = 0; i < v.size(); ++i) out.addRow({v[i], g[i], g[i] - 2 * se[i], g[i] + 2 * se[i]});
  return out;
}

}  // namespace

CsvTable emitPlotData(const CsvTable& data, const std::string& kind) {
  if (data.rows.empty()) throw FormatError("plot data: input has no rows");
  if (kind == "tails") return tailsPlot(data);
  if (kind == "trace") return tracePlot(data);
  if (kind == "discrepancy") return discrepancyPlot(data);
  if (kind == "moments") return momentsPlot(data);
  throw FormatError("plot data: unknown kind '" + kind + "'");
}

CsvTable emitPlotData(const std::string& dataFile, const std::string& kind) {
  return emitPlotData(CsvTable::read(dataFile), kind);
}

}  // namespace latlab
