#pragma once

#include <string>

#include "latlab/csv.hpp"

namespace latlab {

/// Derived plot columns for a data file; no rendering.
///   tails:       logThreshold, logP, fitLine
///   trace:       logT, ratio
///   discrepancy: logM, logD, logBound
///   moments:     V, gap, lo, hi
/// Throws FormatError for unknown kinds, empty input or missing columns.
CsvTable emitPlotData(const CsvTable& data, const std::string& kind);
CsvTable emitPlotData(const std::string& dataFile, const std::string& kind);

}  // namespace latlab
