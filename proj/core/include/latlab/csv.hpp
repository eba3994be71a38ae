#pragma once

#include <string>
#include <vector>

namespace latlab {

/// Shortest round-trip text for a double ("%.17g"; inf, -inf, nan).
std::string formatNumber(double x);
double parseNumber(const std::string& text);

/// RFC-4180 table with a header row, LF line endings.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void addRow(std::vector<std::string> cells);
  void addRow(const std::vector<double>& values);
  /// Index of a header column; throws FormatError if absent.
  std::size_t columnIndex(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  std::string str() const;
  void write(const std::string& path) const;

  /// Throws FormatError on empty input, unterminated quotes or ragged rows.
  static CsvTable parse(const std::string& text);
  static CsvTable read(const std::string& path);
};

std::string readFile(const std::string& path);
/// Writes bytes exactly (binary mode); throws IOError.
void writeFile(const std::string& path, const std::string& bytes);

}  // namespace latlab
