#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lab {

/// One output file: '#'-prefixed metadata lines, a header row, then numeric
/// rows written with 17 significant digits and LF endings.
struct CsvTable {
  std::string file_name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// 17 significant digits (%.17g); -0 is written as 0.
std::string format_double(double v);

/// Shortest decimal that round-trips, for metadata and labels.
std::string format_short(double v);

std::string to_csv(const CsvTable& table);

/// Writes through a temporary file renamed into place.
void write_csv(const CsvTable& table, const std::string& directory);

}  // namespace lab
