#include "csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "backflow/error.hpp"
#include "backflow/numerics.hpp"

namespace lab {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_short(double v) { return backflow::shortest_decimal(v); }

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (const auto& [key, value] : table.metadata) out += "# " + key + ": " + value + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw backflow::ContractViolation("csv row width differs from the header in " + table.file_name);
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

void write_csv(const CsvTable& table, const std::string& directory) {
  namespace fs = std::filesystem;
  const std::string text = to_csv(table);
  std::error_code ec;
  fs::create_directories(directory, ec);
  const fs::path target = fs::path(directory) / table.file_name;
  const fs::path tmp = fs::path(target.string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw backflow::ConfigError("cannot write output file '" + target.string() + "'");
    f << text;
    if (!f) throw backflow::ConfigError("failed writing '" + target.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) throw backflow::ConfigError("cannot move output into place: " + target.string());
}

}  // namespace lab
