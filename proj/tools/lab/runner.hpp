#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "scenario.hpp"

namespace lab {

struct RunResult {
  std::vector<CsvTable> tables;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;
};

/// Evaluates a scenario without touching the filesystem. Tables depend only on
/// the configuration, never on the thread count.
RunResult compute(const ScenarioConfig& config);

/// compute() plus the CSV files and a <name>.json run record in out_dir.
/// Returns the paths written, record last.
std::vector<std::string> run(const ScenarioConfig& config);

}  // namespace lab
