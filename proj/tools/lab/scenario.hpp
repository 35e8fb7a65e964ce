#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "backflow/evolution.hpp"
#include "backflow/states.hpp"

namespace lab {

enum class ScenarioKind { Fig1a, Fig1b, Fig2, Fig3, Fig4, Fig5, Fig6, Fig7, Fig8a, Fig8b, Custom };

struct ScenarioInfo {
  ScenarioKind kind;
  const char* name;
  int figure;  // 0 for custom
  const char* description;
};

/// Stable order: figure scenarios by figure, then custom.
const std::vector<ScenarioInfo>& scenario_catalogue();

const ScenarioInfo& scenario_info(ScenarioKind kind);

/// Throws ConfigError listing the known names.
ScenarioKind parse_scenario_name(const std::string& name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Custom;
  // Custom runs only.
  std::optional<backflow::StateKind> state;
  std::optional<backflow::EvolutionModel> model;

  double t_max = 0.0;
  int n_samples = 0;
  /// Gauss-Legendre nodes per momentum panel; for fig5 the Nystrom node count
  /// (0 = max(50, 8U, U^2) per point).
  int nodes = 0;
  std::string out_dir = ".";
  std::string name;  // output file stem
  unsigned threads = 1;
};

/// Pinned defaults of a scenario. Custom has no t_max/n_samples until set.
ScenarioConfig default_config(ScenarioKind kind);

/// Reads a parsed config tree. Custom requires [state], [model], grid.t_max
/// and grid.n_samples; figure scenarios accept only grid, quadrature and
/// output overrides. Unknown keys are errors.
ScenarioConfig config_from_tree(const nlohmann::ordered_json& tree);

struct Overrides {
  std::optional<double> t_max;
  std::optional<int> nodes;
  std::optional<unsigned> threads;
  std::optional<std::string> out_dir;
};

void apply_overrides(ScenarioConfig& config, const Overrides& overrides);

/// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& config);

/// Resolved configuration, echoed into the run record.
nlohmann::ordered_json to_json(const ScenarioConfig& config);

std::string describe_state(const backflow::StateKind& state);

}  // namespace lab
