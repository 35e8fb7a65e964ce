#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "backflow/eigenproblem.hpp"
#include "backflow/error.hpp"
#include "backflow/parallel.hpp"
#include "backflow/version.hpp"
#include "csv.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "toml.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void print_list() {
  std::printf("%-8s %-14s %s\n", "figure", "scenarios", "description");
  int current = -1;
  std::string names, text;
  auto flush = [&] {
    if (current < 0) return;
    std::printf("%-8s %-14s %s\n", current ? std::to_string(current).c_str() : "-", names.c_str(), text.c_str());
  };
  for (const auto& s : lab::scenario_catalogue()) {
    if (s.figure != current) {
      flush();
      current = s.figure;
      names = s.name;
      text = s.description;
    } else {
      names += std::string(",") + s.name;
      text += "; " + std::string(s.description);
    }
  }
  flush();
}

int print_eigen(double u0, double trunc, int nodes, unsigned threads) {
  const int n = nodes > 0 ? nodes : backflow::default_eigen_nodes(trunc);
  const auto r = backflow::delta_max(u0, trunc, n, backflow::Execution{threads});
  std::printf("# u0_tilde: %s\n# truncation_u: %s\n# n_nodes: %d\n# delta_max: %s\n# residual: %s\n",
              lab::format_double(u0).c_str(), lab::format_double(trunc).c_str(), n,
              lab::format_double(r.delta_max).c_str(), lab::format_double(r.residual).c_str());
  std::printf("u,phi\n");
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    std::printf("%s,%s\n", lab::format_double(r.nodes[i]).c_str(), lab::format_double(r.eigenvector[i]).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum backflow scenarios: currents, probabilities and backflow bounds"};
  app.set_version_flag("--version", std::string(backflow::kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "evaluate a scenario and write CSV plus a JSON run record");
  std::string scenario, config_path;
  lab::Overrides overrides;
  double tmax = 0.0;
  int nodes = 0;
  unsigned threads = 0;
  std::string out_dir;
  auto* opt_scenario = run->add_option("--scenario", scenario, "named scenario (see `list`)");
  auto* opt_config = run->add_option("--config", config_path, "TOML run configuration");
  opt_scenario->excludes(opt_config);
  auto* opt_out = run->add_option("--out", out_dir, "output directory (default .)");
  auto* opt_nodes = run->add_option("--nodes", nodes, "GL nodes per momentum panel; Nystrom nodes for fig5");
  auto* opt_tmax = run->add_option("--tmax", tmax, "end of the time window");
  auto* opt_threads = run->add_option("--threads", threads, "worker threads (default BACKFLOW_LAB_THREADS)")
                          ->check(CLI::PositiveNumber);

  app.add_subcommand("list", "list scenarios by figure");

  auto* eigen = app.add_subcommand("eigen", "largest backflow eigenvalue and its eigenfunction");
  double u0 = 0.0, trunc = 16.0;
  int eigen_nodes = 0;
  eigen->add_option("--u0", u0, "lower momentum limit u0_tilde")->required();
  eigen->add_option("--trunc", trunc, "truncation U")->required();
  eigen->add_option("--nodes", eigen_nodes, "Gauss-Legendre nodes (default max(50, 8U, U^2))");
  auto* opt_eigen_threads = eigen->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand("list")) {
      print_list();
      return 0;
    }
    if (app.got_subcommand("eigen"))
      return print_eigen(u0, trunc, eigen_nodes, *opt_eigen_threads ? threads : backflow::default_thread_count());

    if (!*opt_scenario && !*opt_config) throw backflow::ConfigError("run needs --scenario or --config");
    lab::ScenarioConfig config = *opt_config ? lab::config_from_tree(lab::parse_toml_file(config_path))
                                             : lab::default_config(lab::parse_scenario_name(scenario));
    if (!*opt_config && config.kind == lab::ScenarioKind::Custom)
      throw backflow::ConfigError("scenario custom needs --config");
    config.threads = backflow::default_thread_count();
    if (*opt_tmax) overrides.t_max = tmax;
    if (*opt_nodes) overrides.nodes = nodes;
    if (*opt_threads) overrides.threads = threads;
    if (*opt_out) overrides.out_dir = out_dir;
    lab::apply_overrides(config, overrides);
    for (const auto& path : lab::run(config)) std::printf("%s\n", path.c_str());
    return 0;
  } catch (const backflow::Error& e) {
    std::fprintf(stderr, "backflow-lab: %s\n", e.what());
    return e.kind() == backflow::ErrorKind::Config ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "backflow-lab: %s\n", e.what());
    return kExitNumerical;
  }
}
