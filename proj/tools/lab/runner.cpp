#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "backflow/backflow.hpp"
#include "backflow/eigenproblem.hpp"
#include "backflow/error.hpp"
#include "backflow/lindblad_x.hpp"
#include "backflow/version.hpp"

namespace lab {

using namespace backflow;
using nlohmann::ordered_json;

namespace {

const std::vector<double> kLambdaInv = {0.0, 0.005, 0.01, 0.015, 0.02};
const std::vector<double> kLambdaSweep = {0.0, 0.0025, 0.005, 0.0075, 0.01, 0.0125, 0.015, 0.0175, 0.02};
const std::vector<double> kGammas = {0.0, 5.0, 10.0, 15.0};
const std::vector<double> kEpsilonBm = {1.0, 0.5, 0.1};
const std::vector<double> kEpsilonGs = {1.0, 0.5, 0.1, 0.0};
const std::vector<double> kEpsilonEigen = {1.0, 0.5, 0.1, 0.01};
const std::vector<double> kKappas = {5.0, 15.0};
constexpr double kFig8bGamma = 8.0;
constexpr double kFig4P0 = 3.0;
constexpr double kFig3SweepTmax = 1.0;
constexpr int kFig3SweepSamples = 2048;
constexpr double kFig7ZoomTmax = 0.1;
constexpr int kFig7ZoomSamples = 401;
constexpr double kFig5Divisions = 10.0;  // u0 step 0.1
constexpr int kFig5Points = 31;  // u0 in [0, 3]
constexpr double kFig5Span = 16.0;
const GaussianSuperposition kSuperposition{14.0, 3.0, 1.9, kPi, 1.0};

std::string label(double v) { return format_short(v); }

std::vector<double> time_grid(double t_max, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = t_max * k / (n - 1);
  return t;
}

int panel_order(const ScenarioConfig& c) { return c.nodes > 0 ? c.nodes : kDefaultPanelOrder; }

// Column-major evaluation: each column is independent, so they may run
// concurrently without changing any value.
std::vector<std::vector<double>> columns(std::size_t n_cols, unsigned threads,
                                         const std::function<std::vector<double>(std::size_t)>& f) {
  std::vector<std::vector<double>> out(n_cols);
  parallel_for(n_cols, Execution{threads}, [&](std::size_t k) { out[k] = f(k); });
  return out;
}

CsvTable assemble(const std::string& file, std::vector<std::pair<std::string, std::string>> meta,
                  const std::vector<std::string>& names, const std::vector<double>& t,
                  const std::vector<std::vector<double>>& cols) {
  CsvTable table;
  table.file_name = file;
  table.metadata = std::move(meta);
  table.columns.push_back("T");
  table.columns.insert(table.columns.end(), names.begin(), names.end());
  table.rows.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    table.rows[i].push_back(t[i]);
    for (const auto& c : cols) table.rows[i].push_back(c[i]);
  }
  return table;
}

std::vector<std::pair<std::string, std::string>> base_meta(const ScenarioConfig& c) {
  const ScenarioInfo& info = scenario_info(c.kind);
  std::vector<std::pair<std::string, std::string>> m = {
      {"scenario", info.name},
      {"description", info.description},
      {"backflow_version", kVersion},
  };
  if (c.kind != ScenarioKind::Fig5)
    m.push_back({"window", "T in [0, " + format_short(c.t_max) + "], " + std::to_string(c.n_samples) + " samples"});
  return m;
}

// Simpson (trapezoid on an even sample count) of the sampled J_-.
double sampled_amount(const std::vector<double>& jneg, double h) {
  const std::size_t n = jneg.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  if (n % 2 == 1) {
    for (std::size_t i = 0; i + 2 < n; i += 2) s += h / 3.0 * (jneg[i] + 4.0 * jneg[i + 1] + jneg[i + 2]);
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i) s += 0.5 * h * (jneg[i] + jneg[i + 1]);
  }
  return s;
}

ordered_json report_json(const BackflowReport& r) {
  ordered_json iv = ordered_json::array();
  for (std::size_t k = 0; k < r.intervals.size(); ++k)
    iv.push_back({{"start", r.intervals[k].start}, {"end", r.intervals[k].end}, {"amount", r.amounts[k]}});
  return {{"intervals", iv},
          {"first_duration", r.first_duration},
          {"first_amount", r.first_amount},
          {"total_amount", r.total_amount},
          {"peak", r.peak},
          {"open_end", r.open_end}};
}

void collect(RunResult& out, const BackflowReport& r, const std::string& where) {
  for (const auto& w : r.warnings) out.warnings.push_back(where + ": " + w);
}

// ---------------------------------------------------------------------------

RunResult milburn_traces(const ScenarioConfig& c, const DensityMatrixSpec& spec, bool negative_part_only) {
  RunResult out;
  const auto t = time_grid(c.t_max, c.n_samples);
  std::vector<std::size_t> nodes(kLambdaInv.size());
  const auto cols = columns(kLambdaInv.size(), c.threads, [&](std::size_t k) {
    const DensityMatrixCurrent j(Milburn{kLambdaInv[k]}, spec, c.t_max, 0.0, panel_order(c));
    nodes[k] = j.node_count();
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = negative_part_only ? negative_part(j(t[i])) : j(t[i]);
    return v;
  });
  std::vector<std::string> names;
  ordered_json per = ordered_json::array();
  for (std::size_t k = 0; k < kLambdaInv.size(); ++k) {
    names.push_back((negative_part_only ? "J_neg_lambda_inv_" : "J_lambda_inv_") + label(kLambdaInv[k]));
    std::vector<double> neg(cols[k].size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = negative_part(cols[k][i]);
    per.push_back({{"lambda_inv", kLambdaInv[k]},
                   {"momentum_nodes", nodes[k]},
                   {"sampled_backflow_amount", sampled_amount(negative_part_only ? cols[k] : neg, t[1] - t[0])}});
  }
  out.diagnostics["columns"] = per;
  auto meta = base_meta(c);
  meta.push_back({"state", spec.terms().front().state.describe()});
  meta.push_back({"law", "milburn"});
  meta.push_back({"panel_order", std::to_string(panel_order(c))});
  out.tables.push_back(assemble(c.name + ".csv", meta, names, t, cols));
  return out;
}

RunResult run_fig3(const ScenarioConfig& c) {
  const auto spec = DensityMatrixSpec::pure(MomentumState(kSuperposition));
  RunResult out = milburn_traces(c, spec, true);
  SweepScenario sc;
  sc.state = kSuperposition;
  sc.model = Milburn{0.0};
  sc.t_max = kFig3SweepTmax;
  sc.n_samples = kFig3SweepSamples;
  sc.panel_order = panel_order(c);
  const auto rows = sweep(SweepAxis::LambdaInv, kLambdaSweep, sc, Execution{c.threads});
  CsvTable table;
  table.file_name = c.name + "_sweep.csv";
  table.metadata = {{"scenario", "fig3"},
                    {"description", "first backflow interval vs Lambda^-1"},
                    {"backflow_version", kVersion},
                    {"state", MomentumState(kSuperposition).describe()},
                    {"window", "T in [0, " + format_short(kFig3SweepTmax) + "], " +
                                   std::to_string(kFig3SweepSamples) + " samples, refine_tol 1e-06"}};
  table.columns = {"lambda_inv", "n_intervals", "first_amount", "first_duration", "total_amount", "peak"};
  for (const auto& r : rows)
    table.rows.push_back({r.value, static_cast<double>(r.n_intervals), r.first_amount, r.first_duration,
                          r.total_amount, r.peak});
  out.tables.push_back(std::move(table));
  return out;
}

RunResult run_fig4(const ScenarioConfig& c) {
  RunResult out;
  if (c.nodes > 0) out.warnings.push_back("quadrature.nodes does not apply to fig4 (closed form)");
  const auto t = time_grid(c.t_max, c.n_samples);
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (double k : kKappas) {
    names.push_back("pr_p_neg_kappa_" + label(k));
    std::vector<double> v;
    for (double s : t) v.push_back(pr_p_negative_t({kFig4P0, k}, s));
    cols.push_back(v);
  }
  ordered_json per = ordered_json::array();
  for (double k : kKappas) {
    names.push_back("pr_x_neg_kappa_" + label(k));
    std::vector<double> v;
    for (double s : t) v.push_back(pr_x_negative_t({kFig4P0, k}, s));
    cols.push_back(v);
    const auto ts = decoherence_timescales({kFig4P0, k});
    per.push_back({{"kappa_bar", k}, {"tau_decoh", ts.tau_decoh}, {"tau_a", ts.tau_a}, {"tau_s", ts.tau_s}});
  }
  out.diagnostics["timescales"] = per;
  auto meta = base_meta(c);
  meta.push_back({"p0_bar", label(kFig4P0)});
  meta.push_back({"units", "length sigma_0, time sigma_0^2 m / hbar, kappa hbar / (m sigma_0^4)"});
  out.tables.push_back(assemble(c.name + ".csv", meta, names, t, cols));
  return out;
}

RunResult run_fig5(const ScenarioConfig& c) {
  RunResult out;
  const std::size_t n_eps = kEpsilonEigen.size();
  std::vector<double> values(kFig5Points * n_eps);
  std::vector<int> used_nodes(values.size());
  parallel_for(values.size(), Execution{c.threads}, [&](std::size_t idx) {
    const double u0 = static_cast<double>(idx / n_eps) / kFig5Divisions;
    const double eps = kEpsilonEigen[idx % n_eps];
    const double ut = u0 * std::pow(eps, -0.25);
    const double upper = ut + kFig5Span;
    const int n = c.nodes > 0 ? c.nodes : default_eigen_nodes(upper);
    used_nodes[idx] = n;
    values[idx] = delta_max(ut, upper, n).delta_max;
  });
  CsvTable table;
  table.file_name = c.name + ".csv";
  table.metadata = base_meta(c);
  table.metadata.push_back({"x_axis", "u0; each eps column is evaluated at u0_tilde = u0 * eps^(-1/4)"});
  table.metadata.push_back({"truncation", "U = u0_tilde + " + label(kFig5Span)});
  table.metadata.push_back({"nodes", c.nodes > 0 ? std::to_string(c.nodes) : "max(50, 8U, ceil(U^2))"});
  table.columns = {"u0"};
  for (double e : kEpsilonEigen) table.columns.push_back("delta_max_eps_" + label(e));
  table.columns.push_back("delta_max_classical");
  for (int i = 0; i < kFig5Points; ++i) {
    std::vector<double> row{i / kFig5Divisions};
    for (std::size_t e = 0; e < n_eps; ++e) row.push_back(values[i * n_eps + e]);
    row.push_back(0.0);
    table.rows.push_back(row);
  }
  ordered_json conv = ordered_json::array();
  for (const auto& e : delta_max_convergence(0.0, {4.0, 8.0, 16.0, 32.0}, Execution{c.threads}))
    conv.push_back({{"truncation_u", e.truncation_u}, {"n_nodes", e.n_nodes}, {"delta_max", e.delta_max}});
  out.diagnostics["convergence_at_u0_tilde_0"] = conv;
  out.diagnostics["max_nodes"] = *std::max_element(used_nodes.begin(), used_nodes.end());
  out.tables.push_back(std::move(table));
  return out;
}

RunResult run_fig6(const ScenarioConfig& c) {
  RunResult out;
  const std::size_t n_eps = kEpsilonBm.size();
  std::vector<ProbabilityTrace> traces(n_eps);
  std::vector<BackflowReport> reports(n_eps);
  parallel_for(n_eps, Execution{c.threads}, [&](std::size_t k) {
    const double eps = kEpsilonBm[k];
    traces[k] = prob_negative_halfspace_numeric(DensityMatrixSpec::pure(bm_state(eps)), ScaledFree{eps},
                                                c.t_max, c.n_samples);
    const ScaledCurrent j(bm_state(eps), eps, 0.0, c.t_max);
    reports[k] = detect_intervals([&](double t) { return j(t); }, c.t_max, std::max(64, c.n_samples),
                                  DetectOptions{});
  });
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  ordered_json per = ordered_json::array();
  for (std::size_t k = 0; k < n_eps; ++k) {
    names.push_back("J_eps_" + label(kEpsilonBm[k]));
    cols.push_back(traces[k].current);
  }
  for (std::size_t k = 0; k < n_eps; ++k) {
    names.push_back("pr_x_neg_eps_" + label(kEpsilonBm[k]));
    cols.push_back(traces[k].pr);
    per.push_back({{"epsilon", kEpsilonBm[k]},
                   {"pr0", traces[k].pr0},
                   {"pr0_tail_estimate", traces[k].tail},
                   {"simpson_error", traces[k].simpson_error},
                   {"backflow", report_json(reports[k])}});
    collect(out, reports[k], "eps=" + label(kEpsilonBm[k]));
  }
  out.diagnostics["columns"] = per;
  auto meta = base_meta(c);
  meta.push_back({"state", "bracken_melloy(eps)"});
  meta.push_back({"law", "scaled_free(eps)"});
  if (c.nodes > 0) out.warnings.push_back("quadrature.nodes does not apply to fig6; default panels used");
  out.tables.push_back(assemble(c.name + ".csv", meta, names, traces.front().t, cols));
  return out;
}

RunResult run_fig7(const ScenarioConfig& c) {
  RunResult out;
  auto table_for = [&](const std::string& file, double t_max, int n) {
    const auto t = time_grid(t_max, n);
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
    for (double eps : kEpsilonGs) {
      names.push_back(eps == 0.0 ? "pr_x_neg_classical" : "pr_x_neg_eps_" + label(eps));
      std::vector<double> v;
      for (double s : t) v.push_back(prob_negative_halfspace_closed(kSuperposition, eps, s));
      cols.push_back(v);
    }
    auto meta = base_meta(c);
    meta[3].second = "T in [0, " + format_short(t_max) + "], " + std::to_string(n) + " samples";
    meta.push_back({"state", MomentumState(kSuperposition).describe()});
    return assemble(file, meta, names, t, cols);
  };
  out.tables.push_back(table_for(c.name + ".csv", c.t_max, c.n_samples));
  out.tables.push_back(table_for(c.name + "_zoom.csv", kFig7ZoomTmax, kFig7ZoomSamples));
  ordered_json pneg = ordered_json::array();
  for (double eps : {1.0, 0.5, 0.1}) {
    GaussianSuperposition g = kSuperposition;
    g.epsilon = eps;
    pneg.push_back({{"epsilon", eps}, {"pr_p_negative", pr_p_negative(MomentumState(g))}});
  }
  out.diagnostics["pr_p_negative"] = pneg;
  if (c.nodes > 0) out.warnings.push_back("quadrature.nodes does not apply to fig7 (closed form)");
  return out;
}

RunResult ck_traces(const ScenarioConfig& c, const std::vector<double>& gammas, const std::vector<double>& eps) {
  RunResult out;
  const auto t = time_grid(c.t_max, c.n_samples);
  const std::size_t n = gammas.size();
  std::vector<BackflowReport> reports(n);
  const auto cols = columns(n, c.threads, [&](std::size_t k) {
    const ScaledCurrent j(bm_state(eps[k]), eps[k], gammas[k], c.t_max, 0.0, panel_order(c));
    reports[k] = detect_intervals([&](double s) { return j(s); }, c.t_max, std::max(64, c.n_samples),
                                  DetectOptions{});
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = negative_part(j(t[i]));
    return v;
  });
  std::vector<std::string> names;
  ordered_json per = ordered_json::array();
  const bool by_gamma = c.kind == ScenarioKind::Fig8a;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string tag = by_gamma ? "gamma_" + label(gammas[k]) : "eps_" + label(eps[k]);
    names.push_back("J_neg_" + tag);
    per.push_back({{"gamma", gammas[k]}, {"epsilon", eps[k]}, {"backflow", report_json(reports[k])}});
    collect(out, reports[k], tag);
  }
  out.diagnostics["columns"] = per;
  auto meta = base_meta(c);
  meta.push_back({"state", "bracken_melloy(eps)"});
  meta.push_back({"law", by_gamma ? "caldirola_kanai, eps = 1" : "caldirola_kanai, gamma = 8"});
  meta.push_back({"panel_order", std::to_string(panel_order(c))});
  out.tables.push_back(assemble(c.name + ".csv", meta, names, t, cols));
  return out;
}

RunResult run_custom(const ScenarioConfig& c) {
  RunResult out;
  const MomentumState state(*c.state);
  const auto spec = DensityMatrixSpec::pure(state);
  const auto j = origin_current(*c.model, spec, c.t_max, panel_order(c));
  const auto t = time_grid(c.t_max, c.n_samples);
  const auto cols = columns(1, 1, [&](std::size_t) {
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = j(t[i]);
    return v;
  });
  std::vector<double> neg(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) neg[i] = negative_part(cols[0][i]);
  DetectOptions opts;
  opts.exec = Execution{c.threads};
  const BackflowReport r = detect_intervals(j, c.t_max, std::max(64, c.n_samples), opts);
  out.diagnostics["backflow"] = report_json(r);
  collect(out, r, "custom");
  auto meta = base_meta(c);
  meta.push_back({"state", state.describe()});
  meta.push_back({"law", describe(*c.model)});
  meta.push_back({"panel_order", std::to_string(panel_order(c))});
  out.tables.push_back(assemble(c.name + ".csv", meta, {"J", "J_neg"}, t, {cols[0], neg}));
  return out;
}

}  // namespace

RunResult compute(const ScenarioConfig& c) {
  validate(c);
  RunResult out;
  switch (c.kind) {
    case ScenarioKind::Fig1a:
      out = milburn_traces(c, DensityMatrixSpec::pure(bm_state(1.0)), true);
      break;
    case ScenarioKind::Fig1b:
      out = milburn_traces(c, DensityMatrixSpec::pure(complex_damped_state()), true);
      break;
    case ScenarioKind::Fig2:
      out = milburn_traces(c, DensityMatrixSpec::pure(MomentumState(kSuperposition)), false);
      break;
    case ScenarioKind::Fig3:
      out = run_fig3(c);
      break;
    case ScenarioKind::Fig4:
      out = run_fig4(c);
      break;
    case ScenarioKind::Fig5:
      out = run_fig5(c);
      if (c.t_max != 0.0) out.warnings.push_back("grid.t_max does not apply to fig5");
      break;
    case ScenarioKind::Fig6:
      out = run_fig6(c);
      break;
    case ScenarioKind::Fig7:
      out = run_fig7(c);
      break;
    case ScenarioKind::Fig8a:
      out = ck_traces(c, kGammas, std::vector<double>(kGammas.size(), 1.0));
      break;
    case ScenarioKind::Fig8b:
      out = ck_traces(c, std::vector<double>(kEpsilonBm.size(), kFig8bGamma), kEpsilonBm);
      break;
    case ScenarioKind::Custom:
      out = run_custom(c);
      break;
  }
  return out;
}

std::vector<std::string> run(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result = compute(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<std::string> paths;
  for (const auto& table : result.tables) {
    write_csv(table, c.out_dir);
    paths.push_back((std::filesystem::path(c.out_dir) / table.file_name).string());
  }
  ordered_json record;
  record["tool"] = "backflow-lab";
  record["backflow_version"] = kVersion;
  record["config"] = to_json(c);
  record["threads"] = c.threads;
  record["outputs"] = ordered_json::array();
  for (const auto& table : result.tables)
    record["outputs"].push_back({{"file", table.file_name}, {"columns", table.columns}, {"rows", table.rows.size()}});
  record["wall_time_s"] = wall;
  record["diagnostics"] = result.diagnostics;
  record["warnings"] = result.warnings;
  const std::filesystem::path rec = std::filesystem::path(c.out_dir) / (c.name + ".json");
  std::ofstream f(rec, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write run record '" + rec.string() + "'");
  f << record.dump(2) << "\n";
  paths.push_back(rec.string());
  return paths;
}

}  // namespace lab
