#include "backflow/backflow.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "backflow/error.hpp"

namespace backflow {

namespace {

std::string fmt(double v) { return shortest_decimal(v); }

// Bisects [a, b] where J(a) and J(b) lie on opposite sides of zero
// (negative vs non-negative) down to width tol; returns the midpoint.
double refine_crossing(const CurrentFunction& current, double a, double b, bool a_negative,
                       double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    if ((current(m) < 0.0) == a_negative)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

double negative_part(double j) { return 0.5 * (std::abs(j) - j); }

BackflowReport detect_intervals(const CurrentFunction& current, double t_max, int n_samples,
                                const DetectOptions& options) {
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw ContractViolation("detect_intervals: t_max must be positive");
  if (n_samples < 64) throw ContractViolation("detect_intervals: n_samples must be >= 64");
  if (!(options.refine_tol > 0.0)) throw ContractViolation("detect_intervals: refine_tol must be > 0");

  BackflowReport report;
  report.t_max = t_max;
  report.n_samples = n_samples;

  const double h = t_max / (n_samples - 1);
  std::vector<double> t(n_samples), j(n_samples);
  for (int i = 0; i < n_samples; ++i) t[i] = i == n_samples - 1 ? t_max : i * h;
  parallel_for(n_samples, options.exec, [&](std::size_t i) { j[i] = current(t[i]); });
  for (int i = 0; i < n_samples; ++i)
    if (!std::isfinite(j[i])) throw DomainError("current not finite at T=" + fmt(t[i]));

  int quiet = 0;
  double first_quiet = 0.0;
  for (int i = 0; i + 1 < n_samples; ++i) {
    if (std::abs(j[i]) < options.noise_floor && std::abs(j[i + 1]) < options.noise_floor) {
      if (quiet++ == 0) first_quiet = t[i];
    }
  }
  if (quiet > 0)
    report.warnings.push_back(std::to_string(quiet) + " adjacent sample pairs below the noise floor " +
                              fmt(options.noise_floor) + " starting at T=" + fmt(first_quiet) +
                              "; intervals there may be unresolved");

  std::vector<Interval> raw;
  bool inside = j[0] < 0.0;
  double start = 0.0;
  for (int i = 0; i + 1 < n_samples; ++i) {
    const bool a_neg = j[i] < 0.0;
    const bool b_neg = j[i + 1] < 0.0;
    if (a_neg == b_neg) continue;
    const double cross = refine_crossing(current, t[i], t[i + 1], a_neg, options.refine_tol);
    if (b_neg) {
      start = cross;
      inside = true;
    } else {
      raw.push_back({start, cross});
      inside = false;
    }
  }
  if (inside) {
    raw.push_back({start, t_max});
    report.open_end = true;
    report.warnings.push_back("backflow interval still open at t_max=" + fmt(t_max));
  }

  for (const Interval& iv : raw) {
    if (iv.duration() < 2.0 * options.refine_tol) continue;
    const double amount = adaptive_simpson([&](double s) { return negative_part(current(s)); },
                                           iv.start, iv.end, options.amount_tol);
    report.intervals.push_back(iv);
    report.amounts.push_back(amount);
    report.total_amount += amount;
  }
  for (int i = 0; i < n_samples; ++i) report.peak = std::max(report.peak, negative_part(j[i]));
  if (!report.intervals.empty()) {
    report.first_duration = report.intervals.front().duration();
    report.first_amount = report.amounts.front();
  }
  return report;
}

BackflowReport detect_intervals(const CurrentFunction& current, double t_max, int n_samples,
                                double refine_tol) {
  DetectOptions options;
  options.refine_tol = refine_tol;
  return detect_intervals(current, t_max, n_samples, options);
}

CurrentFunction origin_current(const EvolutionModel& model, const DensityMatrixSpec& spec,
                               double t_max, int panel_order) {
  validate(model);
  if (is_density_law(model)) {
    auto j = std::make_shared<DensityMatrixCurrent>(model, spec, t_max, 0.0, panel_order);
    return [j](double t) { return (*j)(t); };
  }
  if (spec.terms().size() != 1)
    throw ContractViolation("scaled laws evolve pure states only");
  double eps = 1.0, gamma = 0.0;
  if (const auto* f = std::get_if<ScaledFree>(&model)) eps = f->epsilon;
  if (const auto* c = std::get_if<ScaledCK>(&model)) {
    eps = c->epsilon;
    gamma = c->gamma;
  }
  auto j = std::make_shared<ScaledCurrent>(spec.terms().front().state, eps, gamma, t_max, 0.0,
                                           panel_order);
  return [j](double t) { return (*j)(t); };
}

double backflow_amount_scaled_bm(double epsilon, double t_max, int n_samples) {
  const ScaledCurrent j(bm_state(epsilon), epsilon, 0.0, t_max);
  const BackflowReport r = detect_intervals([&](double t) { return j(t); }, t_max, n_samples,
                                            DetectOptions{});
  if (r.intervals.empty())
    throw NumericalError("scaled Bracken-Melloy current shows no backflow at epsilon=" + fmt(epsilon));
  return r.first_amount;
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::LambdaInv:
      return "lambda_inv";
    case SweepAxis::Epsilon:
      return "epsilon";
    case SweepAxis::Gamma:
      return "gamma";
  }
  return "?";
}

EvolutionModel sweep_model(SweepAxis axis, double value, const EvolutionModel& base) {
  switch (axis) {
    case SweepAxis::LambdaInv:
      if (!std::holds_alternative<Milburn>(base) && !std::holds_alternative<VonNeumann>(base))
        throw ContractViolation("lambda_inv sweep needs a Milburn or von Neumann law");
      return Milburn{value};
    case SweepAxis::Epsilon:
      if (const auto* c = std::get_if<ScaledCK>(&base)) return ScaledCK{value, c->gamma};
      if (std::holds_alternative<ScaledFree>(base)) return ScaledFree{value};
      throw ContractViolation("epsilon sweep needs a scaled law");
    case SweepAxis::Gamma: {
      double eps = 1.0;
      if (const auto* c = std::get_if<ScaledCK>(&base))
        eps = c->epsilon;
      else if (const auto* f = std::get_if<ScaledFree>(&base))
        eps = f->epsilon;
      else
        throw ContractViolation("gamma sweep needs a scaled law");
      return ScaledCK{eps, value};
    }
  }
  throw ContractViolation("unknown sweep axis");
}

StateKind sweep_state(SweepAxis axis, double value, const StateKind& base) {
  if (axis != SweepAxis::Epsilon) return base;
  StateKind out = base;
  if (auto* bm = std::get_if<BrackenMelloy>(&out)) bm->epsilon = value;
  if (auto* g = std::get_if<GaussianSuperposition>(&out)) g->epsilon = value;
  return out;
}

std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values,
                            const SweepScenario& scenario, Execution exec) {
  if (!std::is_sorted(values.begin(), values.end()))
    throw ContractViolation("sweep values must be sorted ascending");
  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), exec, [&](std::size_t k) {
    const double v = values[k];
    try {
      const EvolutionModel model = sweep_model(axis, v, scenario.model);
      const auto spec = DensityMatrixSpec::pure(MomentumState(sweep_state(axis, v, scenario.state)));
      DetectOptions detect = scenario.detect;
      detect.exec = Execution{1};
      const BackflowReport r =
          detect_intervals(origin_current(model, spec, scenario.t_max, scenario.panel_order), scenario.t_max,
                           scenario.n_samples, detect);
      rows[k] = SweepRow{v, r.intervals.size(), r.first_duration, r.first_amount, r.total_amount, r.peak};
    } catch (const Error& e) {
      const std::string msg = std::string("sweep ") + to_string(axis) + "=" + fmt(v) + ": " + e.what();
      if (e.kind() == ErrorKind::Config) throw ConfigError(msg);
      throw NumericalError(msg);
    }
  });
  return rows;
}

}  // namespace backflow
