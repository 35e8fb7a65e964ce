#pragma once

#include <functional>
#include <string>
#include <vector>

#include "backflow/evolution.hpp"
#include "backflow/observables.hpp"
#include "backflow/parallel.hpp"
#include "backflow/states.hpp"

namespace backflow {

/// max(-J, 0).
double negative_part(double j);

struct Interval {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
};

struct BackflowReport {
  std::vector<Interval> intervals;
  std::vector<double> amounts;  // integral of J_- over each interval
  double first_duration = 0.0;
  double first_amount = 0.0;
  double total_amount = 0.0;
  double peak = 0.0;  // largest sampled J_-
  double t_max = 0.0;
  int n_samples = 0;
  bool open_end = false;  // last interval still running at t_max
  std::vector<std::string> warnings;
};

struct DetectOptions {
  double refine_tol = 1e-6;
  double amount_tol = 1e-8;
  /// Two adjacent samples with |J| below this are reported as a possible
  /// unresolved interval.
  double noise_floor = 1e-13;
  Execution exec{};
};

using CurrentFunction = std::function<double(double)>;

/// Samples J on a uniform grid, refines sign changes by bisection and
/// integrates J_- over each negative stretch with adaptive Simpson.
BackflowReport detect_intervals(const CurrentFunction& current, double t_max, int n_samples,
                                const DetectOptions& options);
BackflowReport detect_intervals(const CurrentFunction& current, double t_max, int n_samples,
                                double refine_tol);

/// J(0,T) on [0, t_max] for any law; scaled laws need a pure ensemble.
CurrentFunction origin_current(const EvolutionModel& model, const DensityMatrixSpec& spec,
                               double t_max, int panel_order = kDefaultPanelOrder);

/// Backflow amount over the first interval of the scaled Bracken-Melloy state.
double backflow_amount_scaled_bm(double epsilon, double t_max = 5.0, int n_samples = 2048);

enum class SweepAxis { LambdaInv, Epsilon, Gamma };

const char* to_string(SweepAxis axis);

struct SweepScenario {
  StateKind state = BrackenMelloy{};
  /// Law the swept parameter is substituted into: Milburn for LambdaInv,
  /// ScaledFree/ScaledCK for Epsilon and Gamma.
  EvolutionModel model = VonNeumann{};
  double t_max = 1.0;
  int n_samples = 2048;
  int panel_order = kDefaultPanelOrder;
  DetectOptions detect{};
};

struct SweepRow {
  double value = 0.0;
  std::size_t n_intervals = 0;
  double first_duration = 0.0;
  double first_amount = 0.0;
  double total_amount = 0.0;
  double peak = 0.0;
};

/// Law and state for one sweep point. Epsilon also rescales the state when
/// its kind carries an epsilon.
EvolutionModel sweep_model(SweepAxis axis, double value, const EvolutionModel& base);
StateKind sweep_state(SweepAxis axis, double value, const StateKind& base);

/// One row per value, in input order. Values must be sorted ascending. A
/// failure at any point aborts the sweep naming that value.
std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values,
                            const SweepScenario& scenario, Execution exec = {});

}  // namespace backflow
