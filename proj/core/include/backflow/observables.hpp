#pragma once

#include <optional>
#include <vector>

#include "backflow/evolution.hpp"
#include "backflow/parallel.hpp"
#include "backflow/states.hpp"

namespace backflow {

struct CurrentSample {
  double t = 0.0;
  double j = 0.0;
  double x = 0.0;
};

/// Composite Gauss-Legendre rule over the ensemble's momentum support,
/// resolving the phase of exp(-i P^2 T/2 + i P X) for T <= t_max, |X| <= x_max.
QuadratureSpec default_momentum_quadrature(const DensityMatrixSpec& spec, double t_max,
                                           double x_max = 0.0);

/// J(X,T) for a density-matrix law by brute-force double quadrature of the
/// model's current weight. Throws ResolutionError when the imaginary part
/// exceeds 1e-6.
double current_at(const EvolutionModel& model, const DensityMatrixSpec& spec, double x, double t,
                  const QuadratureSpec& quad);
/// Separate rules for P and P'. Only unequal rules can leave an imaginary part.
double current_at(const EvolutionModel& model, const DensityMatrixSpec& spec, double x, double t,
                  const QuadratureSpec& quad_p, const QuadratureSpec& quad_q);
double current_origin(const EvolutionModel& model, const DensityMatrixSpec& spec, double t,
                      const QuadratureSpec& quad);
/// Uses default_momentum_quadrature(spec, t).
double current_origin(const EvolutionModel& model, const DensityMatrixSpec& spec, double t);

/// Lindblad L = p current, J = (1/4pi) int (P + P' - i kappa (P - P')) rho.
double lindblad_p_current_origin(const DensityMatrixSpec& spec, double kappa, double t);

/// Current weight W(P,P') of a density law, so that
/// J(X,T) = (1/4pi) int W exp(i(P-P')X) rho(P,P',T).
Complex current_weight(const EvolutionModel& model, double p, double pp);

/// Fast evaluation of J(X,T) and of the strip probability Pr(-L < X < 0, T)
/// for a density law on a fixed grid. Both are assembled as Hermitian sums, so
/// results are real by construction.
class DensityMatrixCurrent {
 public:
  DensityMatrixCurrent(const EvolutionModel& model, const DensityMatrixSpec& spec, double t_max,
                       double x_max = 0.0, int panel_order = kDefaultPanelOrder);

  double current(double x, double t) const;
  double operator()(double t) const { return current(0.0, t); }
  /// (1/2pi) int rho(P,P',T) (1 - exp(-i(P-P')L)) / (i(P-P')), L <= x_max.
  double strip_probability(double length, double t) const;

  std::size_t node_count() const { return nodes_.size(); }
  const EvolutionModel& model() const { return model_; }

 private:
  // Per term: w_i Phi_k(P_i) exp(i P_i X - i P_i^2 T/2).
  std::vector<std::vector<Complex>> phased(double x, double t) const;

  // Pair structure of the law: g = P - P' (L = p) or P^2 - P'^2 (Milburn,
  // L = p^2); decay exp(-rate g^2 T), weight imaginary part -skew g (P + P').
  enum class PairForm { None, Difference, SquareDifference };

  EvolutionModel model_;
  PairForm form_ = PairForm::None;
  double rate_ = 0.0;
  double skew_ = 0.0;
  double t_max_;
  double x_max_;
  std::vector<double> nodes_;
  std::vector<double> term_weights_;
  std::vector<std::vector<Complex>> amplitudes_;  // per term: w_i Phi_k(P_i)
};

/// Scaled (Caldirola-Kanai) current sqrt(eps) Im(psi* dpsi/dX) exp(-2 Gamma T)
/// with psi evaluated at tau(T), on one cached momentum grid.
class ScaledCurrent {
 public:
  ScaledCurrent(const MomentumState& state, double epsilon, double gamma, double t_max,
                double x_max = 0.0, int panel_order = kDefaultPanelOrder);

  double current(double x, double t) const;
  double operator()(double t) const { return current(0.0, t); }
  /// |psi(X, tau(T))|^2.
  double density(double x, double t) const;

  double epsilon() const { return epsilon_; }
  double gamma() const { return gamma_; }
  std::size_t node_count() const { return evaluator_.node_count(); }

 private:
  double epsilon_;
  double gamma_;
  WavefunctionEvaluator evaluator_;
};

double scaled_current(const MomentumState& state, double epsilon, double gamma, double x, double t);

/// Pr(X < 0, T) of the scaled Gaussian superposition in closed form. The
/// superposition's own epsilon is replaced by the argument; epsilon = 0 gives
/// the classical limit.
double prob_negative_halfspace_closed(const GaussianSuperposition& g, double epsilon, double t);

struct InitialProbability {
  double value = 0.0;  // includes the tail estimate
  double tail = 0.0;   // |X_max| rho(-X_max) / 3, the |X|^-4 envelope estimate
};

/// Pr(X < 0) at T = 0 by quadrature of |psi(X,0)|^2 over [-x_max, 0].
InitialProbability initial_prob_negative(const MomentumState& state, double epsilon,
                                         double x_max = 60.0);

struct ProbabilityTrace {
  std::vector<double> t;
  std::vector<double> current;
  std::vector<double> pr;
  double pr0 = 0.0;
  double tail = 0.0;
  double simpson_error = 0.0;  // Richardson estimate from the half-density grid
};

/// Pr(T) = Pr(0) - int_0^T J(0,t) dt on a uniform grid of n_samples points,
/// cumulative Simpson. Any law is accepted; scaled laws need a pure state.
/// Throws ResolutionError when the Simpson error estimate exceeds tol.
ProbabilityTrace prob_negative_halfspace_numeric(const DensityMatrixSpec& spec,
                                                 const EvolutionModel& model, double t_max,
                                                 int n_samples, double tol = 1e-6,
                                                 Execution exec = {});
double prob_negative_halfspace_numeric(const DensityMatrixSpec& spec, const EvolutionModel& model,
                                       double t);

}  // namespace backflow
