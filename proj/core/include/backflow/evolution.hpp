#pragma once

#include <string>
#include <variant>
#include <vector>

#include "backflow/numerics.hpp"
#include "backflow/states.hpp"

namespace backflow {

struct VonNeumann {};

/// First-order Milburn law; lambda_inv = 1/Lambda.
struct Milburn {
  double lambda_inv = 0.0;
};

enum class LindbladFunction { Momentum, MomentumSquared };

/// Lindblad equation with L proportional to f(p); kappa is the dimensionless rate.
struct LindbladF {
  LindbladFunction f = LindbladFunction::Momentum;
  double kappa = 0.0;
};

/// Free evolution under the scaled Schrodinger equation.
struct ScaledFree {
  double epsilon = 1.0;
};

/// Free Caldirola-Kanai evolution under the scaled equation.
struct ScaledCK {
  double epsilon = 1.0;
  double gamma = 0.0;
};

using EvolutionModel = std::variant<VonNeumann, Milburn, LindbladF, ScaledFree, ScaledCK>;

/// Throws ContractViolation for out-of-range parameters.
void validate(const EvolutionModel& model);

/// True for the laws acting on momentum-space density matrices.
bool is_density_law(const EvolutionModel& model);

std::string describe(const EvolutionModel& model);

/// rho(P,P',T) / rho(P,P',0) for the density-matrix laws.
Complex evolution_factor(const EvolutionModel& model, double p, double pp, double t);

/// tau(T) = (1 - exp(-2 Gamma T)) / (2 Gamma), equal to T at Gamma = 0.
double ck_tau(double t, double gamma);

struct WaveValue {
  Complex psi;
  Complex dpsi;  // d/dX
};

/// Gauss-Legendre nodes per momentum panel. Each panel spans at most two
/// periods of the local phase.
constexpr int kDefaultPanelOrder = 20;

/// Scaled free wavefunction on a fixed momentum grid resolved for |X| <= x_max
/// and 0 <= T <= t_max. Panels follow the local phase frequency
/// (x_max + |P| t_max)/sqrt(epsilon) and the state's feature scale.
class WavefunctionEvaluator {
 public:
  WavefunctionEvaluator(const MomentumState& state, double epsilon, double t_max, double x_max,
                        int panel_order = kDefaultPanelOrder);

  WaveValue evaluate(double x, double t) const;
  Complex psi(double x, double t) const { return evaluate(x, t).psi; }

  double epsilon() const { return epsilon_; }
  double t_max() const { return t_max_; }
  double x_max() const { return x_max_; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  double epsilon_;
  double inv_sqrt_eps_;
  double t_max_;
  double x_max_;
  std::vector<double> nodes_;
  std::vector<Complex> coeffs_;  // weight * prefactor * Phi(P)
};

/// Builds the composite Gauss-Legendre momentum grid used by the evaluators.
/// omega(P) = (x_max + |P| t_max) * inv_scale bounds the phase frequency.
/// panel_order outside [4, 128] is a ContractViolation.
QuadratureGrid phase_resolved_grid(const MomentumSupport& support, double x_max, double t_max,
                                   double inv_scale, int panel_order = kDefaultPanelOrder);

Complex scaled_free_wavefunction(const MomentumState& state, double epsilon, double x, double t);
Complex scaled_ck_wavefunction(const MomentumState& state, double epsilon, double gamma, double x,
                               double t);

}  // namespace backflow
