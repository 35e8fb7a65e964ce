#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "backflow/numerics.hpp"

namespace backflow {

// All states live in dimensionless momentum space (capital-letter variables).

/// Bracken-Melloy state at scaled Planck parameter epsilon (epsilon = 1 is the
/// original state).
struct BrackenMelloy {
  double epsilon = 1.0;
};

/// Bracken-Melloy profile with complex decay rate 1 + i/2.
struct ComplexDamped {};

/// sqrt(2) exp(-P) on P >= 0.
struct Exponential {};

/// Two co-centred Gaussian packets with kicks p0a, p0b, relative amplitude
/// alpha and phase theta; momentum width sqrt(epsilon).
struct GaussianSuperposition {
  double p0a = 14.0;
  double p0b = 3.0;
  double alpha = 1.9;
  double theta = kPi;
  double epsilon = 1.0;
};

/// (2/pi)^(1/4) exp(-(P - p0)^2): unit position width.
struct SingleGaussian {
  double p0 = 0.0;
};

using StateKind =
    std::variant<BrackenMelloy, ComplexDamped, Exponential, GaussianSuperposition, SingleGaussian>;

/// Interval outside which the amplitude is below ~1e-17 of its scale, plus
/// the shortest length over which the amplitude varies.
struct MomentumSupport {
  double lower = 0.0;
  double upper = 0.0;
  double feature_scale = 1.0;
};

/// Immutable closed-form momentum amplitude Phi(P).
class MomentumState {
 public:
  /// Throws DegenerateStateError / ContractViolation on bad parameters, and
  /// NumericalError if the quadrature norm misses 1 by more than 1e-8.
  explicit MomentumState(StateKind kind);

  Complex operator()(double p) const;
  Complex amplitude(double p) const { return (*this)(p); }

  const StateKind& kind() const { return kind_; }
  bool theta_supported() const;
  MomentumSupport support() const;
  /// Quadrature value of the integral of |Phi|^2, computed on construction.
  double norm() const { return norm_; }
  std::string describe() const;

 private:
  StateKind kind_;
  double prefactor_ = 1.0;  // normalisation constant of the closed form
  double norm_ = 0.0;
};

MomentumState bm_state(double epsilon);
MomentumState complex_damped_state();
MomentumState exponential_state();
MomentumState gaussian_superposition(double p0a, double p0b, double alpha, double theta,
                                     double epsilon);
MomentumState single_gaussian(double p0);

/// Normalisation constant N of the Gaussian superposition. Throws
/// DegenerateStateError when the bracket is not positive.
double gaussian_superposition_norm_factor(const GaussianSuperposition& g);

/// Probability of a negative momentum measurement (time independent for every
/// momentum-diagonal law). Exactly 0 for Theta-supported states.
double pr_p_negative(const MomentumState& state);

/// Dimensionless J(0,0) of w |phi_1><phi_1| + (1-w) |phi_2><phi_2| with phi_1
/// the Bracken-Melloy state and phi_2 the exponential state.
double mixture_current_origin(double w);

/// Weighted ensemble of pure states.
class DensityMatrixSpec {
 public:
  struct Term {
    double weight;
    MomentumState state;
  };

  /// Throws ContractViolation unless weights lie in (0,1] and sum to 1
  /// within 1e-12.
  explicit DensityMatrixSpec(std::vector<Term> terms);
  static DensityMatrixSpec pure(MomentumState state);

  const std::vector<Term>& terms() const { return terms_; }
  bool theta_supported() const;
  MomentumSupport support() const;

 private:
  std::vector<Term> terms_;
};

/// Length and time scales behind the dimensionless variables.
struct Units {
  double mu = 1.0;
  double nu = 1.0;

  /// nu = mu^2 m / hbar.
  static Units from_length(double mu, double mass, double hbar);
};

}  // namespace backflow
