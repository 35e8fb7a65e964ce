#pragma once

#include "backflow/numerics.hpp"

namespace backflow {

// Gaussian packet of unit position width under the Lindblad equation with
// L proportional to x. Length unit sigma_0, time unit sigma_0^2 m / hbar.

struct LindbladXParams {
  double p0_bar = 0.0;
  double kappa_bar = 0.0;

  /// Throws ContractViolation for negative or non-finite kappa_bar.
  void validate() const;
};

/// Coefficients of rho(R, r, T) = (4 pi a2)^(-1/2)
///   exp[-a02 r^2 + i a01 r - (R - a10 - i a11 r)^2 / (4 a2)],
/// with R the centre and r the separation coordinate.
struct GaussianSolution {
  double a01 = 0.0;
  double a02 = 0.0;
  double a10 = 0.0;
  double a11 = 0.0;
  double a2 = 0.0;
};

GaussianSolution gaussian_solution(const LindbladXParams& params, double t);

Complex density_matrix(const LindbladXParams& params, double r_centre, double r_sep, double t);

/// Position width sqrt(1 + T^2/4 + kappa T^3/3).
double sigma_t(const LindbladXParams& params, double t);
/// Coherence length {8 (a02 - a11^2 / (4 a2))}^(-1/2).
double ell_t(const LindbladXParams& params, double t);
/// Momentum width sqrt(1 + 4 kappa T) / 2.
double w_t(const LindbladXParams& params, double t);

double pr_p_negative_t(const LindbladXParams& params, double t);
double pr_x_negative_t(const LindbladXParams& params, double t);

/// Infinite when kappa_bar = 0.
struct DecoherenceTimescales {
  double tau_decoh = 0.0;  // 1 / (2 kappa)
  double tau_a = 0.0;      // 1 / (4 kappa), onset of negative momenta
  double tau_s = 0.0;      // (6 / kappa)^(1/3), onset in position
};

DecoherenceTimescales decoherence_timescales(const LindbladXParams& params);
/// 2 / (kappa dx^2).
double tau_dx(const LindbladXParams& params, double dx);

}  // namespace backflow
