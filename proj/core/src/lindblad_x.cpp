#include "backflow/lindblad_x.hpp"

#include <cmath>
#include <limits>

#include "backflow/error.hpp"

namespace backflow {

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ContractViolation("lindblad-x: T must be >= 0");
}

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

void LindbladXParams::validate() const {
  if (!(kappa_bar >= 0.0) || !std::isfinite(kappa_bar))
    throw ContractViolation("lindblad-x: kappa_bar must be finite and >= 0");
  if (!std::isfinite(p0_bar)) throw ContractViolation("lindblad-x: p0_bar must be finite");
}

GaussianSolution gaussian_solution(const LindbladXParams& params, double t) {
  params.validate();
  check_time(t);
  const double k = params.kappa_bar;
  GaussianSolution s;
  s.a01 = params.p0_bar;
  s.a02 = 0.125 + 0.5 * k * t;
  s.a10 = params.p0_bar * t;
  s.a11 = 0.25 * t + 0.5 * k * t * t;
  s.a2 = 0.5 * (1.0 + 0.25 * t * t + k * t * t * t / 3.0);
  return s;
}

Complex density_matrix(const LindbladXParams& params, double r_centre, double r_sep, double t) {
  const GaussianSolution s = gaussian_solution(params, t);
  const Complex shift(r_centre - s.a10, -s.a11 * r_sep);
  const Complex exponent = Complex(-s.a02 * r_sep * r_sep, s.a01 * r_sep) - shift * shift / (4.0 * s.a2);
  return std::exp(exponent) / std::sqrt(4.0 * kPi * s.a2);
}

double sigma_t(const LindbladXParams& params, double t) {
  return std::sqrt(2.0 * gaussian_solution(params, t).a2);
}

double ell_t(const LindbladXParams& params, double t) {
  const GaussianSolution s = gaussian_solution(params, t);
  return 1.0 / std::sqrt(8.0 * (s.a02 - s.a11 * s.a11 / (4.0 * s.a2)));
}

double w_t(const LindbladXParams& params, double t) {
  params.validate();
  check_time(t);
  return 0.5 * std::sqrt(1.0 + 4.0 * params.kappa_bar * t);
}

double pr_p_negative_t(const LindbladXParams& params, double t) {
  params.validate();
  check_time(t);
  return 0.5 * std::erfc(std::sqrt(2.0) * params.p0_bar / std::sqrt(1.0 + 4.0 * params.kappa_bar * t));
}

double pr_x_negative_t(const LindbladXParams& params, double t) {
  return 0.5 * std::erfc(params.p0_bar * t / (std::sqrt(2.0) * sigma_t(params, t)));
}

DecoherenceTimescales decoherence_timescales(const LindbladXParams& params) {
  params.validate();
  const double k = params.kappa_bar;
  if (k == 0.0) return {kInfinity, kInfinity, kInfinity};
  return {1.0 / (2.0 * k), 1.0 / (4.0 * k), std::cbrt(6.0 / k)};
}

double tau_dx(const LindbladXParams& params, double dx) {
  params.validate();
  if (!std::isfinite(dx)) throw ContractViolation("lindblad-x: dx must be finite");
  const double denom = params.kappa_bar * dx * dx;
  return denom == 0.0 ? kInfinity : 2.0 / denom;
}

}  // namespace backflow
