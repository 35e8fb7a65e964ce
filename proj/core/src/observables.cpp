#include "backflow/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "backflow/error.hpp"

namespace backflow {

namespace {

// exp(-745) underflows to zero in double precision.
constexpr double kNegligibleDecay = 745.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kImagResidueLimit = 1e-6;

void require_density_law(const EvolutionModel& model, const char* who) {
  validate(model);
  if (!is_density_law(model))
    throw ContractViolation(std::string(who) + ": needs a density-matrix law, got " +
                            describe(model));
}

// (1 - exp(-i k L)) / (i k) = L exp(-i k L/2) sinc(k L/2).
Complex strip_kernel(double k, double length) {
  const double a = 0.5 * k * length;
  const double sinc = std::abs(a) < 1e-6 ? 1.0 - a * a / 6.0 : std::sin(a) / a;
  return std::polar(length * sinc, -a);
}

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ContractViolation(std::string(who) + ": T must be >= 0");
}

}  // namespace

QuadratureSpec default_momentum_quadrature(const DensityMatrixSpec& spec, double t_max,
                                           double x_max) {
  const MomentumSupport s = spec.support();
  const double width = s.upper - s.lower;
  const double pabs = std::max(std::abs(s.lower), std::abs(s.upper));
  const double omega = pabs * t_max + x_max;
  const double h = std::min(2.0 * s.feature_scale, omega > 0.0 ? 4.0 * kPi / omega : width);
  QuadratureSpec q;
  q.n_nodes = 20;
  q.lower = s.lower;
  q.upper = s.upper;
  q.panels = std::max(1, static_cast<int>(std::ceil(width / h)));
  return q;
}

Complex current_weight(const EvolutionModel& model, double p, double pp) {
  const double sum = p + pp;
  return std::visit(overloaded{
                        [&](const VonNeumann&) { return Complex(sum, 0.0); },
                        [&](const Milburn& m) {
                          return sum * Complex(1.0, -m.lambda_inv * (p * p - pp * pp) / 4.0);
                        },
                        [&](const LindbladF& l) {
                          if (l.f == LindbladFunction::Momentum)
                            return Complex(sum, -l.kappa * (p - pp));
                          return sum * Complex(1.0, -l.kappa * (p * p - pp * pp));
                        },
                        [](const auto&) -> Complex {
                          throw ContractViolation("current weight needs a density-matrix law");
                        },
                    },
                    model);
}

double current_at(const EvolutionModel& model, const DensityMatrixSpec& spec, double x, double t,
                  const QuadratureSpec& quad) {
  return current_at(model, spec, x, t, quad, quad);
}

double current_at(const EvolutionModel& model, const DensityMatrixSpec& spec, double x, double t,
                  const QuadratureSpec& quad_p, const QuadratureSpec& quad_q) {
  require_density_law(model, "current");
  check_time(t, "current");
  auto integrand = [&](double p, double pp) {
    Complex rho = 0.0;
    for (const auto& term : spec.terms()) rho += term.weight * term.state(p) * std::conj(term.state(pp));
    return current_weight(model, p, pp) * evolution_factor(model, p, pp, t) *
           std::polar(1.0, (p - pp) * x) * rho;
  };
  const Complex j = integrate_2d(integrand, quad_p, quad_q) / (4.0 * kPi);
  if (std::abs(j.imag()) > kImagResidueLimit) {
    std::ostringstream msg;
    msg << "current at T=" << t << " has imaginary residue " << j.imag()
        << "; raise the quadrature node count";
    throw ResolutionError(msg.str());
  }
  return j.real();
}

double current_origin(const EvolutionModel& model, const DensityMatrixSpec& spec, double t,
                      const QuadratureSpec& quad) {
  return current_at(model, spec, 0.0, t, quad);
}

double current_origin(const EvolutionModel& model, const DensityMatrixSpec& spec, double t) {
  return current_at(model, spec, 0.0, t, default_momentum_quadrature(spec, t));
}

double lindblad_p_current_origin(const DensityMatrixSpec& spec, double kappa, double t) {
  return current_origin(LindbladF{LindbladFunction::Momentum, kappa}, spec, t);
}

// ---------------------------------------------------------------------------

DensityMatrixCurrent::DensityMatrixCurrent(const EvolutionModel& model,
                                           const DensityMatrixSpec& spec, double t_max,
                                           double x_max, int panel_order)
    : model_(model), t_max_(t_max), x_max_(x_max) {
  require_density_law(model, "density current");
  check_time(t_max, "density current");
  if (!(x_max >= 0.0) || !std::isfinite(x_max))
    throw ContractViolation("density current: x_max must be >= 0");
  std::visit(overloaded{
                 [&](const Milburn& m) {
                   form_ = PairForm::SquareDifference;
                   rate_ = m.lambda_inv / 8.0;
                   skew_ = m.lambda_inv / 4.0;
                 },
                 [&](const LindbladF& l) {
                   form_ = l.f == LindbladFunction::Momentum ? PairForm::Difference
                                                             : PairForm::SquareDifference;
                   rate_ = l.kappa / 2.0;
                   skew_ = l.kappa;
                 },
                 [](const auto&) {},
             },
             model);
  // A law with zero rate is von Neumann and takes the separable path.
  if (rate_ == 0.0 && skew_ == 0.0) form_ = PairForm::None;
  const QuadratureGrid grid = phase_resolved_grid(spec.support(), x_max, t_max, 1.0, panel_order);
  nodes_ = grid.nodes;
  for (const auto& term : spec.terms()) {
    term_weights_.push_back(term.weight);
    std::vector<Complex> a(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) a[i] = grid.weights[i] * term.state(grid.nodes[i]);
    amplitudes_.push_back(std::move(a));
  }
}

std::vector<std::vector<Complex>> DensityMatrixCurrent::phased(double x, double t) const {
  if (!(t >= 0.0) || t > t_max_ * (1.0 + 1e-9) + 1e-9)
    throw ContractViolation("density current: T outside the resolved window");
  if (std::abs(x) > x_max_ * (1.0 + 1e-9) + 1e-9)
    throw ContractViolation("density current: |X| outside the resolved window");
  const std::size_t n = nodes_.size();
  std::vector<Complex> phase(n);
  for (std::size_t i = 0; i < n; ++i)
    phase[i] = std::polar(1.0, nodes_[i] * x - 0.5 * nodes_[i] * nodes_[i] * t);
  std::vector<std::vector<Complex>> out(amplitudes_.size(), std::vector<Complex>(n));
  for (std::size_t k = 0; k < amplitudes_.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) out[k][i] = amplitudes_[k][i] * phase[i];
  return out;
}

double DensityMatrixCurrent::current(double x, double t) const {
  const auto c = phased(x, t);
  const std::size_t n = nodes_.size();
  double total = 0.0;
  if (form_ == PairForm::None) {
    // (P + P') is separable: the double sum is 2 Re(A conj(B)).
    for (std::size_t k = 0; k < c.size(); ++k) {
      Complex a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        a += nodes_[i] * c[k][i];
        b += c[k][i];
      }
      total += term_weights_[k] * 2.0 * (a * std::conj(b)).real();
    }
    return total / (4.0 * kPi);
  }
  const bool square = form_ == PairForm::SquareDifference;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto& ck = c[k];
    double diag = 0.0;
    Complex off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = nodes_[i];
      diag += 2.0 * p * std::norm(ck[i]);
      Complex row = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double q = nodes_[j];
        const double sum = p + q;
        const double g = square ? (p - q) * sum : p - q;
        const double decay = rate_ * g * g * t;
        if (decay > kNegligibleDecay) continue;
        const Complex w = square ? sum * Complex(1.0, -skew_ * g) : Complex(sum, -skew_ * g);
        row += std::exp(-decay) * w * std::conj(ck[j]);
      }
      off += ck[i] * row;
    }
    total += term_weights_[k] * (diag + 2.0 * off.real());
  }
  return total / (4.0 * kPi);
}

double DensityMatrixCurrent::strip_probability(double length, double t) const {
  if (!(length > 0.0) || length > x_max_ * (1.0 + 1e-9) + 1e-9)
    throw ContractViolation("strip probability: length must lie in (0, x_max]");
  const auto c = phased(0.0, t);
  const std::size_t n = nodes_.size();
  const bool square = form_ == PairForm::SquareDifference;
  double total = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto& ck = c[k];
    double diag = 0.0;
    Complex off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = nodes_[i];
      diag += length * std::norm(ck[i]);
      Complex row = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double q = nodes_[j];
        const double g = square ? (p - q) * (p + q) : p - q;
        const double decay = form_ == PairForm::None ? 0.0 : rate_ * g * g * t;
        if (decay > kNegligibleDecay) continue;
        row += std::exp(-decay) * strip_kernel(p - q, length) * std::conj(ck[j]);
      }
      off += ck[i] * row;
    }
    total += term_weights_[k] * (diag + 2.0 * off.real());
  }
  return total / (2.0 * kPi);
}

// ---------------------------------------------------------------------------

ScaledCurrent::ScaledCurrent(const MomentumState& state, double epsilon, double gamma,
                             double t_max, double x_max, int panel_order)
    : epsilon_(epsilon),
      gamma_(gamma),
      evaluator_(state, epsilon, ck_tau(t_max, gamma), x_max, panel_order) {
  validate(ScaledCK{epsilon, gamma});
}

double ScaledCurrent::current(double x, double t) const {
  check_time(t, "scaled current");
  const WaveValue v = evaluator_.evaluate(x, ck_tau(t, gamma_));
  const double j = std::sqrt(epsilon_) * (std::conj(v.psi) * v.dpsi).imag();
  return gamma_ == 0.0 ? j : j * std::exp(-2.0 * gamma_ * t);
}

double ScaledCurrent::density(double x, double t) const {
  check_time(t, "scaled density");
  return std::norm(evaluator_.psi(x, ck_tau(t, gamma_)));
}

double scaled_current(const MomentumState& state, double epsilon, double gamma, double x,
                      double t) {
  return ScaledCurrent(state, epsilon, gamma, t, std::abs(x)).current(x, t);
}

double prob_negative_halfspace_closed(const GaussianSuperposition& g, double epsilon, double t) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw ContractViolation("closed-form Pr(X<0): epsilon must lie in [0, 1]");
  check_time(t, "closed-form Pr(X<0)");
  if (!(g.alpha >= 0.0)) throw ContractViolation("closed-form Pr(X<0): alpha must be >= 0");
  const double a2 = g.alpha * g.alpha;
  if (epsilon == 0.0) {
    const double r2 = std::sqrt(2.0);
    return 0.5 / (1.0 + a2) * (std::erfc(g.p0a * t / r2) + a2 * std::erfc(g.p0b * t / r2));
  }
  GaussianSuperposition scaled = g;
  scaled.epsilon = epsilon;
  const double n = gaussian_superposition_norm_factor(scaled);
  const double sigma = std::sqrt(1.0 + epsilon * t * t / 4.0);
  const double d = g.p0a - g.p0b;
  const double s2 = std::sqrt(2.0) * sigma;
  const Complex d2((g.p0a + g.p0b) * t / 2.0, d / std::sqrt(epsilon));
  // exp(-d^2/2eps) erfc(D2/(sqrt2 Sigma)) without overflow of either factor.
  const Complex e = erfc_complex_scaled(d2 / s2, -d * d / (2.0 * epsilon));
  const double interference = 2.0 * g.alpha * (std::cos(g.theta) * e.real() + std::sin(g.theta) * e.imag());
  return 0.5 * n * n *
         (std::erfc(g.p0a * t / s2) + a2 * std::erfc(g.p0b * t / s2) + interference);
}

InitialProbability initial_prob_negative(const MomentumState& state, double epsilon,
                                         double x_max) {
  if (!(x_max > 0.0) || !std::isfinite(x_max))
    throw ContractViolation("initial Pr(X<0): x_max must be positive");
  const WavefunctionEvaluator psi(state, epsilon, 0.0, x_max);
  const MomentumSupport s = state.support();
  // |psi|^2 oscillates at most at (support width)/sqrt(eps); envelopes vary on O(1).
  const double omega = (s.upper - s.lower) / std::sqrt(epsilon);
  const double h = std::min(1.0, 6.0 * kPi / omega);
  const int panels = static_cast<int>(std::ceil(x_max / h));
  const QuadratureGrid ref = gauss_legendre_reference(20);
  QuadratureGrid grid;
  for (int p = 0; p < panels; ++p)
    append_panel(grid, ref, -x_max + x_max * p / panels, -x_max + x_max * (p + 1) / panels);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * std::norm(psi.psi(grid.nodes[i], 0.0));
  InitialProbability out;
  out.tail = x_max * std::norm(psi.psi(-x_max, 0.0)) / 3.0;
  out.value = sum + out.tail;
  return out;
}

ProbabilityTrace prob_negative_halfspace_numeric(const DensityMatrixSpec& spec,
                                                 const EvolutionModel& model, double t_max,
                                                 int n_samples, double tol, Execution exec) {
  validate(model);
  if (!(t_max > 0.0) || !std::isfinite(t_max))
    throw ContractViolation("Pr(X<0) trace: t_max must be positive");
  if (n_samples < 5) throw ContractViolation("Pr(X<0) trace: n_samples must be >= 5");

  ProbabilityTrace out;
  out.t.resize(n_samples);
  out.current.resize(n_samples);
  const double h = t_max / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) out.t[i] = i == n_samples - 1 ? t_max : i * h;

  if (is_density_law(model)) {
    const DensityMatrixCurrent j(model, spec, t_max);
    parallel_for(n_samples, exec, [&](std::size_t i) { out.current[i] = j(out.t[i]); });
    for (const auto& term : spec.terms()) {
      const InitialProbability p0 = initial_prob_negative(term.state, 1.0);
      out.pr0 += term.weight * p0.value;
      out.tail += term.weight * p0.tail;
    }
  } else {
    if (spec.terms().size() != 1)
      throw ContractViolation("Pr(X<0) trace: scaled laws evolve pure states only");
    const auto& state = spec.terms().front().state;
    const double eps = std::visit(overloaded{
                                      [](const ScaledFree& s) { return s.epsilon; },
                                      [](const ScaledCK& s) { return s.epsilon; },
                                      [](const auto&) { return 1.0; },
                                  },
                                  model);
    const double gamma = std::holds_alternative<ScaledCK>(model) ? std::get<ScaledCK>(model).gamma : 0.0;
    const ScaledCurrent j(state, eps, gamma, t_max);
    parallel_for(n_samples, exec, [&](std::size_t i) { out.current[i] = j(out.t[i]); });
    const InitialProbability p0 = initial_prob_negative(state, eps);
    out.pr0 = p0.value;
    out.tail = p0.tail;
  }

  const std::vector<double> flux = cumulative_simpson(out.current, h);
  std::vector<double> coarse;
  for (int i = 0; i < n_samples; i += 2) coarse.push_back(out.current[i]);
  const std::vector<double> flux2 = cumulative_simpson(coarse, 2.0 * h);
  for (std::size_t m = 0; m < flux2.size(); ++m)
    out.simpson_error = std::max(out.simpson_error, std::abs(flux[2 * m] - flux2[m]) / 15.0);
  if (out.simpson_error > tol) {
    std::ostringstream msg;
    msg << "Pr(X<0) trace: Simpson error estimate " << out.simpson_error << " exceeds " << tol
        << "; raise n_samples above " << n_samples;
    throw ResolutionError(msg.str());
  }
  out.pr.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) out.pr[i] = out.pr0 - flux[i];
  return out;
}

double prob_negative_halfspace_numeric(const DensityMatrixSpec& spec, const EvolutionModel& model,
                                       double t) {
  check_time(t, "Pr(X<0)");
  if (t == 0.0) {
    if (is_density_law(model)) {
      double pr0 = 0.0;
      for (const auto& term : spec.terms())
        pr0 += term.weight * initial_prob_negative(term.state, 1.0).value;
      return pr0;
    }
  }
  const double t_max = t > 0.0 ? t : 1e-12;
  return prob_negative_halfspace_numeric(spec, model, t_max, 2049).pr.back();
}

}  // namespace backflow
