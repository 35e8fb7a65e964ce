#include "backflow/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "backflow/error.hpp"

namespace backflow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPanelPhase = 4.0 * kPi;  // 20 nodes over two periods
constexpr std::size_t kMaxPanels = 200000;

void check_epsilon(double epsilon, const char* who) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ContractViolation(std::string(who) + ": epsilon must lie in (0, 1]");
}

double lindblad_f(LindbladFunction f, double p) {
  return f == LindbladFunction::Momentum ? p : p * p;
}

}  // namespace

void validate(const EvolutionModel& model) {
  std::visit(overloaded{
                 [](const VonNeumann&) {},
                 [](const Milburn& m) {
                   if (!(m.lambda_inv >= 0.0) || !std::isfinite(m.lambda_inv))
                     throw ContractViolation("milburn: lambda_inv must be >= 0");
                 },
                 [](const LindbladF& l) {
                   if (!(l.kappa >= 0.0) || !std::isfinite(l.kappa))
                     throw ContractViolation("lindblad: kappa must be >= 0");
                 },
                 [](const ScaledFree& s) { check_epsilon(s.epsilon, "scaled_free"); },
                 [](const ScaledCK& s) {
                   check_epsilon(s.epsilon, "scaled_ck");
                   if (!(s.gamma >= 0.0) || !std::isfinite(s.gamma))
                     throw ContractViolation("scaled_ck: gamma must be >= 0");
                 },
             },
             model);
}

bool is_density_law(const EvolutionModel& model) {
  return std::holds_alternative<VonNeumann>(model) || std::holds_alternative<Milburn>(model) ||
         std::holds_alternative<LindbladF>(model);
}

std::string describe(const EvolutionModel& model) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const VonNeumann&) { out << "von_neumann"; },
                 [&](const Milburn& m) {
                   out << "milburn(lambda_inv=" << shortest_decimal(m.lambda_inv) << ")";
                 },
                 [&](const LindbladF& l) {
                   out << "lindblad(f=" << (l.f == LindbladFunction::Momentum ? "p" : "p2")
                       << ", kappa=" << shortest_decimal(l.kappa) << ")";
                 },
                 [&](const ScaledFree& s) {
                   out << "scaled_free(epsilon=" << shortest_decimal(s.epsilon) << ")";
                 },
                 [&](const ScaledCK& s) {
                   out << "scaled_ck(epsilon=" << shortest_decimal(s.epsilon)
                       << ", gamma=" << shortest_decimal(s.gamma) << ")";
                 },
             },
             model);
  return out.str();
}

Complex evolution_factor(const EvolutionModel& model, double p, double pp, double t) {
  if (!(t >= 0.0)) throw ContractViolation("evolution_factor: T must be >= 0");
  validate(model);
  const double d2 = p * p - pp * pp;
  const double decay = std::visit(
      overloaded{
          [](const VonNeumann&) { return 0.0; },
          [&](const Milburn& m) { return d2 * d2 * t * m.lambda_inv / 8.0; },
          [&](const LindbladF& l) {
            const double df = lindblad_f(l.f, p) - lindblad_f(l.f, pp);
            return l.kappa * df * df * t / 2.0;
          },
          [](const auto&) -> double {
            throw ContractViolation("evolution_factor: scaled laws act on wavefunctions");
          },
      },
      model);
  return std::polar(std::exp(-decay), -d2 * t / 2.0);
}

double ck_tau(double t, double gamma) {
  if (!(t >= 0.0)) throw ContractViolation("ck_tau: T must be >= 0");
  if (!(gamma >= 0.0)) throw ContractViolation("ck_tau: Gamma must be >= 0");
  if (gamma == 0.0) return t;
  if (std::isinf(t)) return 1.0 / (2.0 * gamma);
  return -std::expm1(-2.0 * gamma * t) / (2.0 * gamma);
}

QuadratureGrid phase_resolved_grid(const MomentumSupport& support, double x_max, double t_max,
                                   double inv_scale, int panel_order) {
  if (panel_order < 4 || panel_order > 128)
    throw ContractViolation("momentum grid: panel order must lie in [4, 128]");
  const QuadratureGrid ref = gauss_legendre_reference(panel_order);
  auto omega = [&](double p) { return (x_max + std::abs(p) * t_max) * inv_scale; };
  QuadratureGrid grid;
  double a = support.lower;
  std::size_t panels = 0;
  while (a < support.upper) {
    double h = std::min(support.feature_scale, support.upper - a);
    // Shrink until the panel holds at most kPanelPhase of phase at its worst end.
    for (int k = 0; k < 2; ++k) {
      const double w = std::max(omega(a), omega(a + h));
      if (w * h > kPanelPhase) h = kPanelPhase / w;
    }
    const double b = (support.upper - (a + h) < 1e-12 * h) ? support.upper : a + h;
    append_panel(grid, ref, a, b);
    a = b;
    if (++panels > kMaxPanels)
      throw ResolutionError("momentum grid needs more than 200000 panels; reduce t_max or x_max");
  }
  return grid;
}

WavefunctionEvaluator::WavefunctionEvaluator(const MomentumState& state, double epsilon,
                                             double t_max, double x_max, int panel_order)
    : epsilon_(epsilon), t_max_(t_max), x_max_(x_max) {
  check_epsilon(epsilon, "wavefunction");
  if (!(t_max >= 0.0) || !std::isfinite(t_max))
    throw ContractViolation("wavefunction: t_max must be finite and >= 0");
  if (!(x_max >= 0.0) || !std::isfinite(x_max))
    throw ContractViolation("wavefunction: x_max must be finite and >= 0");
  inv_sqrt_eps_ = 1.0 / std::sqrt(epsilon);
  const QuadratureGrid grid = phase_resolved_grid(state.support(), x_max, t_max, inv_sqrt_eps_, panel_order);
  const double prefactor = std::pow(epsilon, -0.25) / std::sqrt(2.0 * kPi);
  nodes_ = grid.nodes;
  coeffs_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    coeffs_[i] = prefactor * grid.weights[i] * state(grid.nodes[i]);
}

WaveValue WavefunctionEvaluator::evaluate(double x, double t) const {
  constexpr double kSlack = 1e-9;
  if (!(t >= 0.0) || t > t_max_ * (1.0 + kSlack) + kSlack)
    throw ContractViolation("wavefunction: T outside the resolved window [0, t_max]");
  if (std::abs(x) > x_max_ * (1.0 + kSlack) + kSlack)
    throw ContractViolation("wavefunction: |X| outside the resolved window");
  Complex psi = 0.0;
  Complex dpsi = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double p = nodes_[i];
    const Complex term = coeffs_[i] * std::polar(1.0, (p * x - 0.5 * p * p * t) * inv_sqrt_eps_);
    psi += term;
    dpsi += p * term;
  }
  return {psi, Complex(0.0, inv_sqrt_eps_) * dpsi};
}

Complex scaled_free_wavefunction(const MomentumState& state, double epsilon, double x, double t) {
  return WavefunctionEvaluator(state, epsilon, t, std::abs(x)).psi(x, t);
}

Complex scaled_ck_wavefunction(const MomentumState& state, double epsilon, double gamma, double x,
                               double t) {
  return scaled_free_wavefunction(state, epsilon, x, ck_tau(t, gamma));
}

}  // namespace backflow
