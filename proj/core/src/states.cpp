#include "backflow/states.hpp"

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

void check_epsilon(double epsilon, const char* who) {
  if (std::isnan(epsilon)) throw ContractViolation(std::string(who) + ": epsilon is NaN");
  if (epsilon <= 0.0)
    throw DegenerateStateError(std::string(who) +
                               ": epsilon must be > 0 (the classical point has no state)");
  if (epsilon > 1.0) throw ContractViolation(std::string(who) + ": epsilon must be <= 1");
}

// |Phi|^2 quadrature over the support, panels no wider than the feature scale.
double quadrature_norm(const MomentumState& state) {
  const MomentumSupport s = state.support();
  const QuadratureGrid ref = gauss_legendre_reference(24);
  const int panels =
      std::max(8, static_cast<int>(std::ceil((s.upper - s.lower) / s.feature_scale)));
  QuadratureGrid grid;
  for (int p = 0; p < panels; ++p)
    append_panel(grid, ref, s.lower + (s.upper - s.lower) * p / panels,
                 s.lower + (s.upper - s.lower) * (p + 1) / panels);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * std::norm(state(grid.nodes[i]));
  return sum;
}

}  // namespace

double gaussian_superposition_norm_factor(const GaussianSuperposition& g) {
  const double d = g.p0a - g.p0b;
  const double bracket =
      1.0 + g.alpha * g.alpha + 2.0 * g.alpha * std::exp(-d * d / (2.0 * g.epsilon)) * std::cos(g.theta);
  if (!(bracket > 1e-14))
    throw DegenerateStateError("Gaussian superposition cancels to the zero state");
  return 1.0 / std::sqrt(bracket);
}

MomentumState::MomentumState(StateKind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [&](const BrackenMelloy& s) {
                   check_epsilon(s.epsilon, "bm_state");
                   prefactor_ = std::pow(s.epsilon, -0.75) * 18.0 / std::sqrt(35.0);
                 },
                 [&](const ComplexDamped&) { prefactor_ = std::sqrt(1823508.0 / 253055.0); },
                 [&](const Exponential&) { prefactor_ = std::sqrt(2.0); },
                 [&](const GaussianSuperposition& s) {
                   check_epsilon(s.epsilon, "gaussian_superposition");
                   if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha))
                     throw ContractViolation("gaussian_superposition: alpha must be >= 0");
                   if (!std::isfinite(s.p0a) || !std::isfinite(s.p0b) || !std::isfinite(s.theta))
                     throw ContractViolation("gaussian_superposition: parameters must be finite");
                   prefactor_ = gaussian_superposition_norm_factor(s) * std::sqrt(2.0) *
                                std::pow(2.0 * kPi, -0.25) * std::pow(s.epsilon, -0.25);
                 },
                 [&](const SingleGaussian& s) {
                   if (!std::isfinite(s.p0)) throw ContractViolation("single_gaussian: p0 must be finite");
                   prefactor_ = std::pow(2.0 / kPi, 0.25);
                 },
             },
             kind_);
  norm_ = quadrature_norm(*this);
  if (std::abs(norm_ - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg.precision(12);
    msg << describe() << ": quadrature norm " << norm_ << " differs from 1";
    throw NumericalError(msg.str());
  }
}

Complex MomentumState::operator()(double p) const {
  return std::visit(
      overloaded{
          [&](const BrackenMelloy& s) -> Complex {
            if (p < 0.0) return 0.0;
            const double r = std::sqrt(s.epsilon);
            return prefactor_ * p * (std::exp(-p / r) - std::exp(-p / (2.0 * r)) / 6.0);
          },
          [&](const ComplexDamped&) -> Complex {
            if (p < 0.0) return 0.0;
            const Complex a(1.0, 0.5);
            return prefactor_ * p * (std::exp(-a * p) - std::exp(-a * p / 2.0) / 6.0);
          },
          [&](const Exponential&) -> Complex {
            if (p < 0.0) return 0.0;
            return prefactor_ * std::exp(-p);
          },
          [&](const GaussianSuperposition& s) -> Complex {
            const double da = p - s.p0a;
            const double db = p - s.p0b;
            return prefactor_ * (std::exp(-da * da / s.epsilon) +
                                 s.alpha * std::polar(1.0, s.theta) * std::exp(-db * db / s.epsilon));
          },
          [&](const SingleGaussian& s) -> Complex {
            const double d = p - s.p0;
            return prefactor_ * std::exp(-d * d);
          },
      },
      kind_);
}

bool MomentumState::theta_supported() const {
  return std::holds_alternative<BrackenMelloy>(kind_) || std::holds_alternative<ComplexDamped>(kind_) ||
         std::holds_alternative<Exponential>(kind_);
}

MomentumSupport MomentumState::support() const {
  // Exponential tails are cut where the amplitude drops below ~e^-40.
  return std::visit(overloaded{
                        [](const BrackenMelloy& s) {
                          const double r = std::sqrt(s.epsilon);
                          return MomentumSupport{0.0, 90.0 * r, r};
                        },
                        [](const ComplexDamped&) { return MomentumSupport{0.0, 90.0, 1.0}; },
                        [](const Exponential&) { return MomentumSupport{0.0, 45.0, 1.0}; },
                        [](const GaussianSuperposition& s) {
                          const double r = std::sqrt(s.epsilon);
                          double lo = s.p0a, hi = s.p0a;
                          if (s.alpha > 0.0) {
                            lo = std::min(lo, s.p0b);
                            hi = std::max(hi, s.p0b);
                          }
                          return MomentumSupport{lo - 7.0 * r, hi + 7.0 * r, r};
                        },
                        [](const SingleGaussian& s) {
                          return MomentumSupport{s.p0 - 7.0, s.p0 + 7.0, 1.0};
                        },
                    },
                    kind_);
}

std::string MomentumState::describe() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const BrackenMelloy& s) {
                   out << "bracken_melloy(epsilon=" << shortest_decimal(s.epsilon) << ")";
                 },
                 [&](const ComplexDamped&) { out << "complex_damped"; },
                 [&](const Exponential&) { out << "exponential"; },
                 [&](const GaussianSuperposition& s) {
                   out << "gaussian_superposition(p0a=" << shortest_decimal(s.p0a)
                       << ", p0b=" << shortest_decimal(s.p0b) << ", alpha=" << shortest_decimal(s.alpha)
                       << ", theta=" << shortest_decimal(s.theta)
                       << ", epsilon=" << shortest_decimal(s.epsilon) << ")";
                 },
                 [&](const SingleGaussian& s) { out << "single_gaussian(p0=" << shortest_decimal(s.p0) << ")"; },
             },
             kind_);
  return out.str();
}

MomentumState bm_state(double epsilon) { return MomentumState(BrackenMelloy{epsilon}); }
MomentumState complex_damped_state() { return MomentumState(ComplexDamped{}); }
MomentumState exponential_state() { return MomentumState(Exponential{}); }
MomentumState gaussian_superposition(double p0a, double p0b, double alpha, double theta,
                                     double epsilon) {
  return MomentumState(GaussianSuperposition{p0a, p0b, alpha, theta, epsilon});
}
MomentumState single_gaussian(double p0) { return MomentumState(SingleGaussian{p0}); }

double pr_p_negative(const MomentumState& state) {
  if (state.theta_supported()) return 0.0;
  if (const auto* g = std::get_if<GaussianSuperposition>(&state.kind())) {
    const double n = gaussian_superposition_norm_factor(*g);
    const double d = g->p0a - g->p0b;
    const double se = std::sqrt(g->epsilon);
    const double interference = 2.0 * g->alpha * std::exp(-d * d / (2.0 * g->epsilon)) *
                                std::cos(g->theta) *
                                std::erfc((g->p0a + g->p0b) / (std::sqrt(2.0) * se));
    return 0.5 * n * n *
           (std::erfc(std::sqrt(2.0) * g->p0a / se) +
            g->alpha * g->alpha * std::erfc(std::sqrt(2.0) * g->p0b / se) + interference);
  }
  const auto& s = std::get<SingleGaussian>(state.kind());
  return 0.5 * std::erfc(std::sqrt(2.0) * s.p0);
}

double mixture_current_origin(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ContractViolation("mixture weight must lie in [0, 1]");
  return (1.0 - 71.0 * w / 35.0) / kPi;
}

DensityMatrixSpec::DensityMatrixSpec(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ContractViolation("density matrix needs at least one term");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(t.weight > 0.0 && t.weight <= 1.0))
      throw ContractViolation("density matrix weights must lie in (0, 1]");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ContractViolation("density matrix weights must sum to 1");
}

DensityMatrixSpec DensityMatrixSpec::pure(MomentumState state) {
  return DensityMatrixSpec({Term{1.0, std::move(state)}});
}

bool DensityMatrixSpec::theta_supported() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.state.theta_supported(); });
}

MomentumSupport DensityMatrixSpec::support() const {
  MomentumSupport s = terms_.front().state.support();
  for (const auto& t : terms_) {
    const MomentumSupport o = t.state.support();
    s.lower = std::min(s.lower, o.lower);
    s.upper = std::max(s.upper, o.upper);
    s.feature_scale = std::min(s.feature_scale, o.feature_scale);
  }
  return s;
}

Units Units::from_length(double mu, double mass, double hbar) {
  if (!(mu > 0.0) || !(mass > 0.0) || !(hbar > 0.0))
    throw ContractViolation("units: scales must be positive");
  return Units{mu, mu * mu * mass / hbar};
}

}  // namespace backflow
