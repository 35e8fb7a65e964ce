#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "backflow/error.hpp"
#include "backflow/observables.hpp"

using namespace backflow;

namespace {

const double kBmJ00 = -36.0 / (35.0 * kPi);

DensityMatrixSpec pure(MomentumState s) { return DensityMatrixSpec::pure(std::move(s)); }

QuadratureGrid panels(double a, double b, double h, int order = 20) {
  const auto ref = gauss_legendre_reference(order);
  const int n = static_cast<int>(std::ceil((b - a) / h));
  QuadratureGrid g;
  for (int k = 0; k < n; ++k) append_panel(g, ref, a + (b - a) * k / n, a + (b - a) * (k + 1) / n);
  return g;
}

const GaussianSuperposition kSuperposition{14.0, 3.0, 1.9, kPi, 1.0};

}  // namespace

TEST(CurrentOrigin, BmInitialValue) {
  const auto bm = pure(bm_state(1.0));
  EXPECT_NEAR(current_origin(VonNeumann{}, bm, 0.0), kBmJ00, 1e-6);
  for (double li : {0.005, 0.02, 0.5}) EXPECT_NEAR(current_origin(Milburn{li}, bm, 0.0), kBmJ00, 1e-6);
  EXPECT_NEAR(DensityMatrixCurrent(VonNeumann{}, bm, 0.0)(0.0), kBmJ00, 1e-9);
}

TEST(CurrentOrigin, ExponentialInitialValue) {
  EXPECT_NEAR(current_origin(VonNeumann{}, pure(exponential_state()), 0.0), 1.0 / kPi, 1e-9);
}

TEST(CurrentOrigin, ComplexDampedStartsAtLambdaDependentValues) {
  // Moment integrals of the closed form, evaluated to 30 digits.
  const auto cd = pure(complex_damped_state());
  EXPECT_NEAR(current_origin(VonNeumann{}, cd, 0.0), -0.13048792618857063, 1e-9);
  EXPECT_NEAR(current_origin(Milburn{0.005}, cd, 0.0), -0.11005351694744047, 1e-9);
  EXPECT_NEAR(current_origin(Milburn{0.02}, cd, 0.0), -0.048750289224049985, 1e-9);
  EXPECT_NEAR(lindblad_p_current_origin(cd, 0.5, 0.0), -0.097865944641427971, 1e-9);
}

TEST(CurrentOrigin, MixtureMatchesClosedForm) {
  for (double w : {0.0, 0.3, 35.0 / 71.0, 0.9}) {
    std::vector<DensityMatrixSpec::Term> terms;
    if (w > 0.0) terms.push_back({w, bm_state(1.0)});
    terms.push_back({1.0 - w, exponential_state()});
    const DensityMatrixSpec mix(std::move(terms));
    EXPECT_NEAR(current_origin(VonNeumann{}, mix, 0.0), mixture_current_origin(w), 1e-8) << w;
  }
}

TEST(CurrentOrigin, MixtureIsLinearOnOneGrid) {
  const DensityMatrixSpec mix({{0.4, bm_state(1.0)}, {0.6, complex_damped_state()}});
  const DensityMatrixCurrent jm(Milburn{0.01}, mix, 1.0);
  const DensityMatrixCurrent j1(Milburn{0.01}, pure(bm_state(1.0)), 1.0);
  // Same support, so the single-state evaluators share the mixture's grid.
  const DensityMatrixCurrent j2(Milburn{0.01}, pure(complex_damped_state()), 1.0);
  ASSERT_EQ(jm.node_count(), j1.node_count());
  ASSERT_EQ(jm.node_count(), j2.node_count());
  for (double t : {0.0, 0.2, 0.9}) EXPECT_NEAR(jm(t), 0.4 * j1(t) + 0.6 * j2(t), 1e-14);
}

TEST(CurrentOrigin, FastAndBruteForceRoutesAgree) {
  const DensityMatrixSpec mix({{0.7, bm_state(1.0)}, {0.3, complex_damped_state()}});
  const EvolutionModel laws[] = {VonNeumann{}, Milburn{0.01}, LindbladF{LindbladFunction::Momentum, 0.5},
                                 LindbladF{LindbladFunction::MomentumSquared, 0.01}};
  for (const auto& law : laws) {
    const DensityMatrixCurrent fast(law, mix, 0.25, 1.0);
    EXPECT_NEAR(fast(0.25), current_origin(law, mix, 0.25), 1e-9) << describe(law);
    const QuadratureSpec q = default_momentum_quadrature(mix, 0.1, 1.0);
    EXPECT_NEAR(fast.current(-0.7, 0.1), current_at(law, mix, -0.7, 0.1, q), 1e-9) << describe(law);
  }
}

TEST(CurrentOrigin, LindbladPReductionsAndRefinement) {
  const auto bm = pure(bm_state(1.0));
  EXPECT_NEAR(lindblad_p_current_origin(bm, 0.0, 0.0), kBmJ00, 1e-6);
  // Real Phi: the kappa term integrates to zero at T = 0.
  EXPECT_NEAR(lindblad_p_current_origin(bm, 2.0, 0.0), current_origin(VonNeumann{}, bm, 0.0), 1e-13);
  const double t = 0.3;
  const LindbladF law{LindbladFunction::Momentum, 0.5};
  QuadratureSpec q = default_momentum_quadrature(bm, t);
  const double base = current_origin(law, bm, t, q);
  QuadratureSpec fine = q;
  fine.panels *= 2;
  QuadratureSpec coarse = q;
  coarse.panels = (q.panels + 1) / 2;
  EXPECT_NEAR(base, current_origin(law, bm, t, fine), 1e-6);
  EXPECT_NEAR(base, current_origin(law, bm, t, coarse), 1e-6);
  EXPECT_NEAR(base, lindblad_p_current_origin(bm, 0.5, t), 1e-9);
}

TEST(CurrentOrigin, ImaginaryResidueIsResolutionError) {
  const auto cd = pure(complex_damped_state());
  QuadratureSpec a;
  a.n_nodes = 20;
  a.lower = 0.0;
  a.upper = 90.0;
  a.panels = 45;
  QuadratureSpec b = a;
  b.n_nodes = 3;
  b.panels = 2;
  EXPECT_THROW(current_at(VonNeumann{}, cd, 0.0, 0.0, a, b), ResolutionError);
  EXPECT_THROW(current_origin(ScaledFree{1.0}, cd, 0.0), ContractViolation);
}

TEST(ScaledCurrent, BmInitialValueScalesWithSqrtEpsilon) {
  EXPECT_NEAR(scaled_current(bm_state(1.0), 1.0, 0.0, 0.0, 0.0), kBmJ00, 1e-9);
  EXPECT_NEAR(scaled_current(bm_state(0.25), 0.25, 0.0, 0.0, 0.0), 0.5 * kBmJ00, 1e-9);
  for (double eps : {1.0, 0.5, 0.1})
    EXPECT_NEAR(std::abs(scaled_current(bm_state(eps), eps, 0.0, 0.0, 0.0)),
                std::sqrt(eps) * 36.0 / (35.0 * kPi), 1e-9);
}

TEST(ScaledCurrent, MatchesVonNeumannAtUnitEpsilon) {
  const auto s = complex_damped_state();
  const ScaledCurrent sc(s, 1.0, 0.0, 1.0);
  const DensityMatrixCurrent dm(VonNeumann{}, pure(s), 1.0);
  for (double t : {0.0, 0.05, 0.5, 1.0}) EXPECT_NEAR(sc(t), dm(t), 1e-10) << t;
}

TEST(ScaledCurrent, CaldirolaKanaiIdentity) {
  const auto s = bm_state(1.0);
  const double gamma = 8.0, t = 0.5;
  const double tau = ck_tau(t, gamma);
  EXPECT_NEAR(scaled_current(s, 1.0, gamma, 0.0, t),
              std::exp(-2.0 * gamma * t) * scaled_current(s, 1.0, 0.0, 0.0, tau), 1e-12);
}

TEST(ProbNegativeClosed, InitialHalfAndClassicalMonotone) {
  for (double eps : {0.0, 0.1, 0.5, 1.0}) EXPECT_NEAR(prob_negative_halfspace_closed(kSuperposition, eps, 0.0), 0.5, 1e-12);
  double prev = 0.5;
  for (double t = 0.0; t <= 3.0; t += 0.01) {
    const double v = prob_negative_halfspace_closed(kSuperposition, 0.0, t);
    EXPECT_LE(v, prev + 1e-15) << t;
    prev = v;
  }
}

TEST(ProbNegativeClosed, MatchesDensityQuadrature) {
  struct Case {
    GaussianSuperposition g;
    double t;
  };
  const Case cases[] = {{kSuperposition, 0.1},
                        {kSuperposition, 0.0},
                        {{3.0, 1.0, 0.8, kPi / 3.0, 0.5}, 0.3},
                        {{3.0, 1.0, 0.8, kPi / 3.0, 0.5}, 1.0},
                        {{2.0, 0.5, 1.4, 2.0, 0.1}, 0.7}};
  for (const auto& c : cases) {
    const auto s = MomentumState(c.g);
    const WavefunctionEvaluator w(s, c.g.epsilon, c.t, 30.0);
    const auto grid = panels(-30.0, 0.0, 0.1);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * std::norm(w.psi(grid.nodes[i], c.t));
    EXPECT_NEAR(prob_negative_halfspace_closed(c.g, c.g.epsilon, c.t), sum, 1e-9) << s.describe();
  }
}

TEST(ProbNegativeClosed, Errors) {
  EXPECT_THROW(prob_negative_halfspace_closed(kSuperposition, 1.5, 0.0), ContractViolation);
  EXPECT_THROW(prob_negative_halfspace_closed(kSuperposition, 1.0, -1.0), ContractViolation);
  EXPECT_THROW(prob_negative_halfspace_closed({4.0, 4.0, 1.0, kPi, 1.0}, 1.0, 0.5), DegenerateStateError);
}

TEST(InitialProbability, GaussianAndBm) {
  const auto gs = initial_prob_negative(MomentumState(kSuperposition), 1.0);
  EXPECT_NEAR(gs.value, 0.5, 1e-10);
  EXPECT_LT(gs.tail, 1e-25);
  const auto bm = initial_prob_negative(bm_state(1.0), 1.0);
  EXPECT_GT(bm.tail, 0.0);
  EXPECT_LT(bm.tail, 1e-5);
  // Direct check on a longer window.
  const auto bm120 = initial_prob_negative(bm_state(1.0), 1.0, 120.0);
  EXPECT_NEAR(bm.value, bm120.value, 1e-8);
}

TEST(ProbNegativeNumeric, GaussianMatchesClosedForm) {
  const auto spec = pure(MomentumState(kSuperposition));
  const auto trace = prob_negative_halfspace_numeric(spec, ScaledFree{1.0}, 0.5, 1025);
  for (std::size_t i = 0; i < trace.t.size(); i += 16)
    EXPECT_NEAR(trace.pr[i], prob_negative_halfspace_closed(kSuperposition, 1.0, trace.t[i]), 1e-6) << trace.t[i];
}

TEST(ProbNegativeNumeric, BmCurrentRouteMatchesDensityRoute) {
  const auto s = bm_state(1.0);
  const double t = 3.0;
  const double pr_current = prob_negative_halfspace_numeric(pure(s), ScaledFree{1.0}, t);
  const ScaledCurrent sc(s, 1.0, 0.0, t, 60.0);
  const auto grid = panels(-60.0, 0.0, 0.2);
  double pr_density = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) pr_density += grid.weights[i] * sc.density(grid.nodes[i], t);
  pr_density += 60.0 * sc.density(-60.0, t) / 3.0;
  EXPECT_NEAR(pr_current, pr_density, 1e-4);
}

TEST(ProbNegativeNumeric, DecreasesWhereCurrentIsPositive) {
  const auto trace = prob_negative_halfspace_numeric(pure(exponential_state()), VonNeumann{}, 2.0, 257);
  for (std::size_t i = 1; i < trace.t.size(); ++i) {
    ASSERT_GT(trace.current[i], 0.0);
    EXPECT_LT(trace.pr[i], trace.pr[i - 1]);
  }
}

TEST(ProbNegativeNumeric, CoarseGridRejected) {
  EXPECT_THROW(prob_negative_halfspace_numeric(pure(MomentumState(kSuperposition)), ScaledFree{1.0}, 3.0, 9),
               ResolutionError);
  EXPECT_THROW(prob_negative_halfspace_numeric(pure(bm_state(1.0)), VonNeumann{}, 1.0, 3), ContractViolation);
}

TEST(Continuity, StripProbabilityMatchesCurrentForDensityLaws) {
  // Pr(-L < X < 0) for the superposition; nothing reaches X = -L in the window.
  const auto spec = pure(MomentumState(kSuperposition));
  const EvolutionModel laws[] = {VonNeumann{}, Milburn{0.01}, LindbladF{LindbladFunction::Momentum, 0.5},
                                 LindbladF{LindbladFunction::MomentumSquared, 0.0025}};
  for (const auto& law : laws) {
    const DensityMatrixCurrent j(law, spec, 0.25, 10.0);
    EXPECT_NEAR(j.strip_probability(10.0, 0.0), 0.5, 1e-9);
    const double h = 1e-4;
    for (double t : {0.01, 0.05, 0.12, 0.2}) {
      auto pr = [&](double s) { return j.strip_probability(10.0, s); };
      const double dpr = (pr(t - 2 * h) - 8.0 * pr(t - h) + 8.0 * pr(t + h) - pr(t + 2 * h)) / (12.0 * h);
      EXPECT_NEAR(dpr, -j(t), 1e-6) << describe(law) << " T=" << t;
    }
  }
}
