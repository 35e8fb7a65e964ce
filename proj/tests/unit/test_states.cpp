#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "backflow/error.hpp"
#include "backflow/states.hpp"

using namespace backflow;

namespace {

// Independent norm: adaptive Simpson on [lower, upper] of |Phi|^2.
double simpson_norm(const MomentumState& s, double lower, double upper) {
  return adaptive_simpson([&](double p) { return std::norm(s(p)); }, lower, upper, 1e-13);
}

}  // namespace

TEST(BmState, ValuesAndNorm) {
  const auto s = bm_state(1.0);
  EXPECT_EQ(s(0.0), Complex(0.0));
  EXPECT_NEAR(s(1.0).real(), 0.811726369151840857, 1e-15);
  EXPECT_NEAR(s.norm(), 1.0, 1e-9);
  EXPECT_NEAR(simpson_norm(s, 0.0, 100.0), 1.0, 1e-9);
  EXPECT_TRUE(s.theta_supported());
  EXPECT_EQ(s(-0.3), Complex(0.0));
}

TEST(BmState, ScaledFamilyIsNormalised) {
  for (double eps : {1.0, 0.5, 0.25, 0.1, 0.01}) {
    const auto s = bm_state(eps);
    EXPECT_NEAR(s.norm(), 1.0, 1e-9) << eps;
    // Phi_eps(P) = eps^(-1/4) Phi_1(P / sqrt(eps)).
    EXPECT_NEAR(s(0.7).real(), std::pow(eps, -0.25) * bm_state(1.0)(0.7 / std::sqrt(eps)).real(), 1e-13);
  }
}

TEST(BmState, ClassicalPointRejected) {
  EXPECT_THROW(bm_state(0.0), DegenerateStateError);
  EXPECT_THROW(bm_state(-0.1), DegenerateStateError);
  EXPECT_THROW(bm_state(1.5), ContractViolation);
  EXPECT_THROW(bm_state(NAN), ContractViolation);
}

TEST(ComplexDamped, NormAndPhase) {
  const auto s = complex_damped_state();
  EXPECT_EQ(s(0.0), Complex(0.0));
  EXPECT_NEAR(s.norm(), 1.0, 1e-8);
  EXPECT_NEAR(simpson_norm(s, 0.0, 100.0), 1.0, 1e-8);
  EXPECT_NE(s(1.0).imag(), 0.0);
}

TEST(Exponential, Basics) {
  const auto s = exponential_state();
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  EXPECT_NEAR(s(1e-300).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(pr_p_negative(s), 0.0);
  EXPECT_EQ(s(-1.0), Complex(0.0));
}

TEST(GaussianSuperposition, AlphaZeroIsSingleGaussian) {
  GaussianSuperposition g{5.0, 2.0, 0.0, 1.0, 1.0};
  EXPECT_EQ(gaussian_superposition_norm_factor(g), 1.0);
  const auto s = MomentumState(g);
  const auto ref = single_gaussian(5.0);
  for (double p : {3.0, 5.0, 6.5}) EXPECT_NEAR(std::abs(s(p) - ref(p)), 0.0, 1e-15);
}

TEST(GaussianSuperposition, StandardStateNorm) {
  const auto s = gaussian_superposition(14, 3, 1.9, kPi, 1.0);
  EXPECT_NEAR(s.norm(), 1.0, 1e-10);
  EXPECT_NEAR(simpson_norm(s, -10.0, 30.0), 1.0, 1e-10);
}

TEST(GaussianSuperposition, CompleteCancellationIsDegenerate) {
  EXPECT_THROW(gaussian_superposition(4, 4, 1.0, kPi, 1.0), DegenerateStateError);
  EXPECT_THROW(gaussian_superposition(4, 3, -1.0, 0.0, 1.0), ContractViolation);
  EXPECT_THROW(gaussian_superposition(4, 3, 1.0, 0.0, 0.0), DegenerateStateError);
}

TEST(GaussianSuperposition, RandomDrawsMatchQuadrature) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> p0(1.0, 20.0), alpha(0.0, 3.0), theta(0.0, 2.0 * kPi),
      eps(0.05, 1.0);
  for (int k = 0; k < 20; ++k) {
    const GaussianSuperposition g{p0(rng), p0(rng), alpha(rng), theta(rng), eps(rng)};
    const auto s = MomentumState(g);
    const double lo = std::min(g.p0a, g.p0b) - 10.0, hi = std::max(g.p0a, g.p0b) + 10.0;
    EXPECT_NEAR(simpson_norm(s, lo, hi), 1.0, 1e-9) << s.describe();
  }
}

TEST(PrPNegative, ClosedFormAgainstQuadrature) {
  EXPECT_EQ(pr_p_negative(bm_state(1.0)), 0.0);
  const auto standard = gaussian_superposition(14, 3, 1.9, kPi, 1.0);
  const double v = pr_p_negative(standard);
  EXPECT_GT(v, 1e-11);
  EXPECT_LT(v, 1e-9);
  // A state with visible negative content.
  const auto s = gaussian_superposition(0.8, 0.3, 0.7, 2.0, 0.6);
  const double quad = adaptive_simpson([&](double p) { return std::norm(s(p)); }, -10.0, 0.0, 1e-14);
  EXPECT_NEAR(pr_p_negative(s), quad, 1e-12);
  const auto one = single_gaussian(0.4);
  EXPECT_NEAR(pr_p_negative(one),
              adaptive_simpson([&](double p) { return std::norm(one(p)); }, -10.0, 0.0, 1e-14), 1e-12);
}

TEST(PrPNegative, VanishesTowardClassicalLimit) {
  double previous = 1.0;
  for (double eps : {1.0, 0.1, 0.01, 0.001}) {
    const double v = pr_p_negative(gaussian_superposition(2.0, 1.0, 1.0, 0.5, eps));
    EXPECT_LT(v, previous);
    previous = v;
  }
  EXPECT_LT(previous, 1e-100);
}

TEST(Mixture, CurrentOriginThreshold) {
  EXPECT_NEAR(mixture_current_origin(0.0), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(mixture_current_origin(35.0 / 71.0), 0.0, 1e-15);
  EXPECT_NEAR(mixture_current_origin(1.0), -36.0 / (35.0 * kPi), 1e-15);
  EXPECT_THROW(mixture_current_origin(1.1), ContractViolation);
  EXPECT_THROW(mixture_current_origin(-0.1), ContractViolation);
  // Affine in w.
  const double a = mixture_current_origin(0.2), b = mixture_current_origin(0.6);
  EXPECT_NEAR(mixture_current_origin(0.4), 0.5 * (a + b), 1e-15);
}

TEST(DensityMatrixSpec, Validation) {
  EXPECT_THROW(DensityMatrixSpec({}), ContractViolation);
  EXPECT_THROW(DensityMatrixSpec({{0.5, bm_state(1)}, {0.4, exponential_state()}}), ContractViolation);
  EXPECT_THROW(DensityMatrixSpec({{0.0, bm_state(1)}, {1.0, exponential_state()}}), ContractViolation);
  const DensityMatrixSpec mix({{0.3, bm_state(1)}, {0.7, exponential_state()}});
  EXPECT_TRUE(mix.theta_supported());
  EXPECT_EQ(mix.terms().size(), 2u);
  const DensityMatrixSpec g = DensityMatrixSpec::pure(single_gaussian(1.0));
  EXPECT_FALSE(g.theta_supported());
}

TEST(Units, TimeScaleFromLength) {
  const Units u = Units::from_length(2.0, 3.0, 0.5);
  EXPECT_DOUBLE_EQ(u.nu, 24.0);
  EXPECT_THROW(Units::from_length(0.0, 1.0, 1.0), ContractViolation);
}
