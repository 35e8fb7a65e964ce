#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace backflow {

/// Shortest decimal form that reads back to the same double.
std::string shortest_decimal(double v);

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Quadrature

struct GaussLegendreRule {};

/// Gauss-Legendre on t in (0,1) pushed through u = lower + scale*t/(1-t),
/// covering [lower, inf). The spec's upper bound is ignored by this rule.
struct MappedSemiInfiniteRule {
  double scale = 1.0;
};

using QuadratureRule = std::variant<GaussLegendreRule, MappedSemiInfiniteRule>;

/// A tensor-free 1D rule. With panels > 1 the interval is split into equal
/// sub-panels, each carrying an n_nodes Gauss-Legendre rule.
struct QuadratureSpec {
  int n_nodes = 64;
  double lower = 0.0;
  double upper = 1.0;
  QuadratureRule rule = GaussLegendreRule{};
  int panels = 1;

  /// Throws ConfigError when the invariants fail.
  void validate() const;
};

struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  void append(const QuadratureGrid& other);
};

/// Nodes ascending, weights positive. Nodes and weights on [-1, 1] come from
/// Newton iteration on the three-term recurrence.
QuadratureGrid gauss_legendre(const QuadratureSpec& spec);

/// Reference n-point rule on [-1, 1].
QuadratureGrid gauss_legendre_reference(int n);

/// Maps a reference rule onto [a, b] and appends it to out.
void append_panel(QuadratureGrid& out, const QuadratureGrid& reference, double a, double b);

/// Weighted sum of f over the grid; the result type follows f.
template <class F>
auto integrate(F&& f, const QuadratureGrid& grid) {
  decltype(f(0.0)) sum{};
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * f(grid.nodes[i]);
  return sum;
}

/// Tensor-product rule over spec_p x spec_q. Throws DomainError naming the
/// first node at which f is not finite.
Complex integrate_2d(const std::function<Complex(double, double)>& f,
                     const QuadratureSpec& spec_p, const QuadratureSpec& spec_q);

/// Adaptive Simpson with absolute tolerance; Richardson-corrected panels.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 48);

/// Running integral of uniformly spaced samples (spacing h). Simpson on each
/// pair of intervals; odd positions use the cubic half-step correction.
/// result[i] approximates the integral from sample 0 to sample i.
std::vector<double> cumulative_simpson(std::span<const double> samples, double h);

// ---------------------------------------------------------------------------
// Special functions

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz), whole complex plane.
/// Throws RangeError when z lies deep in the lower half plane where the
/// result overflows.
Complex faddeeva(Complex z);

/// Complementary error function of complex argument.
Complex erfc_complex(Complex z);

/// exp(log_scale) * erfc(z), with the exponential folded into the
/// asymptotic factor so large |Im z| does not overflow when log_scale
/// compensates for it.
Complex erfc_complex_scaled(Complex z, double log_scale);

// ---------------------------------------------------------------------------
// Dense symmetric eigenproblem

/// Row-major dense matrix, square.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  /// Frobenius norm.
  double norm() const;
  /// Largest |A_ij - A_ji| relative to the Frobenius norm.
  double asymmetry() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  ///< unit 2-norm, largest-magnitude entry positive
  double residual = 0.0;       ///< ||M v - value v||
};

/// Largest algebraic eigenvalue of a real symmetric matrix: Householder
/// tridiagonalisation, Sturm-sequence bisection, then inverse iteration on the
/// tridiagonal form and back-transformation.
/// Throws ContractViolation for asymmetric input and ConvergenceError when the
/// residual bound ||Mv - lv|| <= tol*||M|| is not met.
Eigenpair symmetric_largest_eigenpair(const DenseMatrix& matrix, double tol = 1e-10);

}  // namespace backflow
