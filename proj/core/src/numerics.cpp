#include "backflow/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "backflow/error.hpp"

namespace backflow {

std::string shortest_decimal(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void QuadratureSpec::validate() const {
  if (n_nodes < 2) throw ConfigError("quadrature: n_nodes must be >= 2");
  if (panels < 1) throw ConfigError("quadrature: panels must be >= 1");
  if (!std::isfinite(lower)) throw ConfigError("quadrature: lower bound must be finite");
  if (!(upper > lower)) throw ConfigError("quadrature: upper must exceed lower");
  if (const auto* mapped = std::get_if<MappedSemiInfiniteRule>(&rule)) {
    if (!(mapped->scale > 0.0) || !std::isfinite(mapped->scale))
      throw ConfigError("quadrature: mapped rule scale must be positive");
  } else if (!std::isfinite(upper)) {
    throw ConfigError("quadrature: Gauss-Legendre needs a finite upper bound");
  }
}

void QuadratureGrid::append(const QuadratureGrid& other) {
  nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

QuadratureGrid gauss_legendre_reference(int n) {
  if (n < 2) throw ConfigError("quadrature: n_nodes must be >= 2");
  QuadratureGrid grid;
  grid.nodes.resize(n);
  grid.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    grid.nodes[i] = -x;
    grid.nodes[n - 1 - i] = x;
    grid.weights[i] = w;
    grid.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) grid.nodes[n / 2] = 0.0;
  return grid;
}

void append_panel(QuadratureGrid& out, const QuadratureGrid& reference, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    out.nodes.push_back(mid + half * reference.nodes[i]);
    out.weights.push_back(half * reference.weights[i]);
  }
}

QuadratureGrid gauss_legendre(const QuadratureSpec& spec) {
  spec.validate();
  const QuadratureGrid ref = gauss_legendre_reference(spec.n_nodes);
  QuadratureGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(spec.n_nodes) * spec.panels);
  grid.weights.reserve(grid.nodes.capacity());

  if (const auto* mapped = std::get_if<MappedSemiInfiniteRule>(&spec.rule)) {
    // GL on t in (0,1), panels in t, then u = lower + s t/(1-t).
    QuadratureGrid t_grid;
    for (int p = 0; p < spec.panels; ++p)
      append_panel(t_grid, ref, static_cast<double>(p) / spec.panels,
                   static_cast<double>(p + 1) / spec.panels);
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const double t = t_grid.nodes[i];
      const double one_minus = 1.0 - t;
      grid.nodes.push_back(spec.lower + mapped->scale * t / one_minus);
      grid.weights.push_back(t_grid.weights[i] * mapped->scale / (one_minus * one_minus));
    }
    return grid;
  }

  const double width = (spec.upper - spec.lower) / spec.panels;
  for (int p = 0; p < spec.panels; ++p) {
    const double a = spec.lower + p * width;
    const double b = (p + 1 == spec.panels) ? spec.upper : a + width;
    append_panel(grid, ref, a, b);
  }
  return grid;
}

Complex integrate_2d(const std::function<Complex(double, double)>& f,
                     const QuadratureSpec& spec_p, const QuadratureSpec& spec_q) {
  const QuadratureGrid gp = gauss_legendre(spec_p);
  const QuadratureGrid gq = gauss_legendre(spec_q);
  Complex total = 0.0;
  for (std::size_t i = 0; i < gp.size(); ++i) {
    Complex row = 0.0;
    for (std::size_t j = 0; j < gq.size(); ++j) {
      const Complex v = f(gp.nodes[i], gq.nodes[j]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "integrand not finite at node (p=" << gp.nodes[i] << ", p'=" << gq.nodes[j] << ")";
        throw DomainError(msg.str());
      }
      row += gq.weights[j] * v;
    }
    total += gp.weights[i] * row;
  }
  return total;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (!(b > a)) return 0.0;
  // Seed with four panels so narrow features near an endpoint are not missed.
  double total = 0.0;
  constexpr int kSeed = 4;
  for (int k = 0; k < kSeed; ++k) {
    const double lo = a + (b - a) * k / kSeed;
    const double hi = a + (b - a) * (k + 1) / kSeed;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fmid = f(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_step(f, lo, flo, hi, fhi, mid, fmid, whole, abs_tol / kSeed, max_depth);
  }
  return total;
}

std::vector<double> cumulative_simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (y[0] + y[1]);
    return out;
  }
  for (std::size_t i = 2; i < n; i += 2)
    out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
  // Odd points take a half step from the even neighbour with a cubic stencil.
  for (std::size_t i = 1; i < n; i += 2) {
    if (n == 3)
      out[i] = out[i - 1] + h / 12.0 * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1]);
    else if (i + 2 < n)
      out[i] = out[i - 1] + h / 24.0 * (9.0 * y[i - 1] + 19.0 * y[i] - 5.0 * y[i + 1] + y[i + 2]);
    else if (i + 1 < n)
      out[i] = out[i + 1] - h / 24.0 * (9.0 * y[i + 1] + 19.0 * y[i] - 5.0 * y[i - 1] + y[i - 2]);
    else
      out[i] = out[i - 1] + h / 24.0 * (y[i - 3] - 5.0 * y[i - 2] + 19.0 * y[i - 1] + 9.0 * y[i]);
  }
  return out;
}

double DenseMatrix::norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double DenseMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  const double scale = norm();
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace backflow
