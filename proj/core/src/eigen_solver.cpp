#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "backflow/error.hpp"
#include "backflow/numerics.hpp"

namespace backflow {

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;                   // off[i] couples i and i+1
  std::vector<std::vector<double>> reflectors;  // reflectors[k] acts on rows k+1..n-1
};

// Householder reduction A = Q T Q^T with Q = H_0 H_1 ... H_{n-3}.
Tridiagonal tridiagonalize(DenseMatrix a) {
  const std::size_t n = a.size();
  Tridiagonal t;
  t.diag.assign(n, 0.0);
  t.off.assign(n > 0 ? n - 1 : 0, 0.0);
  t.reflectors.resize(n > 2 ? n - 2 : 0);

  std::vector<double> v, p;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    v.assign(m, 0.0);
    double sigma = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = a(k + 1 + i, k);
      sigma += v[i] * v[i];
    }
    const double xnorm = std::sqrt(sigma);
    t.diag[k] = a(k, k);
    if (xnorm == 0.0) {
      t.off[k] = 0.0;
      continue;
    }
    const double alpha = v[0] > 0.0 ? -xnorm : xnorm;
    v[0] -= alpha;
    double vnorm = 0.0;
    for (double x : v) vnorm += x * x;
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) {
      t.off[k] = alpha;
      continue;
    }
    for (double& x : v) x /= vnorm;
    t.off[k] = alpha;

    // p = 2 B v on the trailing block, then w = p - (v.p) v.
    p.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = a.row(k + 1 + i);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += row[k + 1 + j] * v[j];
      p[i] = 2.0 * s;
    }
    double vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vp += v[i] * p[i];
    for (std::size_t i = 0; i < m; ++i) p[i] -= vp * v[i];
    for (std::size_t i = 0; i < m; ++i) {
      auto row = a.row(k + 1 + i);
      const double vi = v[i], wi = p[i];
      for (std::size_t j = 0; j < m; ++j) row[k + 1 + j] -= vi * p[j] + wi * v[j];
    }
    t.reflectors[k] = v;
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.off[n - 2] = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

// Number of eigenvalues strictly below x (Sturm sequence of the LDL^T pivots).
std::size_t count_below(const Tridiagonal& t, double x) {
  const std::size_t n = t.diag.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i > 0 ? t.off[i - 1] * t.off[i - 1] : 0.0;
    q = t.diag[i] - x - (i > 0 ? e2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

double largest_tridiagonal_eigenvalue(const Tridiagonal& t) {
  const std::size_t n = t.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[i - 1]);
    if (i + 1 < n) r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  const double span = std::max({std::abs(lo), std::abs(hi), 1e-300});
  lo -= 1e-12 * span;
  hi += 1e-12 * span;
  // Invariant: the largest eigenvalue lies in [lo, hi).
  for (int iter = 0; iter < 300; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(t, mid) == n)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * span) break;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift I) x = b by Gaussian elimination with partial pivoting.
std::vector<double> solve_shifted(const Tridiagonal& t, double shift, std::vector<double> b) {
  const std::size_t n = t.diag.size();
  const double tiny = 1e-300 + std::numeric_limits<double>::epsilon() *
                                   (std::abs(shift) + 1.0) * 1e-3;
  // Banded storage: row i holds u0 (diagonal), u1, u2 (fill-in) after pivoting.
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    du[i] = t.off[i];
    dl[i] = t.off[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
      dl[i] = 0.0;
    } else {
      // Swap rows i and i+1.
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      const double tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      du[i] = tmp;
      std::swap(b[i], b[i + 1]);
      b[i + 1] -= f * b[i];
    }
  }
  if (n > 0 && d[n - 1] == 0.0) d[n - 1] = tiny;
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    if (ii + 1 < n) s -= du[ii] * x[ii + 1];
    if (ii + 2 < n) s -= du2[ii] * x[ii + 2];
    x[ii] = s / d[ii];
  }
  return x;
}

void normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& v : x) v /= s;
}

double residual_norm(const DenseMatrix& m, const std::vector<double>& v, double lambda) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto row = m.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) s += row[j] * v[j];
    s -= lambda * v[i];
    r2 += s * s;
  }
  return std::sqrt(r2);
}

}  // namespace

Eigenpair symmetric_largest_eigenpair(const DenseMatrix& matrix, double tol) {
  const std::size_t n = matrix.size();
  if (n == 0) throw ContractViolation("eigenproblem on an empty matrix");
  if (matrix.asymmetry() > 1e-12) {
    std::ostringstream msg;
    msg << "matrix not symmetric (relative asymmetry " << matrix.asymmetry() << ")";
    throw ContractViolation(msg.str());
  }

  const Tridiagonal t = tridiagonalize(matrix);
  const double lambda = largest_tridiagonal_eigenvalue(t);
  const double scale = std::max(matrix.norm(), 1e-300);

  // Inverse iteration with a shift just above the eigenvalue.
  const double shift = lambda + 1e-13 * scale;
  std::vector<double> z(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) z[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  normalize(z);
  for (int iter = 0; iter < 4; ++iter) {
    z = solve_shifted(t, shift, z);
    normalize(z);
  }

  // Back-transform: v = H_0 (H_1 (... H_{n-3} z)).
  std::vector<double> v = z;
  for (std::size_t kk = t.reflectors.size(); kk-- > 0;) {
    const auto& h = t.reflectors[kk];
    if (h.empty()) continue;
    double dot = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) dot += h[i] * v[kk + 1 + i];
    for (std::size_t i = 0; i < h.size(); ++i) v[kk + 1 + i] -= 2.0 * dot * h[i];
  }
  normalize(v);
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  if (v[imax] < 0.0)
    for (double& x : v) x = -x;

  Eigenpair out;
  out.value = lambda;
  out.vector = std::move(v);
  out.residual = residual_norm(matrix, out.vector, lambda);
  if (!(out.residual <= tol * scale)) {
    std::ostringstream msg;
    msg << "largest eigenpair residual " << out.residual << " exceeds " << tol * scale;
    throw ConvergenceError(msg.str(), out.residual);
  }
  return out;
}

}  // namespace backflow
