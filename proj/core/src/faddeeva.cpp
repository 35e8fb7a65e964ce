// Faddeeva function after Poppe & Wijers (ACM TOMS 680): a power series near
// the origin, Gautschi's truncated Laplace continued fraction with Taylor
// correction in the intermediate region, and the plain continued fraction far
// out. Relative accuracy is ~1e-14 across the plane.

#include <cmath>
#include <sstream>

#include "backflow/error.hpp"
#include "backflow/numerics.hpp"

namespace backflow {

namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr double kMaxExp = 708.0;

std::string describe(Complex z) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i)";
  return s.str();
}

}  // namespace

Complex faddeeva(Complex z) {
  const double xi = z.real();
  const double yi = z.imag();
  if (!std::isfinite(xi) || !std::isfinite(yi)) throw DomainError("faddeeva of " + describe(z));

  const double xabs = std::abs(xi);
  const double yabs = std::abs(yi);
  const double xs = xabs / 6.3;
  const double ys = yabs / 4.4;
  double qrho = xs * xs + ys * ys;
  double xquad = xabs * xabs - yabs * yabs;
  const double yquad = 2.0 * xabs * yabs;

  double u = 0.0, v = 0.0;
  double u2 = 0.0, v2 = 0.0;
  const bool series = qrho < 0.085264;

  if (series) {
    // w(z) = exp(-z^2) (1 - erf(-iz)) with erf from its Taylor series.
    qrho = (1.0 - 0.85 * ys) * std::sqrt(qrho);
    const int n = static_cast<int>(std::lround(6.0 + 72.0 * qrho));
    int j = 2 * n + 1;
    double xsum = 1.0 / j;
    double ysum = 0.0;
    for (int i = n; i >= 1; --i) {
      j -= 2;
      const double xaux = (xsum * xquad - ysum * yquad) / i;
      ysum = (xsum * yquad + ysum * xquad) / i;
      xsum = xaux + 1.0 / j;
    }
    const double u1 = -kTwoOverSqrtPi * (xsum * yabs + ysum * xabs) + 1.0;
    const double v1 = kTwoOverSqrtPi * (xsum * xabs - ysum * yabs);
    const double daux = std::exp(-xquad);
    u2 = daux * std::cos(yquad);
    v2 = -daux * std::sin(yquad);
    u = u1 * u2 - v1 * v2;
    v = u1 * v2 + v1 * u2;
  } else {
    double h = 0.0;
    double h2 = 0.0;
    int kapn = 0;
    int nu = 0;
    if (qrho > 1.0) {
      qrho = std::sqrt(qrho);
      nu = static_cast<int>(3.0 + 1442.0 / (26.0 * qrho + 77.0));
    } else {
      qrho = (1.0 - ys) * std::sqrt(1.0 - qrho);
      h = 1.88 * qrho;
      h2 = 2.0 * h;
      kapn = static_cast<int>(std::lround(7.0 + 34.0 * qrho));
      nu = static_cast<int>(std::lround(16.0 + 26.0 * qrho));
    }
    const bool taylor = h > 0.0;
    double qlambda = taylor ? std::pow(h2, kapn) : 0.0;
    double rx = 0.0, ry = 0.0, sx = 0.0, sy = 0.0;
    for (int n = nu; n >= 0; --n) {
      const double np1 = n + 1.0;
      double tx = yabs + h + np1 * rx;
      const double ty = xabs - np1 * ry;
      const double c = 0.5 / (tx * tx + ty * ty);
      rx = c * tx;
      ry = c * ty;
      if (taylor && n <= kapn) {
        tx = qlambda + sx;
        sx = rx * tx - ry * sy;
        sy = ry * tx + rx * sy;
        qlambda /= h2;
      }
    }
    if (taylor) {
      u = kTwoOverSqrtPi * sx;
      v = kTwoOverSqrtPi * sy;
    } else {
      u = kTwoOverSqrtPi * rx;
      v = kTwoOverSqrtPi * ry;
    }
    if (yabs == 0.0) u = std::exp(-xabs * xabs);
  }

  if (yi < 0.0) {
    // w(z) = 2 exp(-z^2) - w(-z) below the real axis.
    if (series) {
      u2 *= 2.0;
      v2 *= 2.0;
    } else {
      xquad = -xquad;
      if (xquad > kMaxExp) throw RangeError("faddeeva overflows at " + describe(z));
      const double w1 = 2.0 * std::exp(xquad);
      u2 = w1 * std::cos(yquad);
      v2 = -w1 * std::sin(yquad);
    }
    u = u2 - u;
    v = v2 - v;
    if (xi > 0.0) v = -v;
  } else if (xi < 0.0) {
    v = -v;
  }
  return {u, v};
}

Complex erfc_complex_scaled(Complex z, double log_scale) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("erfc of " + describe(z));
  // For Re z >= 0, erfc(z) = exp(-z^2) w(iz) with iz in the upper half plane.
  const bool reflect = z.real() < 0.0;
  const Complex a = reflect ? -z : z;
  const Complex exponent = Complex(log_scale, 0.0) - a * a;
  if (exponent.real() > kMaxExp) throw RangeError("erfc overflows at " + describe(z));
  const Complex tail = std::exp(exponent) * faddeeva(Complex(-a.imag(), a.real()));
  if (!reflect) return tail;
  if (log_scale > kMaxExp) throw RangeError("erfc scale overflows at " + describe(z));
  return 2.0 * std::exp(log_scale) - tail;
}

Complex erfc_complex(Complex z) { return erfc_complex_scaled(z, 0.0); }

}  // namespace backflow
