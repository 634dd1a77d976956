#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double bisect(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) a = m, fa = fm;
    else b = m;
  }
  return 0.5 * (a + b);
}

// J0 by its power series; fine for |x| < 10.
inline double bessel_j0(double x) {
  double term = 1.0, sum = 1.0;
  const double y = x * x / 4.0;
  for (int k = 1; k < 80; ++k) {
    term *= -y / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

inline double j0_first_zero_squared() {
  const double z = bisect(bessel_j0, 2.0, 3.0);
  return z * z;
}

// Radius where sinh(r)/r reaches `level`.
inline double sinh_over_r_crossing(double level) {
  return bisect([&](double r) { return std::sinh(r) / r - level; }, 1.0, 60.0);
}

// int_r^inf sinh(s)^{1-n} ds: closed forms for n = 2, 3, otherwise
// Gauss-Kronrod on [r, r + 60] plus the exponential tail.
inline double hyperbolic_harmonic(int n, double r) {
  const double e = std::exp(-r);
  if (n == 2) return std::log1p(e) - std::log1p(-e);  // -log tanh(r/2)
  if (n == 3) return 2.0 * e * e / (1.0 - e * e);     // coth(r) - 1
  auto f = [&](double s) { return std::pow(std::sinh(s), 1 - n); };
  double total = 0.0, a = r;
  for (int i = 0; i < 60; ++i, a += 1.0)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, a + 1.0, 15, 1e-15);
  const double tail = std::pow(2.0, n - 1) * std::exp(-(n - 1.0) * a) / (n - 1.0);
  return total + tail;
}

// Degree calculus of f(t) = sum c_i t^{k_i} from the closed-form derivatives.
struct Poly {
  std::vector<double> c, k;
  double f(double t) const {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(t, k[i]);
    return s;
  }
  double d1(double t) const {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * k[i] * std::pow(t, k[i] - 1);
    return s;
  }
  double d2(double t) const {
    double s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * k[i] * (k[i] - 1) * std::pow(t, k[i] - 2);
    return s;
  }
  double degree(double t) const { return 2 * t * d1(t) / f(t); }
  double degree2(double t) const { return 2 * t * t * d2(t) / f(t); }
  // t * d/dt (2 t f'/f)
  double slope(double t) const {
    const double F = f(t), D1 = d1(t), D2 = d2(t);
    return 2 * t * (D1 + t * D2) / F - 2 * t * t * D1 * D1 / (F * F);
  }
};

}  // namespace oracle
