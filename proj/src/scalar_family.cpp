#include "quasieig/scalar_family.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace quasieig {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Moments of the exponents under the weights c_i t^{k_i} / sum_j c_j t^{k_j}.
struct ExponentMoments {
  double mean;       // E[k]   = t B'/B
  double variance;   // E[(k - mean)^2]
  double falling2;   // E[k(k-1)] = t^2 B''/B
};

ExponentMoments moments(const MonomialSum& f, double t) {
  const double lt = std::log(t);
  double shift = -kInf;
  for (const auto& m : f.terms()) shift = std::max(shift, m.exponent * lt);

  double d = 0.0, n1 = 0.0, n2 = 0.0;
  for (const auto& m : f.terms()) {
    const double x = m.coeff * std::exp(m.exponent * lt - shift);
    d += x;
    n1 += x * m.exponent;
    n2 += x * m.exponent * (m.exponent - 1.0);
  }
  if (d == 0.0) throw DomainError("monomial sum vanishes at t = " + format_double(t));
  const double mean = n1 / d;
  double var = 0.0;
  for (const auto& m : f.terms()) {
    const double x = m.coeff * std::exp(m.exponent * lt - shift);
    var += x * (m.exponent - mean) * (m.exponent - mean);
  }
  return {mean, var / d, n2 / d};
}

DegreeBounds scaled(DegreeBounds b, double factor) {
  double lo = b.inf * factor;
  double hi = b.sup * factor;
  if (factor == 0.0) lo = hi = 0.0;
  if (lo > hi) std::swap(lo, hi);
  return {lo, hi, b.certified};
}

void require_positive_arg(double t) {
  if (!(t > 0.0)) throw DomainError("degree functions require t > 0, got " + format_double(t));
}

template <class Fn>
DegreeBounds sample(Fn&& fn, std::size_t points, double t_min, double t_max) {
  DegreeBounds b{kInf, -kInf, false};
  for (double t : log_grid(t_min, t_max, points)) {
    const double v = fn(t);
    if (std::isnan(v)) continue;
    b.inf = std::min(b.inf, v);
    b.sup = std::max(b.sup, v);
  }
  return b;
}

}  // namespace

MonomialSum::MonomialSum(std::vector<Monomial> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Monomial& x, const Monomial& y) { return x.exponent < y.exponent; });
  for (const auto& m : terms) {
    if (!std::isfinite(m.coeff) || !std::isfinite(m.exponent))
      throw std::invalid_argument("monomial terms must be finite");
    if (!terms_.empty() && terms_.back().exponent == m.exponent)
      terms_.back().coeff += m.coeff;
    else
      terms_.push_back(m);
  }
  std::erase_if(terms_, [](const Monomial& m) { return m.coeff == 0.0; });
  if (terms_.empty()) throw std::invalid_argument("monomial sum has no nonzero terms");
}

MonomialSum MonomialSum::power(double exponent, double coeff) {
  return MonomialSum({{coeff, exponent}});
}

bool MonomialSum::all_positive() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) { return m.coeff > 0.0; });
}

MonomialSum operator*(const MonomialSum& lhs, const MonomialSum& rhs) {
  std::vector<Monomial> out;
  out.reserve(lhs.size() * rhs.size());
  for (const auto& x : lhs.terms())
    for (const auto& y : rhs.terms()) out.push_back({x.coeff * y.coeff, x.exponent + y.exponent});
  return MonomialSum(std::move(out));
}

ScalarFunc::ScalarFunc(PowerOfMonomialSum f) : v_(std::move(f)) {
  if (!std::isfinite(std::get<PowerOfMonomialSum>(v_).power))
    throw std::invalid_argument("power must be finite");
}

bool ScalarFunc::certified_positive() const {
  return std::visit(overloaded{
                        [](const MonomialSum& m) { return m.all_positive(); },
                        [](const Exponential&) { return true; },
                        [](const PowerOfMonomialSum& p) { return p.base.all_positive(); },
                    },
                    v_);
}

bool ScalarFunc::defined_at_zero() const {
  return std::visit(overloaded{
                        [](const MonomialSum& m) { return m.min_exponent() >= 0.0; },
                        [](const Exponential&) { return true; },
                        [](const PowerOfMonomialSum& p) {
                          return p.base.min_exponent() >= 0.0 &&
                                 (p.power >= 0.0 || p.base.min_exponent() == 0.0);
                        },
                    },
                    v_);
}

namespace {

double eval_sum(const MonomialSum& f, double t) {
  if (t < 0.0) throw DomainError("evaluation requires t >= 0");
  if (t == 0.0 && f.min_exponent() < 0.0)
    throw DomainError("negative exponent is singular at t = 0");
  double s = 0.0;
  for (const auto& m : f.terms()) s += m.coeff * std::pow(t, m.exponent);
  return s;
}

double log_sum(const MonomialSum& f, double t) {
  if (!f.all_positive()) {
    const double v = eval_sum(f, t);
    if (!(v > 0.0)) throw DomainError("log of non-positive value");
    return std::log(v);
  }
  if (t == 0.0) return std::log(eval_sum(f, t));
  const double lt = std::log(t);
  double shift = -kInf;
  for (const auto& m : f.terms()) shift = std::max(shift, std::log(m.coeff) + m.exponent * lt);
  double s = 0.0;
  for (const auto& m : f.terms()) s += std::exp(std::log(m.coeff) + m.exponent * lt - shift);
  return shift + std::log(s);
}

}  // namespace

double eval(const ScalarFunc& f, double t) {
  if (t < 0.0 || std::isnan(t)) throw DomainError("evaluation requires t >= 0");
  return std::visit(overloaded{
                        [&](const MonomialSum& m) { return eval_sum(m, t); },
                        [&](const Exponential& e) { return std::exp(e.rate * t); },
                        [&](const PowerOfMonomialSum& p) {
                          const double b = eval_sum(p.base, t);
                          if (b < 0.0) throw DomainError("negative base raised to real power");
                          if (b == 0.0 && p.power < 0.0) throw DomainError("zero base raised to negative power");
                          return std::pow(b, p.power);
                        },
                    },
                    f.variant());
}

double log_eval(const ScalarFunc& f, double t) {
  if (t < 0.0 || std::isnan(t)) throw DomainError("evaluation requires t >= 0");
  return std::visit(overloaded{
                        [&](const MonomialSum& m) { return log_sum(m, t); },
                        [&](const Exponential& e) { return e.rate * t; },
                        [&](const PowerOfMonomialSum& p) { return p.power * log_sum(p.base, t); },
                    },
                    f.variant());
}

double degree(const ScalarFunc& f, double t) {
  require_positive_arg(t);
  return std::visit(overloaded{
                        [&](const MonomialSum& m) { return 2.0 * moments(m, t).mean; },
                        [&](const Exponential& e) { return 2.0 * e.rate * t; },
                        [&](const PowerOfMonomialSum& p) { return p.power * 2.0 * moments(p.base, t).mean; },
                    },
                    f.variant());
}

double kth_degree(const ScalarFunc& f, int k, double t) {
  if (k != 1 && k != 2) throw std::invalid_argument("k-th degree supported only for k in {1, 2}");
  if (k == 1) return degree(f, t);
  require_positive_arg(t);
  return std::visit(overloaded{
                        [&](const MonomialSum& m) { return 2.0 * moments(m, t).falling2; },
                        [&](const Exponential& e) { return 2.0 * e.rate * e.rate * t * t; },
                        [&](const PowerOfMonomialSum& p) {
                          const auto mo = moments(p.base, t);
                          const double e = p.power;
                          return 2.0 * (e * (e - 1.0) * mo.mean * mo.mean + e * mo.falling2);
                        },
                    },
                    f.variant());
}

double degree_slope(const ScalarFunc& f, double t) {
  require_positive_arg(t);
  // t d/dt (2 E[k]) = 2 Var[k] under the exponent weights.
  return std::visit(overloaded{
                        [&](const MonomialSum& m) { return 2.0 * moments(m, t).variance; },
                        [&](const Exponential& e) { return 2.0 * e.rate * t; },
                        [&](const PowerOfMonomialSum& p) { return p.power * 2.0 * moments(p.base, t).variance; },
                    },
                    f.variant());
}

DegreeLimit degree_limit_at_zero(const ScalarFunc& f) {
  return std::visit(overloaded{
                        [](const MonomialSum& m) { return DegreeLimit{2.0 * m.min_exponent(), 0.0}; },
                        [](const Exponential&) { return DegreeLimit{0.0, 0.0}; },
                        [](const PowerOfMonomialSum& p) {
                          return DegreeLimit{p.power * 2.0 * p.base.min_exponent(), 0.0};
                        },
                    },
                    f.variant());
}

DegreeLimit degree_limit_at_infinity(const ScalarFunc& f) {
  return std::visit(overloaded{
                        [](const MonomialSum& m) { return DegreeLimit{2.0 * m.max_exponent(), 0.0}; },
                        [](const Exponential& e) {
                          if (e.rate == 0.0) return DegreeLimit{0.0, 0.0};
                          const double v = e.rate > 0.0 ? kInf : -kInf;
                          return DegreeLimit{v, v};
                        },
                        [](const PowerOfMonomialSum& p) {
                          return DegreeLimit{p.power * 2.0 * p.base.max_exponent(), 0.0};
                        },
                    },
                    f.variant());
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t points) {
  std::vector<double> out;
  if (points == 0) return out;
  if (points == 1) return {t_min};
  out.reserve(points);
  const double a = std::log10(t_min), b = std::log10(t_max);
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1)));
  return out;
}

DegreeBounds sampled_bounds(const ScalarFunc& f, int k, std::size_t points, double t_min, double t_max) {
  return sample([&](double t) { return kth_degree(f, k, t); }, points, t_min, t_max);
}

DegreeBounds degree_bounds(const ScalarFunc& f, int k) {
  if (k != 1 && k != 2) throw std::invalid_argument("degree bounds supported only for k in {1, 2}");

  // Both orders are convex combinations over the exponents (k = 1: E[k],
  // k = 2: E[k(k-1)]) once all coefficients are positive.
  auto sum_bounds = [k](const MonomialSum& m) -> DegreeBounds {
    if (k == 1) return {2.0 * m.min_exponent(), 2.0 * m.max_exponent(), true};
    double lo = kInf, hi = -kInf;
    for (const auto& t : m.terms()) {
      const double v = t.exponent * (t.exponent - 1.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {2.0 * lo, 2.0 * hi, true};
  };

  return std::visit(
      overloaded{
          [&](const MonomialSum& m) -> DegreeBounds {
            if (!m.all_positive()) return sampled_bounds(f, k);
            return sum_bounds(m);
          },
          [&](const Exponential& e) -> DegreeBounds {
            if (e.rate == 0.0) return {0.0, 0.0, true};
            if (k == 2) return {0.0, kInf, true};
            return e.rate > 0.0 ? DegreeBounds{0.0, kInf, true} : DegreeBounds{-kInf, 0.0, true};
          },
          [&](const PowerOfMonomialSum& p) -> DegreeBounds {
            if (!p.base.all_positive()) return sampled_bounds(f, k);
            if (k == 1) return scaled(sum_bounds(p.base), p.power);
            // 2 [ e(e-1) E[k]^2 + e E[k(k-1)] ] with E[k] in [k_1, k_m].
            const double e = p.power;
            const double k1 = p.base.min_exponent(), km = p.base.max_exponent();
            double sq_lo = std::min(k1 * k1, km * km);
            const double sq_hi = std::max(k1 * k1, km * km);
            if (k1 <= 0.0 && km >= 0.0) sq_lo = 0.0;
            const auto first = scaled({sq_lo, sq_hi, true}, e * (e - 1.0));
            const auto fall = sum_bounds(p.base);
            const auto second = scaled({fall.inf / 2.0, fall.sup / 2.0, true}, e);
            return {2.0 * (first.inf + second.inf), 2.0 * (first.sup + second.sup), true};
          },
      },
      f.variant());
}

DegreeBounds degree_slope_bounds(const ScalarFunc& f) {
  auto sampled = [&] { return sample([&](double t) { return degree_slope(f, t); }, 400, 1e-8, 1e8); };
  return std::visit(overloaded{
                        [&](const MonomialSum& m) -> DegreeBounds {
                          if (!m.all_positive()) return sampled();
                          const double w = m.max_exponent() - m.min_exponent();
                          return {0.0, w * w, true};
                        },
                        [&](const Exponential& e) -> DegreeBounds {
                          if (e.rate == 0.0) return {0.0, 0.0, true};
                          return e.rate > 0.0 ? DegreeBounds{0.0, kInf, true}
                                              : DegreeBounds{-kInf, 0.0, true};
                        },
                        [&](const PowerOfMonomialSum& p) -> DegreeBounds {
                          if (!p.base.all_positive()) return sampled();
                          const double w = p.base.max_exponent() - p.base.min_exponent();
                          return scaled({0.0, w * w, true}, p.power);
                        },
                    },
                    f.variant());
}

double degree_derivative_bound(const ScalarFunc& f) {
  return std::visit(
      overloaded{
          [](const MonomialSum& m) {
            if (!m.all_positive())
              throw std::invalid_argument("derivative bound needs positive coefficients");
            const double w = m.max_exponent() - m.min_exponent();
            return w * w;
          },
          [](const Exponential&) -> double {
            throw std::invalid_argument("derivative bound unsupported for exponentials");
          },
          [](const PowerOfMonomialSum& p) {
            if (!p.base.all_positive() || p.power < 0.0)
              throw std::invalid_argument("derivative bound needs a positive base and power >= 0");
            const double w = p.base.max_exponent() - p.base.min_exponent();
            return p.power * w * w;
          },
      },
      f.variant());
}

}  // namespace quasieig
