#pragma once

// Closed family of positive scalar functions used for the structure
// functions phi, a and psi, together with the degree calculus
//   delta_f(t)     = 2 t f'(t) / f(t)
//   delta_f^(2)(t) = 2 t^2 f''(t) / f(t)
// evaluated in closed form.

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace quasieig {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One term c * t^k.
struct Monomial {
  double coeff;
  double exponent;

  bool operator==(const Monomial&) const = default;
};

/// t -> sum_i c_i t^{k_i}. Terms are kept sorted by strictly increasing
/// exponent; equal exponents are merged and zero coefficients dropped on
/// construction.
class MonomialSum {
 public:
  explicit MonomialSum(std::vector<Monomial> terms);

  /// Single term c * t^k.
  static MonomialSum power(double exponent, double coeff = 1.0);

  std::span<const Monomial> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double min_exponent() const { return terms_.front().exponent; }
  double max_exponent() const { return terms_.back().exponent; }
  bool all_positive() const;

  friend MonomialSum operator*(const MonomialSum& lhs, const MonomialSum& rhs);
  friend bool operator==(const MonomialSum&, const MonomialSum&) = default;

 private:
  std::vector<Monomial> terms_;
};

/// t -> exp(rate * t).
struct Exponential {
  double rate;
  friend bool operator==(const Exponential&, const Exponential&) = default;
};

/// t -> (base(t))^power.
struct PowerOfMonomialSum {
  MonomialSum base;
  double power;
  friend bool operator==(const PowerOfMonomialSum&, const PowerOfMonomialSum&) = default;
};

class ScalarFunc {
 public:
  using Variant = std::variant<MonomialSum, Exponential, PowerOfMonomialSum>;

  ScalarFunc(MonomialSum f) : v_(std::move(f)) {}
  ScalarFunc(Exponential f) : v_(f) {}
  ScalarFunc(PowerOfMonomialSum f);

  const Variant& variant() const { return v_; }

  /// Positivity on (0, inf) as certified by the family rules: monomial sums
  /// with all coefficients positive, powers of such sums, exponentials.
  bool certified_positive() const;

  /// True when every term exponent is >= 0, i.e. the function is defined at 0.
  bool defined_at_zero() const;

  friend bool operator==(const ScalarFunc&, const ScalarFunc&) = default;

 private:
  Variant v_;
};

/// Thrown when a function is evaluated outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inclusive bounds of a degree function over t in (0, inf). `inf`/`sup` may
/// be infinite. `certified` is set only by closed-form interval rules.
struct DegreeBounds {
  double inf;
  double sup;
  bool certified;

  bool finite() const { return inf > -kInf && sup < kInf; }
};

double eval(const ScalarFunc& f, double t);

/// log f(t), computed without overflow for large arguments. Requires f > 0.
double log_eval(const ScalarFunc& f, double t);

/// 2 t f'(t) / f(t).
double degree(const ScalarFunc& f, double t);

/// 2 t^k f^(k)(t) / f(t) for k in {1, 2}.
double kth_degree(const ScalarFunc& f, int k, double t);

/// t * d/dt degree(f, t), the quantity entering the ellipticity condition.
double degree_slope(const ScalarFunc& f, double t);

/// Degree and slope in the limits t -> 0+ and t -> inf.
struct DegreeLimit {
  double degree;
  double slope;
};
DegreeLimit degree_limit_at_zero(const ScalarFunc& f);
DegreeLimit degree_limit_at_infinity(const ScalarFunc& f);

/// Global bounds of the k-th degree function (k in {1, 2}).
DegreeBounds degree_bounds(const ScalarFunc& f, int k);

/// Global bounds of degree_slope(f, .).
DegreeBounds degree_slope_bounds(const ScalarFunc& f);

/// Certified upper bound on sup_t t * delta_f'(t) for monomial sums with
/// positive coefficients (and their positive powers). For a sum with
/// exponents k_1 < ... < k_m this is (k_m - k_1)^2.
double degree_derivative_bound(const ScalarFunc& f);

/// Bounds taken from a log-spaced grid; never certified.
DegreeBounds sampled_bounds(const ScalarFunc& f, int k, std::size_t points = 400,
                            double t_min = 1e-8, double t_max = 1e8);

/// Log-spaced sample points shared by the sampled bounds and witness searches.
std::vector<double> log_grid(double t_min, double t_max, std::size_t points);

// Text form: pow(t, 0.5), msum(1*t^0.5 + 2*t^1), exp(1*t), msum(...)^2

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

ScalarFunc parse_scalar_func(std::string_view text);
std::string to_string(const ScalarFunc& f);

/// Shortest round-trippable decimal representation.
std::string format_double(double x);

}  // namespace quasieig
