#pragma once

// Certified checks of the structure conditions for
//   div(a(u^2) phi(|grad u|^2) grad u) + lambda psi(u^2) u = 0
// on an n-manifold with Ric >= -K:
//
//   C1  delta_phi(t) >= l_phi > -1
//   C2  (delta_phi(t) + delta_a(s) + 1)^2 / (n-1) - 2 t delta_phi'(t)
//         - 2 s delta_a'(s) >= gamma > 0
//   C3  Theta := sup_{s, t not in I} B(s,t)^2 < 4 gamma / (n-1),
//       B = 2 (delta_phi + delta_a + 1)/(n-1) + delta_phi + delta_a - delta_psi
//
// where I is the set on which b B >= 0 with b = lambda psi / a.
//
// Every verdict is three-valued. "holds" is only returned from closed-form
// interval bounds; "fails" only from an explicit witness point (or a
// certified infinite degree); anything else is "unknown".

#include <optional>
#include <string>
#include <vector>

#include "quasieig/scalar_family.hpp"

namespace quasieig {

enum class Verdict { holds, fails, unknown };

std::string to_string(Verdict v);

/// Eigenproblem instance. K is the Ricci lower bound parameter (Ric >= -K).
class ProblemSpec {
 public:
  ProblemSpec(int n, double K, double lambda, ScalarFunc phi, ScalarFunc a, ScalarFunc psi);

  int n() const { return n_; }
  double K() const { return K_; }
  double lambda() const { return lambda_; }
  const ScalarFunc& phi() const { return phi_; }
  const ScalarFunc& a() const { return a_; }
  const ScalarFunc& psi() const { return psi_; }

  /// b(s) = lambda psi(s) / a(s).
  double b(double s) const;

  ProblemSpec with_lambda(double lambda) const;
  ProblemSpec with_K(double K) const;

 private:
  int n_;
  double K_;
  double lambda_;
  ScalarFunc phi_;
  ScalarFunc a_;
  ScalarFunc psi_;
};

enum class LambdaSign { nonneg, nonpos, zero };

struct PolyTerm {
  double a;
  double q;
};

/// Delta_p( sum_i a_i u^{q_i} ) + lambda u^r = 0.
struct PolyPLaplaceSpec {
  double p;
  std::vector<PolyTerm> terms;  // strictly increasing q
  double r;
  LambdaSign lambda_sign;
  int n;

  void validate() const;
};

/// Structure functions of the polynomial p-Laplace problem:
///   phi(t) = t^{(p-2)/2},  a(s) = (sum a_i q_i s^{(q_i-1)/2})^{p-1},
///   psi(s) = s^{(r-1)/2}.
ProblemSpec to_problem_spec(const PolyPLaplaceSpec& poly, double lambda, double K = 0.0);

/// Recognises a ProblemSpec of the polynomial p-Laplace shape (up to constant
/// factors, which do not change any degree). Returns nullopt otherwise.
std::optional<PolyPLaplaceSpec> match_poly(const ProblemSpec& spec);

enum class IClass { all, empty, mixed };

std::string to_string(IClass c);

struct C1Result {
  Verdict verdict;
  double l_phi;  // inf of delta_phi
  double d_phi;  // sup of delta_phi
  bool certified;
  std::vector<std::string> notes;
};

struct C2Result {
  Verdict verdict;
  double gamma;          // certified lower bound of the C2 expression (-inf if none)
  double gamma_witness;  // smallest sampled value: an upper bound of the true infimum
  bool certified;
  std::optional<double> gamma_poly;  // closed form of the polynomial operator, when matched
  std::vector<std::string> notes;
};

struct IResult {
  IClass cls;
  double bracket_lo;  // bounds of B(s,t) over all s, t
  double bracket_hi;
  bool certified;
  std::vector<std::string> notes;
};

struct C3Result {
  Verdict verdict;
  double Theta;          // certified upper bound of sup B^2 off I (0 when vacuous)
  double Theta_witness;  // largest sampled B^2 (lower bound of sup) when I is empty
  bool vacuous;
  IClass I;
  std::vector<std::string> notes;
};

struct DerivedConstants {
  double theta;
  double alpha;
};

struct Thm4Range {
  bool admissible;
  double r_threshold;    // closed-form threshold on r for the given sign
  double gamma_c2;       // C2 infimum bound for the operator
  double gamma_section;  // 4 gamma_c2 / (n-1), the bound entering the threshold
  bool I_all;            // whether the admissibility came from I = (0, inf)
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CrossCheck {
  bool performed = false;
  bool thm4_admissible = false;
  bool agrees = true;
  std::string detail;
};

struct AdmissibilityReport {
  C1Result c1;
  C2Result c2;
  IResult I;
  C3Result c3;
  Verdict finite_degree;  // phi and a have 2-order finite degree
  double theta;
  double alpha;
  Verdict overall;
  CrossCheck cross_check;
  std::vector<std::string> notes;
};

/// Value of the C2 expression at (s, t).
double c2_expression(const ProblemSpec& spec, double s, double t);

/// B(s, t).
double bracket(const ProblemSpec& spec, double s, double t);

C1Result check_c1(const ProblemSpec& spec);
C2Result check_c2(const ProblemSpec& spec);
IResult classify_I(const ProblemSpec& spec);
C3Result check_c3(const ProblemSpec& spec, const C2Result& c2);
DerivedConstants derived_constants(const ProblemSpec& spec, const C1Result& c1, const C2Result& c2,
                                   const C3Result& c3);
Thm4Range thm4_range(const PolyPLaplaceSpec& spec);
AdmissibilityReport full_report(const ProblemSpec& spec);

/// Key/value rendering of a report (one "key=value" per line).
std::string to_key_value(const ProblemSpec& spec, const AdmissibilityReport& report);

/// Human-readable rendering.
std::string to_text(const ProblemSpec& spec, const AdmissibilityReport& report);

}  // namespace quasieig
