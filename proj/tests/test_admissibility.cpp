#include <doctest.h>

#include <cmath>

#include "quasieig/admissibility.hpp"

using namespace quasieig;

namespace {

ScalarFunc pw(double k) { return ScalarFunc(MonomialSum::power(k)); }

ProblemSpec single_power(double p, double q, double r, double lambda, int n = 3) {
  const LambdaSign sign = lambda > 0 ? LambdaSign::nonneg : lambda < 0 ? LambdaSign::nonpos : LambdaSign::zero;
  return to_problem_spec({p, {{1.0, q}}, r, sign, n}, lambda);
}

}  // namespace

TEST_CASE("the Laplacian eigenproblem is admissible") {
  const ProblemSpec spec(3, 0.0, 1.0, pw(0), pw(0), pw(0));
  const auto rep = full_report(spec);
  CHECK(rep.c1.verdict == Verdict::holds);
  CHECK(rep.c2.verdict == Verdict::holds);
  CHECK(rep.c2.gamma == doctest::Approx(0.5));
  CHECK(rep.I.cls == IClass::all);
  CHECK(rep.c3.vacuous);
  CHECK(rep.overall == Verdict::holds);
  CHECK(rep.theta == doctest::Approx(0.5));
  CHECK(rep.alpha == doctest::Approx(0.0));
  CHECK(rep.cross_check.performed);
  CHECK(rep.cross_check.agrees);
}

TEST_CASE("bracket and C2 expression at a point") {
  // p = 2, q = 1: B = 2 - r independently of (s, t).
  const auto spec = single_power(2, 1, 2.5, 1);
  CHECK(bracket(spec, 0.3, 7.0) == doctest::Approx(-0.5));
  CHECK(c2_expression(spec, 0.3, 7.0) == doctest::Approx(0.5));
}

TEST_CASE("derived constants off the vacuous branch") {
  const auto rep = full_report(single_power(2, 1, 2.5, 1));
  REQUIRE(rep.overall == Verdict::holds);
  CHECK(rep.I.cls == IClass::empty);
  CHECK(rep.c3.Theta == doctest::Approx(0.25));
  CHECK(rep.theta == doctest::Approx(0.5 - 0.5 * 0.25));
  CHECK(rep.alpha == doctest::Approx(1.0 / (4 * 0.375) * 0.25));
}

TEST_CASE("the single-power threshold for lambda >= 0 sits at r = 3") {
  CHECK(full_report(single_power(2, 1, 2.999, 1)).overall == Verdict::holds);
  CHECK(full_report(single_power(2, 1, 3.0, 1)).overall == Verdict::fails);
  CHECK(full_report(single_power(2, 1, 3.001, 1)).overall == Verdict::fails);
  const auto t = thm4_range({2, {{1, 1}}, 3.0, LambdaSign::nonneg, 3});
  CHECK(t.r_threshold == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_FALSE(t.admissible);
}

TEST_CASE("closed-form thresholds for both signs") {
  for (double p : {1.5, 2.0, 4.0})
    for (double q : {0.5, 1.0, 2.0, -1.0})
      for (int n : {2, 3, 5}) {
        const double up = ((n + 1) * q + 2 * std::abs(q)) * (p - 1) / (n - 1);
        const double down = ((n + 1) * q - 2 * std::abs(q)) * (p - 1) / (n - 1);
        CHECK(thm4_range({p, {{q > 0 ? 1.0 : -1.0, q}}, 0.0, LambdaSign::nonneg, n}).r_threshold == doctest::Approx(up));
        CHECK(thm4_range({p, {{q > 0 ? 1.0 : -1.0, q}}, 0.0, LambdaSign::nonpos, n}).r_threshold == doctest::Approx(down));
      }
}

TEST_CASE("lambda = 0 is always admissible") {
  const auto rep = full_report(single_power(3, 2, 17, 0));
  CHECK(rep.I.cls == IClass::all);
  CHECK(rep.overall == Verdict::holds);
  CHECK(thm4_range({3, {{1, 2}}, 17, LambdaSign::zero, 3}).admissible);
}

TEST_CASE("polynomial closed form of gamma is the C3 threshold") {
  for (double p : {1.5, 3.0})
    for (int n : {2, 3, 6}) {
      const auto rep = full_report(to_problem_spec({p, {{1, 1}, {2, 1.5}}, 1, LambdaSign::nonneg, n}, 1));
      REQUIRE(rep.c2.gamma_poly);
      CHECK(*rep.c2.gamma_poly == doctest::Approx(4 * rep.c2.gamma / (n - 1)));
    }
}

TEST_CASE("C1 failures") {
  const auto singular = full_report(ProblemSpec(3, 0, 1, pw(-0.8), pw(0), pw(0)));
  CHECK(singular.c1.verdict == Verdict::fails);
  CHECK(singular.c1.l_phi == doctest::Approx(-1.6));
  CHECK(singular.overall == Verdict::fails);

  const auto expo = full_report(ProblemSpec(3, 0, 1, ScalarFunc(Exponential{1.0}), pw(0), pw(0)));
  CHECK(expo.c1.verdict == Verdict::fails);
  CHECK(expo.finite_degree == Verdict::fails);
}

TEST_CASE("an undecided C2 is reported as unknown") {
  const ProblemSpec spec(3, 0, 0, pw(0), ScalarFunc(MonomialSum({{1, 0}, {1, 0.5}})), pw(0));
  const auto c2 = check_c2(spec);
  CHECK(c2.gamma == doctest::Approx(0.0));
  CHECK(c2.gamma_witness > 0.0);
  CHECK(c2.verdict == Verdict::unknown);
}

TEST_CASE("ellipticity fails with a witness for a wide coefficient") {
  const ProblemSpec spec(3, 0, 0, pw(0), ScalarFunc(MonomialSum({{1, 0}, {1, 4}})), pw(0));
  const auto c2 = check_c2(spec);
  CHECK(c2.gamma_witness <= 0.0);
  CHECK(c2.verdict == Verdict::fails);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(ProblemSpec(1, 0, 1, pw(0), pw(0), pw(0)), std::invalid_argument);
  CHECK_THROWS_AS(ProblemSpec(3, -1, 1, pw(0), pw(0), pw(0)), std::invalid_argument);
  CHECK_THROWS(ProblemSpec(3, 0, 1, ScalarFunc(MonomialSum({{2, 0}, {-1, 1}})), pw(0), pw(0)));
  CHECK_THROWS(to_problem_spec({2, {{1, 1}}, 1, LambdaSign::nonneg, 3}, -1.0));
}

TEST_CASE("match_poly recovers the polynomial form") {
  const PolyPLaplaceSpec poly{3.0, {{1, 1}, {0.5, 2}}, 2.5, LambdaSign::nonneg, 3};
  const auto m = match_poly(to_problem_spec(poly, 1.0));
  REQUIRE(m);
  CHECK(m->p == doctest::Approx(3.0));
  REQUIRE(m->terms.size() == 2);
  CHECK(m->terms[0].q == doctest::Approx(1.0));
  CHECK(m->terms[1].q == doctest::Approx(2.0));
  CHECK(m->r == doctest::Approx(2.5));
  CHECK_FALSE(match_poly(ProblemSpec(3, 0, 1, ScalarFunc(Exponential{1}), pw(0), pw(0))));
}

TEST_CASE("key/value rendering") {
  const ProblemSpec spec(3, 0.0, 1.0, pw(0), pw(0), pw(0));
  const auto kv = to_key_value(spec, full_report(spec));
  CHECK(kv.rfind("schema=quasieig-check/1\n", 0) == 0);
  CHECK(kv.find("overall=holds\n") != std::string::npos);
  CHECK(kv.find("c2.gamma=0.5\n") != std::string::npos);
}
