#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "quasieig/verifier.hpp"

using namespace quasieig;

namespace {

ScalarFunc pw(double k) { return ScalarFunc(MonomialSum::power(k)); }
ProblemSpec laplace(int n, double lambda, double K = 0) { return ProblemSpec(n, K, lambda, pw(0), pw(0), pw(0)); }

}  // namespace

TEST_CASE("constant solution") {
  const auto sol = solve_ivp(ModelGeometry(3, 0), laplace(3, 0), 2.0, 4.0);
  const auto g = gradient_estimate_check(sol, {1.0, 1.0});
  CHECK(g.sup_ratio == 0.0);
  CHECK(g.fitted_C == 0.0);
  const auto h = harnack_check(sol, {1.0, 1.0});
  CHECK(h.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(h.exponent) < 1e-14);
}

TEST_CASE("1/r on annuli") {
  const auto sol = solve_annulus(ModelGeometry(3, 0), laplace(3, 0), 1.0, 3.0, 1.0, 1.0 / 3);
  CHECK(harnack_check(sol, {2.0, 1.0}).ratio == doctest::Approx(3.0).epsilon(1e-9));

  for (double R : {1.0, 8.0}) {
    const double c = 4 * R;
    const auto s = solve_annulus(ModelGeometry(3, 0), laplace(3, 0), c - 2 * R, c + 2 * R, 1 / (c - 2 * R),
                                 1 / (c + 2 * R));
    const auto g = gradient_estimate_check(s, {c, R});
    CHECK(g.sup_ratio == doctest::Approx(1 / (c - R)).epsilon(1e-9));
    CHECK(g.bound_shape == doctest::Approx(1 / R));
    CHECK(std::abs(g.fitted_C - 1.0 / 3) < 1e-9);
    CHECK(g.argmax_r == doctest::Approx(c - R));
  }
}

TEST_CASE("ball outside the solution is rejected") {
  const auto sol = solve_annulus(ModelGeometry(3, 0), laplace(3, 0), 1.0, 3.0, 1.0, 1.0 / 3);
  CHECK_THROWS_AS(gradient_estimate_check(sol, {2.0, 1.5}), DomainError);
  CHECK_THROWS_AS(harnack_check(sol, {0.5, 0.2}), DomainError);
  const auto zero = solve_ivp(ModelGeometry(3, 0), laplace(3, 1), 1.0, 5.0);
  REQUIRE(zero.status() == SolveStatus::hit_zero);
  CHECK_THROWS_AS(gradient_estimate_check(zero, {0.0, 2.0}), DomainError);
  CHECK_NOTHROW(gradient_estimate_check(zero, {0.0, 1.0}));
}

TEST_CASE("hyperbolic harmonic ratio tends to n - 1") {
  const ModelGeometry hyp(2, 1);
  const auto spec = laplace(2, 0, hyp.K());
  const double c = 30, R = 1;
  const auto sol = solve_annulus(hyp, spec, c - 2 * R, c + 2 * R, fundamental_profile(hyp, spec, c - 2 * R),
                                 fundamental_profile(hyp, spec, c + 2 * R));
  const auto g = gradient_estimate_check(sol, {c, R});
  CHECK(g.sup_ratio == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g.bound_shape == doctest::Approx(2.0));
}

TEST_CASE("Liouville probe branches") {
  const auto zero = liouville_probe(laplace(3, 1), 1.0, 50.0);
  CHECK(zero.outcome == LiouvilleOutcome::hit_zero);
  CHECK(std::abs(zero.radius - M_PI) < 1e-6);

  const auto grow = liouville_probe(laplace(3, -1), 1.0, 50.0);
  CHECK(grow.outcome == LiouvilleOutcome::unbounded);
  CHECK(grow.radius == doctest::Approx(oracle::sinh_over_r_crossing(1e6)).epsilon(1e-6));

  CHECK(liouville_probe(laplace(3, 0), 1.0, 50.0).outcome == LiouvilleOutcome::trivial);
  CHECK(liouville_probe(laplace(3, 1), 1.0, 1.0).outcome == LiouvilleOutcome::inconclusive);
  CHECK(to_string(LiouvilleOutcome::red_flag) == "red_flag");
}
