#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "quasieig/radial_solver.hpp"

using namespace quasieig;

namespace {

ScalarFunc pw(double k) { return ScalarFunc(MonomialSum::power(k)); }

ProblemSpec laplace(int n, double lambda, double K = 0) { return ProblemSpec(n, K, lambda, pw(0), pw(0), pw(0)); }

SolverOptions tight() {
  SolverOptions o;
  o.tol = {1e-13, 1e-11};
  return o;
}

}  // namespace

TEST_CASE("model geometry") {
  const ModelGeometry flat(3, 0), hyp(3, 1);
  CHECK(flat.volume_density(2.0) == doctest::Approx(4.0));
  CHECK(hyp.volume_density(1.0) == doctest::Approx(std::sinh(1.0) * std::sinh(1.0)));
  CHECK(hyp.volume_density(30.0) == doctest::Approx(std::pow(std::sinh(30.0), 2)).epsilon(1e-12));
  CHECK(hyp.K() == 2.0);
  CHECK(flat.volume_integral_near_origin(0.1) == doctest::Approx(1e-3 / 3));
  CHECK_THROWS(ModelGeometry(1, 0));
  CHECK_THROWS(ModelGeometry(3, -1));
}

TEST_CASE("flux inversion round trips") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-6, 6), pd(1.2, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const double p = pd(rng);
    const ProblemSpec spec(3, 0, 1, ScalarFunc(MonomialSum({{1, (p - 2) / 2}, {0.3, 0.5}})),
                           ScalarFunc(MonomialSum({{1, 0}, {2, 0.5}})), pw(0));
    const double s = std::exp(lg(rng)), v = (i % 2 ? -1 : 1) * std::exp(lg(rng));
    const double back = invert_flux(spec, s, flux_map(spec, s, v));
    CHECK(std::abs(back - v) <= 1e-10 * std::abs(v));
  }
  CHECK(invert_flux(laplace(3, 1), 1.0, 0.0) == 0.0);
}

TEST_CASE("non-monotone flux is rejected") {
  const ProblemSpec bad(3, 0, 1, pw((0.5 - 2) / 2), pw(0), pw(0));
  CHECK_THROWS_AS(invert_flux(bad, 1.0, 0.5), C1Violation);
  CHECK_THROWS_AS(solve_ivp(ModelGeometry(3, 0), bad, 1.0, 1.0), C1Violation);
}

TEST_CASE("sin(r)/r and its first zero") {
  const auto sol = solve_ivp(ModelGeometry(3, 0), laplace(3, 1), 1.0, 3.0, tight());
  CHECK(sol.status() == SolveStatus::completed);
  for (double r = 0.05; r < 3.0; r += 0.15) {
    const double exact = std::sin(r) / r;
    CHECK(std::abs(sol.state_at(r).u / exact - 1) < 1e-8);
    const double dexact = (r * std::cos(r) - std::sin(r)) / (r * r);
    CHECK(sol.state_at(r).du == doctest::Approx(dexact).epsilon(1e-6));
  }
  CHECK(flux_balance_residual(sol) < 1e-8);

  const auto past = solve_ivp(ModelGeometry(3, 0), laplace(3, 1), 1.0, 5.0, tight());
  CHECK(past.status() == SolveStatus::hit_zero);
  CHECK(past.event_radius() == doctest::Approx(M_PI).epsilon(1e-8));
}

TEST_CASE("sinh(r)/r grows past the blow-up threshold") {
  SolverOptions o = tight();
  o.blowup_factor = 1e6;
  const auto sol = solve_ivp(ModelGeometry(3, 0), laplace(3, -1), 1.0, 40.0, o);
  CHECK(sol.status() == SolveStatus::blew_up);
  CHECK(sol.event_radius() == doctest::Approx(oracle::sinh_over_r_crossing(1e6)).epsilon(1e-8));
}

TEST_CASE("principal eigenvalues of the unit ball") {
  const auto e3 = solve_eigen(ModelGeometry(3, 0), laplace(3, 0), 1.0, 1.0, {5, 15}, tight());
  CHECK(std::abs(e3.lambda - M_PI * M_PI) < 1e-7);
  const auto e2 = solve_eigen(ModelGeometry(2, 0), laplace(2, 0), 1.0, 1.0, {3, 8}, tight());
  CHECK(std::abs(e2.lambda - oracle::j0_first_zero_squared()) < 1e-6);
  CHECK_THROWS_AS(solve_eigen(ModelGeometry(3, 0), laplace(3, 0), 1.0, 1.0, {1, 5}), BracketError);
}

TEST_CASE("harmonic annulus profiles") {
  const auto flat = solve_annulus(ModelGeometry(3, 0), laplace(3, 0), 1.0, 3.0, 1.0, 1.0 / 3);
  for (double r = 1.0; r <= 3.0; r += 0.1) CHECK(std::abs(flat.state_at(r).u * r - 1) < 1e-9);

  const ModelGeometry hyp(2, 1);
  const auto spec = laplace(2, 0, hyp.K());
  const double a = 0.5, b = 4.0;
  CHECK(fundamental_profile(hyp, spec, a) == doctest::Approx(-std::log(std::tanh(a / 2))).epsilon(1e-12));
  const auto sol =
      solve_annulus(hyp, spec, a, b, fundamental_profile(hyp, spec, a), fundamental_profile(hyp, spec, b));
  for (double r = a; r <= b; r += 0.25)
    CHECK(std::abs(sol.state_at(r).u / oracle::hyperbolic_harmonic(2, r) - 1) < 1e-8);

  const ModelGeometry hyp3(3, 1);
  CHECK(fundamental_profile(hyp3, laplace(3, 0, hyp3.K()), 1.5) ==
        doctest::Approx(oracle::hyperbolic_harmonic(3, 1.5)).epsilon(1e-10));
  const ModelGeometry hyp4(4, 1);
  CHECK(fundamental_profile(hyp4, laplace(4, 0, hyp4.K()), 1.0) ==
        doctest::Approx(oracle::hyperbolic_harmonic(4, 1.0)).epsilon(1e-10));
}

TEST_CASE("fundamental profile preconditions") {
  CHECK_THROWS(fundamental_profile(ModelGeometry(3, 0), laplace(3, 1), 1.0));
  CHECK_THROWS(fundamental_profile(ModelGeometry(2, 0), laplace(2, 0), 1.0));
  const ProblemSpec varying(3, 0, 0, pw(0), pw(0.5), pw(0));
  CHECK_THROWS(fundamental_profile(ModelGeometry(3, 0), varying, 1.0));
}

TEST_CASE("porous p-Laplace profile hits zero with a finite radius") {
  const auto spec = to_problem_spec({3.0, {{1, 2}}, 3.0, LambdaSign::nonneg, 3}, 1.0);
  const auto sol = solve_ivp(ModelGeometry(3, 0), spec, 1.0, 20.0);
  CHECK(sol.status() == SolveStatus::hit_zero);
  CHECK(sol.event_radius() > 1.0);
  CHECK(sol.event_radius() < 20.0);
  for (double u : sol.u()) CHECK(u > 0.0);
}

TEST_CASE("state reconstruction outside the range") {
  const auto sol = solve_annulus(ModelGeometry(3, 0), laplace(3, 0), 1.0, 2.0, 1.0, 0.5);
  CHECK_THROWS_AS(sol.state_at(0.5), DomainError);
  CHECK_THROWS_AS(sol.state_at(2.5), DomainError);
  CHECK(sol.r_min() == 1.0);
}

TEST_CASE("flux map identities") {
  CHECK(flux_map(laplace(3, 1), 2.0, 1.7) == 1.7);
  const ProblemSpec p3(3, 0, 1, pw(0.5), pw(0), pw(0));
  CHECK(flux_map(p3, 1.0, 2.0) == doctest::Approx(4.0));
  CHECK(invert_flux(p3, 1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(invert_flux(p3, 1.0, -4.0) == -invert_flux(p3, 1.0, 4.0));
  const auto porous = to_problem_spec({2.0, {{1.0, 2.0}}, 1.0, LambdaSign::nonneg, 3}, 1.0);
  CHECK(flux_map(porous, 4.0, 0.3) == doctest::Approx(4.0 * 0.3));
}

TEST_CASE("default tolerances on the closed forms") {
  const ModelGeometry flat(3, 0);
  const auto s = solve_ivp(flat, laplace(3, 1), 1.0, 2.0);
  CHECK(std::abs(s.state_at(M_PI / 2).u - 2 / M_PI) < 1e-8);
  const auto h = solve_ivp(flat, laplace(3, -1), 1.0, 10.0);
  CHECK(h.status() == SolveStatus::completed);
  CHECK(h.u().back() == doctest::Approx(std::sinh(10.0) / 10).epsilon(1e-6));
  const auto c = solve_ivp(flat, laplace(3, 0), 2.5, 7.0);
  for (std::size_t j = 0; j < c.r().size(); ++j) {
    CHECK(c.u()[j] == 2.5);
    CHECK(c.du()[j] == 0.0);
  }
}

TEST_CASE("halving the tolerances changes u(R) by less than ten times the finer tolerance") {
  const ModelGeometry flat(3, 0);
  const auto spec = to_problem_spec({3.0, {{1.0, 1.0}}, 2.0, LambdaSign::nonneg, 3}, 1.0);
  SolverOptions coarse, fine;
  fine.tol = {coarse.tol.abs / 2, coarse.tol.rel / 2};
  const double a = solve_ivp(flat, spec, 1.0, 1.5, coarse).u().back();
  const double b = solve_ivp(flat, spec, 1.0, 1.5, fine).u().back();
  CHECK(std::abs(a - b) <= 10 * (fine.tol.abs + fine.tol.rel * std::abs(b)));
}

TEST_CASE("eigenvalue scaling with the radius") {
  const ModelGeometry flat(3, 0);
  const double base = solve_eigen(flat, laplace(3, 0), 1.0, 1.0, {5, 15}).lambda;
  for (double R : {0.5, 2.0}) {
    const double l = solve_eigen(flat, laplace(3, 0), R, 1.0, {2, 60}).lambda;
    CHECK(l == doctest::Approx(base / (R * R)).epsilon(1e-8));
  }
}

TEST_CASE("annulus boundary value special cases") {
  const ModelGeometry flat(3, 0);
  const auto inv = solve_annulus(flat, laplace(3, 0), 1.0, 2.0, 1.0, 0.5);
  for (double r = 1.0; r <= 2.0; r += 0.125) CHECK(inv.state_at(r).u == doctest::Approx(1 / r).epsilon(1e-10));
  const auto flat_data = solve_annulus(flat, laplace(3, 0), 1.0, 2.0, 0.7, 0.7);
  for (double u : flat_data.u()) CHECK(u == doctest::Approx(0.7).epsilon(1e-14));
  CHECK_THROWS(solve_annulus(flat, laplace(3, 0), 2.0, 1.0, 1.0, 1.0));
  CHECK_THROWS(solve_annulus(flat, laplace(3, 0), 1.0, 2.0, -1.0, 1.0));
}

TEST_CASE("derived accessors") {
  const auto s = solve_ivp(ModelGeometry(3, 0), laplace(3, 1), 1.0, 2.0);
  for (std::size_t j = 0; j < s.r().size(); j += 50) {
    CHECK(s.log_u(j) == doctest::Approx(std::log(s.u()[j])));
    CHECK(s.hhat(j) == doctest::Approx(std::pow(s.du()[j] / s.u()[j], 2)));
  }
  CHECK(s.tolerances().rel == 1e-8);
  CHECK(s.from_origin());
  CHECK(s.r_min() == 0.0);
}
