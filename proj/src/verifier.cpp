#include "quasieig/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace quasieig {

namespace {

std::pair<double, double> ball_interval(const RadialSolution& sol, Ball ball) {
  if (!(ball.radius > 0.0) || !(ball.center >= 0.0)) throw std::invalid_argument("ball needs radius > 0, center >= 0");
  const double lo = std::max(0.0, ball.center - ball.radius);
  const double hi = ball.center + ball.radius;
  const double slack = 1e-12 * std::max(1.0, hi);
  if (lo < sol.r_min() - slack || hi > sol.r_max() + slack)
    throw DomainError("ball [" + format_double(lo) + ", " + format_double(hi) + "] is outside the solved range [" +
                      format_double(sol.r_min()) + ", " + format_double(sol.r_max()) + "]");
  return {std::max(lo, sol.r_min()), std::min(hi, sol.r_max())};
}

// Maximises f over [lo, hi]: grid points inside, both ends, then a golden
// section search on the two grid intervals around the best sample.
std::pair<double, double> maximise(const RadialSolution& sol, double lo, double hi,
                                   const std::function<double(double)>& f) {
  std::vector<double> xs{lo};
  for (double r : sol.r())
    if (r > lo && r < hi) xs.push_back(r);
  xs.push_back(hi);
  std::size_t best = 0;
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fs[i] = f(xs[i]);
    if (fs[i] > fs[best]) best = i;
  }
  double a = xs[best == 0 ? 0 : best - 1], b = xs[std::min(best + 1, xs.size() - 1)];
  double x_best = xs[best], f_best = fs[best];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 80 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (fc > fd) {
      b = d, d = c, fd = fc;
      c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + g * (b - a), fd = f(d);
    }
  }
  if (fc > f_best) x_best = c, f_best = fc;
  if (fd > f_best) x_best = d, f_best = fd;
  return {x_best, f_best};
}

}  // namespace

GradientEstimate gradient_estimate_check(const RadialSolution& sol, Ball ball) {
  const auto [lo, hi] = ball_interval(sol, ball);
  if (sol.status() == SolveStatus::hit_zero && ball.center + 2.0 * ball.radius >= sol.event_radius())
    throw DomainError("solution is not positive on the doubled ball (zero at r = " +
                      format_double(sol.event_radius()) + ")");
  auto ratio = [&](double r) {
    const auto st = sol.state_at(r);
    return std::abs(st.du) / st.u;
  };
  const auto [arg, sup] = maximise(sol, lo, hi, ratio);
  const double shape = (1.0 + std::sqrt(sol.geometry().K()) * ball.radius) / ball.radius;
  return {sup, arg, shape, sup / shape};
}

HarnackEstimate harnack_check(const RadialSolution& sol, Ball ball) {
  const auto [lo, hi] = ball_interval(sol, ball);
  const auto [a1, sup] = maximise(sol, lo, hi, [&](double r) { return sol.state_at(r).u; });
  const auto [a2, neg_inf] = maximise(sol, lo, hi, [&](double r) { return -sol.state_at(r).u; });
  const double ratio = sup / -neg_inf;
  return {sup, -neg_inf, ratio, std::log(ratio) / (1.0 + std::sqrt(sol.geometry().K()) * ball.radius)};
}

std::string to_string(LiouvilleOutcome o) {
  switch (o) {
    case LiouvilleOutcome::hit_zero: return "hit_zero";
    case LiouvilleOutcome::unbounded: return "unbounded";
    case LiouvilleOutcome::trivial: return "trivial";
    case LiouvilleOutcome::red_flag: return "red_flag";
    case LiouvilleOutcome::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LiouvilleResult liouville_probe(const ProblemSpec& spec, double u0, double R_max, double growth_bound,
                                SolverOptions options) {
  if (!(growth_bound > 1.0)) throw std::invalid_argument("growth bound must exceed 1");
  const ModelGeometry flat(spec.n(), 0.0);
  if (spec.lambda() == 0.0)
    return {LiouvilleOutcome::trivial, R_max, 1.0, "lambda = 0: the radial solution is the constant u0"};

  options.blowup_factor = growth_bound;
  const auto sol = solve_ivp(flat, spec.with_K(0.0), u0, R_max, options);
  const auto [mn, mx] = std::minmax_element(sol.u().begin(), sol.u().end());
  const double spread = *mx / *mn;
  switch (sol.status()) {
    case SolveStatus::hit_zero:
      return {LiouvilleOutcome::hit_zero, sol.event_radius(), spread,
              "first zero at r = " + format_double(sol.event_radius())};
    case SolveStatus::blew_up:
      return {LiouvilleOutcome::unbounded, sol.event_radius(), spread,
              "u reached " + format_double(growth_bound) + " u0 at r = " + format_double(sol.event_radius())};
    case SolveStatus::completed: break;
  }
  if (spread < 1.0 + 1e-6)
    return {LiouvilleOutcome::red_flag, R_max, spread,
            "nonconstant problem but u stayed within a factor " + format_double(spread) + " up to R_max"};
  return {LiouvilleOutcome::inconclusive, R_max, spread,
          "positive and within the growth bound up to R_max = " + format_double(R_max)};
}

}  // namespace quasieig
