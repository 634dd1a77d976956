#pragma once

// Numerical probes of the local gradient and Harnack estimates and of the
// Liouville property, on radial solutions.
//
// A geodesic ball B(x, R) with d(o, x) = c meets the radial range
// [max(0, c - R), c + R]; for a radial u, |grad u| = |u'|, so suprema over the
// ball reduce to suprema over that interval.

#include <string>

#include "quasieig/radial_solver.hpp"

namespace quasieig {

struct Ball {
  double center;  // distance of the ball center from the pole
  double radius;
};

struct GradientEstimate {
  double sup_ratio;    // sup |grad u| / u on the ball
  double argmax_r;     // radius where it is attained
  double bound_shape;  // (1 + sqrt(K) R) / R
  double fitted_C;     // sup_ratio / bound_shape
};

/// Requires the ball inside the solved range; for a solution that reached a
/// zero at r*, also c + 2R < r* (positivity on the doubled ball).
GradientEstimate gradient_estimate_check(const RadialSolution& sol, Ball ball);

struct HarnackEstimate {
  double sup_u;
  double inf_u;
  double ratio;
  double exponent;  // log(ratio) / (1 + sqrt(K) R)
};

HarnackEstimate harnack_check(const RadialSolution& sol, Ball ball);

enum class LiouvilleOutcome { hit_zero, unbounded, trivial, red_flag, inconclusive };

std::string to_string(LiouvilleOutcome o);

struct LiouvilleResult {
  LiouvilleOutcome outcome;
  double radius;  // zero / growth radius, or R_max
  double max_over_min;
  std::string detail;
};

/// Shoots the radial IVP on flat R^n out to R_max. A positive solution whose
/// range stays within a factor growth_bound is what a Liouville theorem rules
/// out, unless it is constant.
LiouvilleResult liouville_probe(const ProblemSpec& spec, double u0, double R_max, double growth_bound = 1e6,
                                SolverOptions options = {});

}  // namespace quasieig
