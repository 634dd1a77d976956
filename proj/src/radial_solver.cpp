#include "quasieig/radial_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace quasieig {

// ---------------------------------------------------------------------------
// Geometry

ModelGeometry::ModelGeometry(int n, double kappa) : n_(n), kappa_(kappa) {
  if (n_ < 2) throw std::invalid_argument("dimension n must be >= 2");
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_)) throw std::invalid_argument("kappa must be finite and >= 0");
}

double ModelGeometry::warp(double r) const {
  if (kappa_ == 0.0) return r;
  const double k = std::sqrt(kappa_);
  return std::sinh(k * r) / k;
}

double ModelGeometry::volume_density(double r) const {
  if (kappa_ == 0.0) return std::pow(r, n_ - 1);
  const double k = std::sqrt(kappa_);
  const double x = k * r;
  if (x < 20.0) return std::pow(std::sinh(x) / k, n_ - 1);
  // log sinh(x) = x - log 2 + log1p(-exp(-2x))
  const double log_w = x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)) - std::log(k);
  return std::exp((n_ - 1) * log_w);
}

double ModelGeometry::volume_integral_near_origin(double r) const {
  const double n = n_;
  return std::pow(r, n) / n + (n - 1.0) * kappa_ * std::pow(r, n + 2.0) / (6.0 * (n + 2.0));
}

// ---------------------------------------------------------------------------
// Flux map

double flux_map(const ProblemSpec& spec, double s, double v) {
  if (v == 0.0) return 0.0;
  return std::exp(log_eval(spec.a(), s) + log_eval(spec.phi(), v * v)) * v;
}

double invert_flux(const ProblemSpec& spec, double s, double m) {
  if (m == 0.0) return 0.0;
  if (!std::isfinite(m)) throw DomainError("flux value must be finite");

  // Solve log phi(e^{2x}) + x = log|m| - log a(s) for x = log v; the
  // derivative in x is 1 + delta_phi(v^2).
  const double target = std::log(std::abs(m)) - log_eval(spec.a(), s);
  if (const auto* mono = std::get_if<MonomialSum>(&spec.phi().variant()); mono && mono->size() == 1) {
    const auto [c, k] = mono->terms()[0];
    if (!(1.0 + 2.0 * k > 0.0))
      throw C1Violation("flux map is not monotone: 1 + delta_phi = " + format_double(1.0 + 2.0 * k) +
                        " (condition C1 violated)");
    return std::copysign(std::exp((target - std::log(c)) / (1.0 + 2.0 * k)), m);
  }
  constexpr double kXMax = 340.0;
  double lo = -kXMax, hi = kXMax;

  double x = target;
  {
    const double d1 = 1.0 + degree(spec.phi(), 1.0);
    if (d1 > 0.0) x = target / d1;
    x = std::clamp(x, -kXMax + 1.0, kXMax - 1.0);
  }

  double hx = 0.0;
  for (int it = 0; it < 300; ++it) {
    const double t = std::exp(2.0 * x);
    hx = log_eval(spec.phi(), t) + x - target;
    const double d = 1.0 + degree(spec.phi(), t);
    if (!(d > 0.0))
      throw C1Violation("flux map is not monotone: 1 + delta_phi(v^2) = " + format_double(d) +
                        " at v = " + format_double(std::exp(x)) + " (condition C1 violated)");
    if (hx == 0.0) break;
    if (hx < 0.0) lo = x;
    else hi = x;
    double xn = x - hx / d;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    const bool done = std::abs(xn - x) <= 1e-14 * std::max(1.0, std::abs(x));
    x = xn;
    if (done) {
      hx = log_eval(spec.phi(), std::exp(2.0 * x)) + x - target;
      break;
    }
  }
  if (!(std::abs(hx) <= 1e-10 * std::max(1.0, std::abs(target))))
    throw DomainError("flux inversion did not converge (residual " + format_double(hx) + ")");
  return std::copysign(std::exp(x), m);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::completed: return "completed";
    case SolveStatus::hit_zero: return "hit_zero";
    case SolveStatus::blew_up: return "blew_up";
  }
  return "completed";
}

// ---------------------------------------------------------------------------
// Solution container

RadialSolution::RadialSolution(ModelGeometry geometry, ProblemSpec spec, std::vector<double> r,
                               std::vector<double> u, std::vector<double> du, std::vector<double> flux,
                               SolveStatus status, double event_radius, Tolerances tol, bool from_origin)
    : geometry_(geometry),
      spec_(std::move(spec)),
      r_(std::move(r)),
      u_(std::move(u)),
      du_(std::move(du)),
      flux_(std::move(flux)),
      status_(status),
      event_radius_(event_radius),
      tol_(tol),
      from_origin_(from_origin) {
  if (r_.empty() || r_.size() != u_.size() || r_.size() != du_.size() || r_.size() != flux_.size())
    throw std::invalid_argument("inconsistent solution arrays");
  for (std::size_t j = 0; j < r_.size(); ++j) {
    if (!(u_[j] > 0.0)) throw std::invalid_argument("stored profile must be positive");
    if (j > 0 && !(r_[j] > r_[j - 1])) throw std::invalid_argument("grid must be strictly increasing");
  }
}

double RadialSolution::log_u(std::size_t j) const { return std::log(u_.at(j)); }

double RadialSolution::hhat(std::size_t j) const {
  const double g = du_.at(j) / u_.at(j);
  return g * g;
}

RadialSolution::State RadialSolution::state_at(double r) const {
  if (r < r_.front()) {
    if (!from_origin_ || r < 0.0) throw DomainError("radius outside the solved range");
    const double x = r / r_.front();
    return {u_.front(), du_.front() * x, flux_.front() * std::pow(x, geometry_.n())};
  }
  if (r > r_.back()) {
    if (r > r_.back() * (1.0 + 1e-14)) throw DomainError("radius outside the solved range");
    r = r_.back();
  }
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t j = it == r_.begin() ? 0 : static_cast<std::size_t>(it - r_.begin()) - 1;
  if (j + 1 >= r_.size()) return {u_.back(), du_.back(), flux_.back()};

  const double h = r_[j + 1] - r_[j];
  const double x = (r - r_[j]) / h;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  auto hermite = [&](double y0, double d0, double y1, double d1) {
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };

  // log u is interpolated: exact for exponential profiles.
  const double L = hermite(std::log(u_[j]), du_[j] / u_[j], std::log(u_[j + 1]), du_[j + 1] / u_[j + 1]);
  const double u = std::exp(L);
  const double lambda = spec_.lambda();
  auto source = [&](std::size_t k) {
    if (lambda == 0.0) return 0.0;
    const double s = u_[k] * u_[k];
    return -lambda * geometry_.volume_density(r_[k]) * std::exp(log_eval(spec_.psi(), s)) * u_[k];
  };
  const double F = hermite(flux_[j], source(j), flux_[j + 1], source(j + 1));
  const double J = geometry_.volume_density(r);
  return {u, invert_flux(spec_, u * u, F / J), F};
}

// ---------------------------------------------------------------------------
// Integrator: Dormand-Prince 5(4) on y = (log u, F).

namespace {

using Vec2 = std::array<double, 2>;

struct Setup {
  double r_start;
  double r_end;
  double L_start;
  double F_start;
  double L_ref;   // log of the reference value for soft event checks
  double L_zero;  // hit_zero when log u falls to this
  double L_blow;  // blew_up when log u rises to this
  bool from_origin;
};

struct Rhs {
  const ModelGeometry& geom;
  const ProblemSpec& spec;

  // Returns false when the state is outside the domain of the equation.
  bool operator()(double r, const Vec2& y, Vec2& dy, double* du = nullptr) const {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) return false;
    try {
      const double u = std::exp(y[0]);
      const double s = std::exp(2.0 * y[0]);
      const double J = geom.volume_density(r);
      if (!(J > 0.0) || !std::isfinite(J)) return false;
      const double v = invert_flux(spec, s, y[1] / J);
      dy[0] = v / u;
      dy[1] = spec.lambda() == 0.0 ? 0.0
                                   : -spec.lambda() * J * std::exp(log_eval(spec.psi(), s) + y[0]);
      if (du) *du = v;
    } catch (const DomainError&) {
      return false;
    }
    return std::isfinite(dy[0]) && std::isfinite(dy[1]);
  }
};

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double hermite_at(double x, double h, double y0, double d0, double y1, double d1) {
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

// Fraction x in [0, 1] of the step where the Hermite interpolant of log u
// crosses `level`.
double crossing(double level, double h, double y0, double d0, double y1, double d1) {
  double lo = 0.0, hi = 1.0;
  const bool rising = y1 > y0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = hermite_at(mid, h, y0, d0, y1, d1);
    if ((v < level) == rising) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

RadialSolution integrate(const ModelGeometry& geom, const ProblemSpec& spec, const Setup& setup,
                         const SolverOptions& opt) {
  const Rhs rhs{geom, spec};
  const double span = setup.r_end - setup.r_start;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double h_max = std::abs(span) * opt.max_step_fraction;

  std::vector<double> rs, us, dus, fs;
  auto push = [&](double r, double L, double F, double du) {
    rs.push_back(r);
    us.push_back(std::exp(L));
    dus.push_back(du);
    fs.push_back(F);
  };

  double r = setup.r_start;
  Vec2 y{setup.L_start, setup.F_start};
  Vec2 k1{};
  double du = 0.0;
  if (!rhs(r, y, k1, &du)) throw DomainError("initial state is outside the domain of the equation");
  push(r, y[0], y[1], du);

  SolveStatus status = SolveStatus::completed;
  double event = std::nan("");
  double h = dir * std::min(h_max, std::max(std::abs(setup.r_start) * 0.5, std::abs(span) * 1e-4));
  if (h == 0.0) h = dir * h_max;

  auto finish = [&]() {
    if (dir < 0) {
      std::reverse(rs.begin(), rs.end());
      std::reverse(us.begin(), us.end());
      std::reverse(dus.begin(), dus.end());
      std::reverse(fs.begin(), fs.end());
    }
    return RadialSolution(geom, spec, std::move(rs), std::move(us), std::move(dus), std::move(fs), status, event,
                          opt.tol, setup.from_origin);
  };

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if ((setup.r_end - r) * dir <= 0.0) return finish();
    bool last = false;
    if ((r + h - setup.r_end) * dir >= 0.0) {
      h = setup.r_end - r;
      last = true;
    }

    Vec2 k2, k3, k4, k5, k6, k7, yt, yn;
    auto stage = [&](std::initializer_list<std::pair<double, const Vec2*>> terms, Vec2& out_y) {
      for (int i = 0; i < 2; ++i) {
        double acc = y[i];
        for (const auto& [c, k] : terms) acc += h * c * (*k)[i];
        out_y[i] = acc;
      }
    };
    bool ok = true;
    stage({{a21, &k1}}, yt);
    ok = ok && rhs(r + c2 * h, yt, k2);
    if (ok) stage({{a31, &k1}, {a32, &k2}}, yt), ok = rhs(r + c3 * h, yt, k3);
    if (ok) stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}, yt), ok = rhs(r + c4 * h, yt, k4);
    if (ok) stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, yt), ok = rhs(r + c5 * h, yt, k5);
    if (ok)
      stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, yt), ok = rhs(r + h, yt, k6);
    double du_new = 0.0;
    if (ok) stage({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, yn), ok = rhs(r + h, yn, k7, &du_new);

    double err = kInf;
    if (ok) {
      err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale = i == 0 ? opt.tol.abs + opt.tol.rel
                                    : opt.tol.abs + opt.tol.rel * std::max(std::abs(y[i]), std::abs(yn[i]));
        err = std::max(err, std::abs(e) / scale);
      }
      if (!std::isfinite(err)) err = kInf;
    }

    if (err <= 1.0) {
      const double r_new = last ? setup.r_end : r + h;
      if (yn[0] <= setup.L_zero || yn[0] >= setup.L_blow) {
        const bool zero = yn[0] <= setup.L_zero;
        const double level = zero ? setup.L_zero : setup.L_blow;
        const double x = crossing(level, h, y[0], k1[0], yn[0], k7[0]);
        const double rc = r + x * h;
        const double Fc = hermite_at(x, h, y[1], k1[1], yn[1], k7[1]);
        Vec2 yc{level, Fc}, kc{};
        double duc = 0.0;
        if (!rhs(rc, yc, kc, &duc)) duc = du_new;
        if ((rc - rs.back()) * dir > 0.0) push(rc, level, Fc, duc);
        status = zero ? SolveStatus::hit_zero : SolveStatus::blew_up;
        // Past the zero threshold u is nearly linear; extrapolate to u = 0.
        event = zero && duc != 0.0 ? rc + dir * std::abs(std::exp(level) / duc) : rc;
        return finish();
      }
      r = r_new;
      y = yn;
      k1 = k7;
      push(r, y[0], y[1], du_new);
      if (last) return finish();
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = dir * std::min(h_max, std::abs(h) * fac);
    } else {
      const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.25), 0.1, 0.5) : 0.25;
      h *= fac;
    }

    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(r))) {
      // Steps cannot resolve further: a steep approach to zero or to a
      // finite-radius singularity.
      const double dL = k1[0] * dir;
      if (y[0] < setup.L_ref + std::log(1e-3) && dL < 0.0) {
        status = SolveStatus::hit_zero;
        event = r;
        return finish();
      }
      if (y[0] > setup.L_ref + std::log(1e3) && dL > 0.0) {
        status = SolveStatus::blew_up;
        event = r;
        return finish();
      }
      throw StepSizeUnderflow("step size underflow at r = " + format_double(r), r, std::exp(y[0]), y[1]);
    }
  }
  throw std::runtime_error("maximum number of integration steps exceeded");
}

void require_c1(const ProblemSpec& spec) {
  const auto c1 = check_c1(spec);
  if (c1.verdict == Verdict::fails && !(c1.l_phi > -1.0))
    throw C1Violation("flux map is not invertible: inf delta_phi = " + format_double(c1.l_phi) +
                      " (condition C1 violated)");
}

}  // namespace

RadialSolution solve_ivp(const ModelGeometry& geometry, const ProblemSpec& spec, double u0, double R,
                         const SolverOptions& options) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw std::invalid_argument("u0 must be positive");
  if (!(R > 0.0) || !std::isfinite(R)) throw std::invalid_argument("R must be positive");
  require_c1(spec);

  const double lambda = spec.lambda();
  const double r0 = options.start_epsilon * R * std::min(1.0, 1.0 / std::sqrt(std::abs(lambda) + 1.0));
  const double F0 = lambda == 0.0 ? 0.0
                                  : -lambda * eval(spec.psi(), u0 * u0) * u0 *
                                        geometry.volume_integral_near_origin(r0);
  const double L0 = std::log(u0);
  const Setup setup{r0,
                    R,
                    L0,
                    F0,
                    L0,
                    L0 + std::log(options.zero_factor),
                    L0 + std::log(options.blowup_factor),
                    true};
  return integrate(geometry, spec, setup, options);
}

EigenResult solve_eigen(const ModelGeometry& geometry, const ProblemSpec& spec, double R, double u0,
                        std::pair<double, double> bracket, const SolverOptions& options) {
  auto [lo, hi] = bracket;
  if (!(lo < hi)) throw BracketError("eigenvalue bracket must satisfy lo < hi");

  auto shoot = [&](double lambda) { return solve_ivp(geometry, spec.with_lambda(lambda), u0, R, options); };
  auto zero_free = [](const RadialSolution& s) { return s.status() != SolveStatus::hit_zero; };
  auto describe = [](const RadialSolution& s) {
    return s.status() == SolveStatus::hit_zero ? "first zero at r = " + format_double(s.event_radius())
                                               : std::string("no zero up to R");
  };

  auto sol_lo = shoot(lo);
  const auto sol_hi = shoot(hi);
  if (!zero_free(sol_lo) || zero_free(sol_hi))
    throw BracketError("bracket does not straddle the principal eigenvalue: lambda_lo = " + format_double(lo) +
                       " (" + describe(sol_lo) + "), lambda_hi = " + format_double(hi) + " (" + describe(sol_hi) +
                       ")");

  int it = 0;
  while (hi - lo > 1e-10 * (1.0 + std::abs(0.5 * (lo + hi))) && it < 200) {
    const double mid = 0.5 * (lo + hi);
    auto s = shoot(mid);
    if (zero_free(s)) {
      lo = mid;
      sol_lo = std::move(s);
    } else {
      hi = mid;
    }
    ++it;
  }
  return {0.5 * (lo + hi), std::move(sol_lo), it};
}

RadialSolution solve_annulus(const ModelGeometry& geometry, const ProblemSpec& spec, double R1, double R2,
                             double u1, double u2, const SolverOptions& options) {
  if (!(R1 > 0.0) || !(R2 > R1)) throw std::invalid_argument("annulus needs 0 < R1 < R2");
  if (!(u1 > 0.0) || !(u2 > 0.0)) throw std::invalid_argument("boundary values must be positive");
  require_c1(spec);

  // Shoot from the end with the smaller value; the profile then grows along
  // the integration and the target is reached without cancellation.
  const bool forward = u1 <= u2;
  const double r_start = forward ? R1 : R2, r_end = forward ? R2 : R1;
  const double u_start = forward ? u1 : u2, u_target = forward ? u2 : u1;
  const double L_target = std::log(u_target);
  const double sigma = forward ? 1.0 : -1.0;  // mismatch increases with x, flux = sigma * x

  const Setup base{r_start,
                   r_end,
                   std::log(u_start),
                   0.0,
                   std::log(u_start),
                   std::log(std::min(u1, u2) * options.zero_factor),
                   std::log(std::max(u1, u2) * options.blowup_factor),
                   false};

  std::optional<RadialSolution> best;
  double best_abs = kInf;
  auto shoot = [&](double x) {
    Setup s = base;
    s.F_start = sigma * x;
    std::optional<RadialSolution> attempt;
    try {
      attempt.emplace(integrate(geometry, spec, s, options));
    } catch (const StepSizeUnderflow&) {
      // Too steep to follow: an overshoot in the direction of x.
      return x > 0.0 ? kInf : -kInf;
    }
    auto& sol = *attempt;
    double mismatch;
    if (sol.status() == SolveStatus::hit_zero) mismatch = -kInf;
    else if (sol.status() == SolveStatus::blew_up) mismatch = kInf;
    else mismatch = std::log(forward ? sol.u().back() : sol.u().front()) - L_target;
    if (std::isfinite(mismatch) && std::abs(mismatch) < best_abs) {
      best_abs = std::abs(mismatch);
      best.emplace(std::move(sol));
    }
    return mismatch;
  };

  const double m0 = shoot(0.0);
  if (m0 == 0.0) return *best;

  const double slope = (u_target - u_start) / (R2 - R1);
  double scale = std::abs(geometry.volume_density(r_start) * flux_map(spec, u_start * u_start, slope));
  if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;

  // Search along x = dir * y, y > 0, for the sign change; the scale guess
  // can be off by many orders of magnitude, so move geometrically.
  const double dir = m0 < 0.0 ? 1.0 : -1.0;
  auto g = [&](double y) { return dir * shoot(dir * y); };  // g(0) < 0, increasing
  double y_lo = 0.0, y_hi = 0.0, g_lo = dir * m0, g_hi = 0.0;
  bool bracketed = false;
  double y = scale;
  double gy = g(y);
  if (gy >= 0.0) {
    y_hi = y, g_hi = gy;
    for (int i = 0; i < 300 && !bracketed; ++i) {
      y /= 16.0;
      gy = g(y);
      if (gy < 0.0) y_lo = y, g_lo = gy, bracketed = true;
      else y_hi = y, g_hi = gy;
    }
  } else {
    y_lo = y, g_lo = gy;
    for (int i = 0; i < 300 && !bracketed; ++i) {
      y *= 16.0;
      if (!std::isfinite(y)) break;
      gy = g(y);
      if (gy >= 0.0) y_hi = y, g_hi = gy, bracketed = true;
      else y_lo = y, g_lo = gy;
    }
  }
  if (!bracketed) throw BracketError("no positive solution found in the shooting bracket");

  for (int i = 0; i < 200; ++i) {
    if (best_abs <= 1e-15 || y_hi - y_lo <= 1e-16 * y_hi) break;
    double yn = 0.5 * (y_lo + y_hi);
    if (y_lo > 0.0 && y_hi > 4.0 * y_lo) {
      yn = std::sqrt(y_lo * y_hi);
    } else if (std::isfinite(g_lo) && std::isfinite(g_hi) && i % 3 != 2) {
      // Regula falsi, with a bisection every third step.
      const double yf = y_lo - g_lo * (y_hi - y_lo) / (g_hi - g_lo);
      if (yf > y_lo && yf < y_hi) yn = yf;
    }
    const double gn = g(yn);
    if (gn < 0.0) y_lo = yn, g_lo = gn;
    else y_hi = yn, g_hi = gn;
  }
  if (!best || best_abs > 1e-9) throw BracketError("shooting did not converge to the boundary value");
  return *best;
}

double fundamental_profile(const ModelGeometry& geometry, const ProblemSpec& spec, double r) {
  if (spec.lambda() != 0.0) throw std::invalid_argument("fundamental profile needs lambda = 0");
  const auto ba = degree_bounds(spec.a(), 1);
  if (!(ba.certified && ba.inf == 0.0 && ba.sup == 0.0))
    throw std::invalid_argument("fundamental profile needs a constant coefficient a");
  if (!(r > 0.0)) throw std::invalid_argument("fundamental profile needs r > 0");
  if (geometry.kappa() == 0.0) {
    // |v| ~ m^{1/(1 + delta_phi(0))} with m ~ r^{1-n}
    const double d0 = degree_limit_at_zero(spec.phi()).degree;
    if (!(geometry.n() - 1.0 > 1.0 + d0))
      throw DomainError("fundamental profile integral diverges on flat space for n <= 1 + delta_phi(0+)");
  }
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double x) {
    const double J = geometry.volume_density(r + x);
    if (!std::isfinite(J) || J > 1e250) return 0.0;
    return std::abs(invert_flux(spec, 1.0, 1.0 / J));
  };
  const double value = integrator.integrate(f, 0.0, kInf, 1e-14);
  if (!std::isfinite(value) || !(value > 0.0)) throw DomainError("fundamental profile integral diverges");
  return value;
}

double flux_balance_residual(const RadialSolution& sol) {
  const auto& r = sol.r();
  const auto& u = sol.u();
  const auto& F = sol.flux();
  const double lambda = sol.spec().lambda();
  auto g = [&](double rr, double uu) {
    return sol.geometry().volume_density(rr) * std::exp(log_eval(sol.spec().psi(), uu * uu)) * uu;
  };
  double worst = 0.0, scale = 0.0;
  for (double f : F) scale = std::max(scale, std::abs(f));
  double source_total = 0.0;
  std::vector<double> residuals;
  for (std::size_t j = 0; j + 1 < r.size(); ++j) {
    const double h = r[j + 1] - r[j];
    const double rm = 0.5 * (r[j] + r[j + 1]);
    const double integral = lambda == 0.0 ? 0.0 : h / 6.0 * (g(r[j], u[j]) + 4.0 * g(rm, sol.state_at(rm).u) +
                                                             g(r[j + 1], u[j + 1]));
    source_total += std::abs(lambda * integral);
    worst = std::max(worst, std::abs(F[j + 1] - F[j] + lambda * integral));
  }
  scale += source_total;
  return scale == 0.0 ? 0.0 : worst / scale;
}

}  // namespace quasieig
