#pragma once

// Radial reduction of the eigenproblem on rotationally symmetric model spaces
// dr^2 + w(r)^2 g_{S^{n-1}} with w(r) = r (kappa = 0) or
// w(r) = sinh(sqrt(kappa) r)/sqrt(kappa):
//
//   (J a(u^2) phi(u'^2) u')' = -lambda J psi(u^2) u,   J = w^{n-1}.
//
// The solver state is (log u, F) with F = J a(u^2) phi(u'^2) u' the radial
// flux. u' is recovered from F by inverting the flux map, which is monotone
// exactly when delta_phi > -1; that inversion is the only place the C1
// condition enters the numerics.
//
// Where phi is degenerate or singular at zero gradient (p != 2) the radial
// IVP has no uniqueness guarantee at critical points; the solver follows the
// branch on which the flux is continuous.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quasieig/admissibility.hpp"

namespace quasieig {

class ModelGeometry {
 public:
  ModelGeometry(int n, double kappa);

  int n() const { return n_; }
  double kappa() const { return kappa_; }
  /// Ricci lower bound parameter: Ric >= -K with K = (n-1) kappa.
  double K() const { return (n_ - 1) * kappa_; }

  double warp(double r) const;
  double volume_density(double r) const;
  /// Integral of J over [0, r]; series expansion, accurate for small r.
  double volume_integral_near_origin(double r) const;

 private:
  int n_;
  double kappa_;
};

/// a(s) phi(v^2) v.
double flux_map(const ProblemSpec& spec, double s, double v);

/// Thrown when the flux map is found to be non-monotone (C1 violated).
class C1Violation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unique v with flux_map(spec, s, v) = m.
double invert_flux(const ProblemSpec& spec, double s, double m);

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-8;
};

struct SolverOptions {
  Tolerances tol{};
  /// Upper bound on the step as a fraction of the integration span.
  double max_step_fraction = 1.0 / 500.0;
  /// Start radius of the center series is start_epsilon * R.
  double start_epsilon = 1e-6;
  /// Termination thresholds relative to the reference value u0.
  double zero_factor = 1e-12;
  double blowup_factor = 1e12;
  std::size_t max_steps = 2'000'000;
};

enum class SolveStatus { completed, hit_zero, blew_up };

std::string to_string(SolveStatus s);

/// A solved radial profile. Grid strictly increasing, u > 0 everywhere.
class RadialSolution {
 public:
  RadialSolution(ModelGeometry geometry, ProblemSpec spec, std::vector<double> r, std::vector<double> u,
                 std::vector<double> du, std::vector<double> flux, SolveStatus status, double event_radius,
                 Tolerances tol, bool from_origin);

  const ModelGeometry& geometry() const { return geometry_; }
  const ProblemSpec& spec() const { return spec_; }
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& du() const { return du_; }
  const std::vector<double>& flux() const { return flux_; }
  SolveStatus status() const { return status_; }
  /// Radius of the zero / blow-up event; NaN when completed.
  double event_radius() const { return event_radius_; }
  const Tolerances& tolerances() const { return tol_; }
  /// True when the profile starts at the regular center (u'(0) = 0).
  bool from_origin() const { return from_origin_; }

  double r_min() const { return from_origin_ ? 0.0 : r_.front(); }
  double r_max() const { return r_.back(); }

  /// f = log u.
  double log_u(std::size_t j) const;
  /// Hhat = |grad u|^2 / u^2.
  double hhat(std::size_t j) const;

  struct State {
    double u;
    double du;
    double flux;
  };
  /// Cubic Hermite reconstruction between grid points; du from the flux.
  State state_at(double r) const;

 private:
  ModelGeometry geometry_;
  ProblemSpec spec_;
  std::vector<double> r_, u_, du_, flux_;
  SolveStatus status_;
  double event_radius_;
  Tolerances tol_;
  bool from_origin_;
};

/// Raised when the adaptive step size underflows; carries the last good state.
class StepSizeUnderflow : public std::runtime_error {
 public:
  StepSizeUnderflow(const std::string& what, double r, double u, double flux)
      : std::runtime_error(what), r_(r), u_(u), flux_(flux) {}
  double r() const { return r_; }
  double u() const { return u_; }
  double flux() const { return flux_; }

 private:
  double r_, u_, flux_;
};

RadialSolution solve_ivp(const ModelGeometry& geometry, const ProblemSpec& spec, double u0, double R,
                         const SolverOptions& options = {});

struct EigenResult {
  double lambda;
  RadialSolution solution;
  int iterations;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Principal Dirichlet eigenvalue on B(o, R) by bisection on lambda.
EigenResult solve_eigen(const ModelGeometry& geometry, const ProblemSpec& spec, double R, double u0,
                        std::pair<double, double> bracket, const SolverOptions& options = {});

/// Two-point problem on [R1, R2] with u(R1) = u1, u(R2) = u2.
RadialSolution solve_annulus(const ModelGeometry& geometry, const ProblemSpec& spec, double R1, double R2,
                             double u1, double u2, const SolverOptions& options = {});

/// Positive decaying phi-harmonic profile U(r) = int_r^inf v(s) ds with
/// flux(v) = -1/J; requires lambda = 0 and a constant.
double fundamental_profile(const ModelGeometry& geometry, const ProblemSpec& spec, double r);

/// Largest |F(b) - F(a) + lambda int_a^b J psi(u^2) u| over grid intervals,
/// relative to max |F| plus the source magnitude.
double flux_balance_residual(const RadialSolution& sol);

}  // namespace quasieig
