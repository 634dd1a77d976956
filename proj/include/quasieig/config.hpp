#pragma once

// INI configuration files shared by the CLI subcommands. See README.md for the
// full schema.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quasieig/verifier.hpp"

namespace quasieig {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  ModelGeometry geometry;
  ProblemSpec spec;
  std::optional<PolyPLaplaceSpec> poly;  // set when given in shorthand form
};

struct SolveSection {
  std::string mode = "ivp";  // ivp | annulus
  double u0 = 1.0;
  double R = 1.0;
  double R1 = 1.0, R2 = 2.0, u1 = 1.0, u2 = 1.0;
};

struct EigenSection {
  double R = 1.0;
  double u0 = 1.0;
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

struct VerifySection {
  std::vector<Ball> balls;
  double liouville_R_max = 0.0;  // 0 disables the probe
  double growth_bound = 1e6;
};

struct SweepConfig {
  std::string family = "ivp";  // ivp | annulus
  std::vector<double> p, q, r, lambda, n, kappa, u0, R;
  double center_factor = 4.0;
  bool solve = true;
  bool negative_test = false;
  double liouville_R_max = 0.0;
  double growth_bound = 1e6;
  double stability_factor = 4.0;
  bool plots = true;
  SolverOptions solver;

  void validate() const;
};

struct Config {
  std::optional<ProblemConfig> problem;
  SolverOptions solver;
  SolveSection solve;
  EigenSection eigen;
  VerifySection verify;
  std::optional<SweepConfig> sweep;
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Comma separated numbers, or linspace(a, b, k) / geomspace(a, b, k).
std::vector<double> parse_grid(const std::string& text);

}  // namespace quasieig
