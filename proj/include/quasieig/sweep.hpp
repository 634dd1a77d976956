#pragma once

// Parameter sweeps over single-power p-Laplace families. One CSV row per grid
// point, written in grid order whatever the number of worker threads.
//
// CSV schema "quasieig sweep v1": see kSweepColumns and README.md.

#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "quasieig/config.hpp"

namespace quasieig {

inline constexpr std::string_view kSweepSchema = "quasieig sweep v1";

inline constexpr std::array<std::string_view, 29> kSweepColumns = {
    "row",       "family",      "n",           "kappa",      "p",
    "q",         "r",           "lambda",      "u0",         "R",
    "center",    "c1",          "c2",          "c3",         "I",
    "admissible", "thm4",       "gamma",       "Theta",      "status",
    "event_radius", "sup_ratio", "bound_shape", "fitted_C",  "harnack_ratio",
    "harnack_exponent", "liouville", "liouville_radius", "error"};

struct SweepRow {
  std::size_t index = 0;
  std::string family;
  int n = 0;
  double kappa = 0, p = 0, q = 0, r = 0, lambda = 0, u0 = 0, R = 0, center = 0;
  std::string c1, c2, c3, I, admissible, thm4;
  double gamma = std::nan(""), Theta = std::nan("");
  std::string status;
  double event_radius = std::nan(""), sup_ratio = std::nan(""), bound_shape = std::nan(""),
         fitted_C = std::nan(""), harnack_ratio = std::nan(""), harnack_exponent = std::nan("");
  std::string liouville;
  double liouville_radius = std::nan("");
  std::string error;
  std::vector<std::pair<double, double>> profile;  // (r, u) samples for plotting
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Rows in grid order: n, kappa, p, q, r, lambda, u0, R (R varies fastest).
SweepResult run_sweep(const SweepConfig& config, unsigned jobs = 1);

void write_sweep_csv(std::ostream& out, const SweepResult& result, bool timestamp);

std::string fitted_c_svg(const SweepResult& result);
std::string profiles_svg(const SweepResult& result);

/// Spread of fitted_C and the largest Harnack exponent per family (rows that
/// differ only in R). Families with lambda = 0 are compared against
/// config.stability_factor.
std::string stability_summary(const SweepConfig& config, const SweepResult& result);

}  // namespace quasieig
