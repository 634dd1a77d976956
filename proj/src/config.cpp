#include "quasieig/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace quasieig {

namespace pt = boost::property_tree;

namespace {

double to_number(const std::string& raw, const std::string& key) {
  const std::string s = boost::trim_copy(raw);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) throw ConfigError("'" + key + "': not a number: '" + s + "'");
  return v;
}

std::optional<std::string> get(const pt::ptree& t, const std::string& path) {
  if (auto v = t.get_optional<std::string>(path)) return boost::trim_copy(*v);
  return std::nullopt;
}

double number_or(const pt::ptree& t, const std::string& path, double fallback) {
  auto v = get(t, path);
  return v ? to_number(*v, path) : fallback;
}

double required_number(const pt::ptree& t, const std::string& path) {
  auto v = get(t, path);
  if (!v) throw ConfigError("missing key '" + path + "'");
  return to_number(*v, path);
}

bool flag_or(const pt::ptree& t, const std::string& path, bool fallback) {
  auto v = get(t, path);
  if (!v) return fallback;
  const std::string s = boost::to_lower_copy(*v);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError("'" + path + "': expected true or false");
}

int to_dimension(double v, const std::string& key) {
  if (v != std::floor(v) || v < 2 || v > 1000) throw ConfigError("'" + key + "': dimension must be an integer >= 2");
  return static_cast<int>(v);
}

ScalarFunc func(const pt::ptree& t, const std::string& path) {
  auto v = get(t, path);
  if (!v) throw ConfigError("missing key '" + path + "'");
  try {
    return parse_scalar_func(*v);
  } catch (const ParseError& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

std::vector<PolyTerm> parse_terms(const std::string& text) {
  std::vector<PolyTerm> out;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& part : parts) {
    std::vector<std::string> ab;
    boost::split(ab, part, boost::is_any_of(":"));
    if (ab.size() != 2) throw ConfigError("'problem.terms': expected 'a:q' pairs, got '" + part + "'");
    out.push_back({to_number(ab[0], "problem.terms"), to_number(ab[1], "problem.terms")});
  }
  return out;
}

LambdaSign sign_of(double lambda) {
  return lambda > 0.0 ? LambdaSign::nonneg : lambda < 0.0 ? LambdaSign::nonpos : LambdaSign::zero;
}

ProblemConfig parse_problem(const pt::ptree& t) {
  const int n = to_dimension(required_number(t, "problem.n"), "problem.n");
  const double lambda = number_or(t, "problem.lambda", 0.0);
  const double kappa = number_or(t, "geometry.kappa", 0.0);
  try {
    ModelGeometry geometry(n, kappa);
    if (get(t, "problem.p")) {
      PolyPLaplaceSpec poly{required_number(t, "problem.p"),
                            parse_terms(get(t, "problem.terms").value_or("1:1")),
                            number_or(t, "problem.r", 1.0), sign_of(lambda), n};
      return {geometry, to_problem_spec(poly, lambda, geometry.K()), poly};
    }
    ProblemSpec spec(n, geometry.K(), lambda, func(t, "problem.phi"), func(t, "problem.a"), func(t, "problem.psi"));
    return {geometry, std::move(spec), std::nullopt};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[problem]: ") + e.what());
  }
}

std::vector<Ball> parse_balls(const std::string& text) {
  std::vector<Ball> out;
  if (text.empty()) return out;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& part : parts) {
    std::vector<std::string> cr;
    boost::split(cr, part, boost::is_any_of(":"));
    if (cr.size() != 2) throw ConfigError("'verify.balls': expected 'center:radius' pairs");
    out.push_back({to_number(cr[0], "verify.balls"), to_number(cr[1], "verify.balls")});
  }
  return out;
}

std::vector<double> grid_or(const pt::ptree& t, const std::string& key, std::vector<double> fallback) {
  auto v = get(t, key);
  if (!v) return fallback;
  try {
    return parse_grid(*v);
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

}  // namespace

std::vector<double> parse_grid(const std::string& raw) {
  const std::string text = boost::trim_copy(raw);
  std::vector<double> out;
  if (text.empty()) return out;
  for (const std::string fn : {"linspace", "geomspace"}) {
    if (!boost::starts_with(text, fn)) continue;
    if (text.back() != ')' || text.size() <= fn.size() + 1 || text[fn.size()] != '(')
      throw ConfigError("malformed " + fn + "(a, b, k)");
    std::vector<std::string> args;
    const std::string inner = text.substr(fn.size() + 1, text.size() - fn.size() - 2);
    boost::split(args, inner, boost::is_any_of(","));
    if (args.size() != 3) throw ConfigError(fn + " takes three arguments");
    const double a = to_number(args[0], fn), b = to_number(args[1], fn), kd = to_number(args[2], fn);
    if (kd != std::floor(kd) || kd < 1) throw ConfigError(fn + ": count must be a positive integer");
    const int k = static_cast<int>(kd);
    if (fn == "geomspace" && !(a > 0 && b > 0)) throw ConfigError("geomspace needs positive ends");
    for (int i = 0; i < k; ++i) {
      const double x = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
      out.push_back(fn == "linspace" ? a + (b - a) * x : a * std::pow(b / a, x));
    }
    if (k > 1) out.back() = b;
    return out;
  }
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto& part : parts) out.push_back(to_number(part, "grid"));
  return out;
}

void SweepConfig::validate() const {
  if (family != "ivp" && family != "annulus") throw ConfigError("sweep.family must be 'ivp' or 'annulus'");
  for (double v : n)
    if (v != std::floor(v) || v < 2) throw ConfigError("sweep.n entries must be integers >= 2");
  for (double v : kappa)
    if (!(v >= 0.0)) throw ConfigError("sweep.kappa entries must be >= 0");
  for (double v : R)
    if (!(v > 0.0)) throw ConfigError("sweep.R entries must be > 0");
  for (double v : u0)
    if (!(v > 0.0)) throw ConfigError("sweep.u0 entries must be > 0");
  if (family == "annulus" && !(center_factor > 2.0)) throw ConfigError("sweep.center_factor must exceed 2 for annulus");
  if (!(stability_factor >= 1.0)) throw ConfigError("sweep.stability_factor must be >= 1");
}

Config parse_config(std::istream& in) {
  pt::ptree t;
  try {
    pt::read_ini(in, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  Config c;
  c.solver.tol.abs = number_or(t, "solver.abs_tol", c.solver.tol.abs);
  c.solver.tol.rel = number_or(t, "solver.rel_tol", c.solver.tol.rel);
  c.solver.max_step_fraction = number_or(t, "solver.max_step_fraction", c.solver.max_step_fraction);
  if (!(c.solver.tol.abs > 0) || !(c.solver.tol.rel > 0) || !(c.solver.max_step_fraction > 0))
    throw ConfigError("[solver]: tolerances must be positive");

  if (t.get_child_optional("problem")) c.problem = parse_problem(t);

  c.solve.mode = get(t, "solve.mode").value_or("ivp");
  if (c.solve.mode != "ivp" && c.solve.mode != "annulus") throw ConfigError("solve.mode must be 'ivp' or 'annulus'");
  c.solve.u0 = number_or(t, "solve.u0", 1.0);
  c.solve.R = number_or(t, "solve.R", 1.0);
  c.solve.R1 = number_or(t, "solve.R1", 1.0);
  c.solve.R2 = number_or(t, "solve.R2", 2.0);
  c.solve.u1 = number_or(t, "solve.u1", 1.0);
  c.solve.u2 = number_or(t, "solve.u2", 1.0);

  c.eigen.R = number_or(t, "eigen.R", 1.0);
  c.eigen.u0 = number_or(t, "eigen.u0", 1.0);
  c.eigen.lambda_lo = number_or(t, "eigen.lambda_lo", 0.0);
  c.eigen.lambda_hi = number_or(t, "eigen.lambda_hi", 0.0);

  c.verify.balls = parse_balls(get(t, "verify.balls").value_or(""));
  c.verify.liouville_R_max = number_or(t, "verify.liouville_R_max", 0.0);
  c.verify.growth_bound = number_or(t, "verify.growth_bound", 1e6);

  if (t.get_child_optional("sweep")) {
    SweepConfig s;
    s.family = get(t, "sweep.family").value_or("ivp");
    s.p = grid_or(t, "sweep.p", {2.0});
    s.q = grid_or(t, "sweep.q", {1.0});
    s.r = grid_or(t, "sweep.r", {1.0});
    s.lambda = grid_or(t, "sweep.lambda", {0.0});
    s.n = grid_or(t, "sweep.n", {3.0});
    s.kappa = grid_or(t, "sweep.kappa", {0.0});
    s.u0 = grid_or(t, "sweep.u0", {1.0});
    s.R = grid_or(t, "sweep.R", {1.0});
    s.center_factor = number_or(t, "sweep.center_factor", 4.0);
    s.solve = flag_or(t, "sweep.solve", true);
    s.negative_test = flag_or(t, "sweep.negative_test", false);
    s.liouville_R_max = number_or(t, "sweep.liouville_R_max", 0.0);
    s.growth_bound = number_or(t, "sweep.growth_bound", 1e6);
    s.stability_factor = number_or(t, "sweep.stability_factor", 4.0);
    s.plots = flag_or(t, "sweep.plots", true);
    s.solver = c.solver;
    s.validate();
    c.sweep = std::move(s);
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace quasieig
