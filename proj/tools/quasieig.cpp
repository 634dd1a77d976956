// quasieig: admissibility checks, radial solves and sweeps from INI configs.
//
//   quasieig check|solve|eigen|verify|sweep --config <path> [--out <dir>]
//            [--no-timestamp] [--jobs N]
//
// check exits 0 / 1 / 2 for holds / fails / unknown; any error exits 3.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "quasieig/sweep.hpp"

namespace fs = std::filesystem;
using namespace quasieig;

namespace {

struct Args {
  std::string config;
  std::string out;
  bool no_timestamp = false;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config, "INI config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out, "output directory");
  cmd->add_flag("--no-timestamp", a.no_timestamp, "omit the generated-at header line");
  cmd->add_option("--jobs", a.jobs, "worker threads for sweeps")->check(CLI::Range(1u, 1024u));
}

std::string now_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Opens <out>/<name>, creating the directory; std::cout when no --out.
class Sink {
 public:
  Sink(const Args& a, const std::string& name) {
    if (a.out.empty()) return;
    fs::create_directories(a.out);
    path_ = (fs::path(a.out) / name).string();
    file_.open(path_);
    if (!file_) throw std::runtime_error("cannot write " + path_);
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void write_text(const Args& a, const std::string& name, const std::string& text) {
  fs::create_directories(a.out);
  std::ofstream f(fs::path(a.out) / name);
  if (!f) throw std::runtime_error("cannot write " + name);
  f << text;
}

const ProblemConfig& require_problem(const Config& c) {
  if (!c.problem) throw ConfigError("config has no [problem] section");
  return *c.problem;
}

// Columns: r, u, du, flux.
void write_profile(std::ostream& os, const Args& a, const std::string& command, const ProblemConfig& pc,
                   const RadialSolution& sol, const std::vector<std::pair<std::string, std::string>>& extra) {
  os << "# quasieig profile v1\n";
  if (!a.no_timestamp) os << "# generated " << now_utc() << "\n";
  os << "# command=" << command << "\n# n=" << pc.geometry.n() << "\n# kappa=" << format_double(pc.geometry.kappa())
     << "\n# lambda=" << format_double(pc.spec.lambda()) << "\n# phi=" << to_string(pc.spec.phi())
     << "\n# a=" << to_string(pc.spec.a()) << "\n# psi=" << to_string(pc.spec.psi())
     << "\n# status=" << to_string(sol.status()) << "\n# event_radius=" << format_double(sol.event_radius()) << "\n";
  for (const auto& [k, v] : extra) os << "# " << k << "=" << v << "\n";
  os << "r,u,du,flux\n";
  for (std::size_t j = 0; j < sol.r().size(); ++j)
    os << format_double(sol.r()[j]) << ',' << format_double(sol.u()[j]) << ',' << format_double(sol.du()[j]) << ','
       << format_double(sol.flux()[j]) << '\n';
}

RadialSolution solve_from(const Config& c) {
  const auto& pc = require_problem(c);
  if (c.solve.mode == "annulus")
    return solve_annulus(pc.geometry, pc.spec, c.solve.R1, c.solve.R2, c.solve.u1, c.solve.u2, c.solver);
  return solve_ivp(pc.geometry, pc.spec, c.solve.u0, c.solve.R, c.solver);
}

int cmd_check(const Args& a) {
  const auto c = load_config(a.config);
  const auto& pc = require_problem(c);
  const auto report = full_report(pc.spec);
  std::cout << to_text(pc.spec, report);
  if (!a.out.empty()) write_text(a, "check.kv", to_key_value(pc.spec, report));
  switch (report.overall) {
    case Verdict::holds: return 0;
    case Verdict::fails: return 1;
    case Verdict::unknown: return 2;
  }
  return 2;
}

int cmd_solve(const Args& a) {
  const auto c = load_config(a.config);
  const auto sol = solve_from(c);
  Sink sink(a, "solve.csv");
  std::vector<std::pair<std::string, std::string>> extra{{"mode", c.solve.mode}};
  write_profile(sink.stream(), a, "solve", *c.problem, sol, extra);
  if (!sink.path().empty())
    std::cout << "status " << to_string(sol.status()) << ", " << sol.r().size() << " points -> " << sink.path()
              << "\n";
  return 0;
}

int cmd_eigen(const Args& a) {
  const auto c = load_config(a.config);
  const auto& pc = require_problem(c);
  const auto res = solve_eigen(pc.geometry, pc.spec, c.eigen.R, c.eigen.u0, {c.eigen.lambda_lo, c.eigen.lambda_hi},
                               c.solver);
  std::cout << "lambda " << format_double(res.lambda) << " (" << res.iterations << " bisection steps)\n";
  if (!a.out.empty()) {
    Sink sink(a, "eigen.csv");
    write_profile(sink.stream(), a, "eigen", pc, res.solution,
                  {{"eigenvalue", format_double(res.lambda)}, {"R", format_double(c.eigen.R)}});
  }
  return 0;
}

int cmd_verify(const Args& a) {
  const auto c = load_config(a.config);
  const auto& pc = require_problem(c);
  const auto sol = solve_from(c);
  std::ostringstream os;
  os << "status " << to_string(sol.status()) << "\n";
  for (const auto& b : c.verify.balls) {
    os << "ball center=" << format_double(b.center) << " R=" << format_double(b.radius) << ": ";
    try {
      const auto g = gradient_estimate_check(sol, b);
      const auto h = harnack_check(sol, b);
      os << "sup_ratio=" << format_double(g.sup_ratio) << " bound_shape=" << format_double(g.bound_shape)
         << " fitted_C=" << format_double(g.fitted_C) << " harnack_ratio=" << format_double(h.ratio)
         << " harnack_exponent=" << format_double(h.exponent) << "\n";
    } catch (const std::exception& e) {
      os << "error: " << e.what() << "\n";
    }
  }
  if (c.verify.liouville_R_max > 0.0) {
    const auto l = liouville_probe(pc.spec, c.solve.u0, c.verify.liouville_R_max, c.verify.growth_bound, c.solver);
    os << "liouville " << to_string(l.outcome) << " radius=" << format_double(l.radius) << ": " << l.detail << "\n";
  }
  std::cout << os.str();
  if (!a.out.empty()) write_text(a, "verify.txt", os.str());
  return 0;
}

int cmd_sweep(const Args& a) {
  const auto c = load_config(a.config);
  if (!c.sweep) throw ConfigError("config has no [sweep] section");
  const auto result = run_sweep(*c.sweep, a.jobs);
  Args out = a;
  if (out.out.empty()) out.out = ".";
  {
    Sink sink(out, "sweep.csv");
    write_sweep_csv(sink.stream(), result, !a.no_timestamp);
  }
  const auto summary = stability_summary(*c.sweep, result);
  write_text(out, "summary.txt", summary);
  if (c.sweep->plots) {
    write_text(out, "fitted_C.svg", fitted_c_svg(result));
    write_text(out, "profiles.svg", profiles_svg(result));
  }
  std::cout << result.rows.size() << " rows -> " << (fs::path(out.out) / "sweep.csv").string() << "\n" << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasieig: structure conditions and radial solutions of quasilinear eigenproblems"};
  app.require_subcommand(1);
  Args args;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Args&);
  };
  const Entry entries[] = {
      {"check", "check the structure conditions of [problem]", cmd_check},
      {"solve", "solve the radial IVP or annulus problem of [solve]", cmd_solve},
      {"eigen", "principal Dirichlet eigenvalue on the ball of [eigen]", cmd_eigen},
      {"verify", "gradient, Harnack and Liouville probes of [verify]", cmd_verify},
      {"sweep", "run the [sweep] grid", cmd_sweep},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Args&)>> subs;
  for (const auto& e : entries) {
    auto* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, args);
    subs.emplace_back(cmd, e.run);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  try {
    for (auto& [cmd, run] : subs)
      if (cmd->parsed()) return run(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
