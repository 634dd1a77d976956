#include "quasieig/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace quasieig {

namespace {

struct GridPoint {
  int n;
  double kappa, p, q, r, lambda, u0, R;
};

std::vector<GridPoint> expand(const SweepConfig& c) {
  std::vector<GridPoint> out;
  const bool annulus = c.family == "annulus";
  const std::vector<double> one{1.0}, zero{0.0};
  const auto& qs = annulus ? one : c.q;
  const auto& rs = annulus ? one : c.r;
  const auto& ls = annulus ? zero : c.lambda;
  const auto& us = annulus ? one : c.u0;
  for (double n : c.n)
    for (double kappa : c.kappa)
      for (double p : c.p)
        for (double q : qs)
          for (double r : rs)
            for (double lambda : ls)
              for (double u0 : us)
                for (double R : c.R) out.push_back({static_cast<int>(n), kappa, p, q, r, lambda, u0, R});
  return out;
}

LambdaSign sign_of(double lambda) {
  return lambda > 0.0 ? LambdaSign::nonneg : lambda < 0.0 ? LambdaSign::nonpos : LambdaSign::zero;
}

void append_error(SweepRow& row, const std::string& what) {
  if (!row.error.empty()) row.error += "; ";
  row.error += what;
}

void sample_profile(SweepRow& row, const RadialSolution& sol) {
  constexpr std::size_t kSamples = 120;
  const double lo = sol.r().front(), hi = sol.r().back();
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / (kSamples - 1);
    row.profile.emplace_back(r, sol.state_at(r).u);
  }
}

void measure(SweepRow& row, const RadialSolution& sol, Ball ball) {
  try {
    const auto g = gradient_estimate_check(sol, ball);
    row.sup_ratio = g.sup_ratio;
    row.bound_shape = g.bound_shape;
    row.fitted_C = g.fitted_C;
  } catch (const std::exception& e) {
    append_error(row, std::string("gradient: ") + e.what());
  }
  try {
    const auto h = harnack_check(sol, ball);
    row.harnack_ratio = h.ratio;
    row.harnack_exponent = h.exponent;
  } catch (const std::exception& e) {
    append_error(row, std::string("harnack: ") + e.what());
  }
}

SweepRow run_row(const SweepConfig& c, std::size_t index, const GridPoint& g) {
  SweepRow row;
  row.index = index;
  row.family = c.family;
  row.n = g.n;
  row.kappa = g.kappa;
  row.p = g.p;
  row.q = g.q;
  row.r = g.r;
  row.lambda = g.lambda;
  row.u0 = g.u0;
  row.R = g.R;
  row.center = c.family == "annulus" ? c.center_factor * g.R : 0.0;
  try {
    const ModelGeometry geom(g.n, g.kappa);
    const PolyPLaplaceSpec poly{g.p, {{1.0, g.q}}, g.r, sign_of(g.lambda), g.n};
    const ProblemSpec spec = to_problem_spec(poly, g.lambda, geom.K());

    const auto report = full_report(spec);
    row.c1 = to_string(report.c1.verdict);
    row.c2 = to_string(report.c2.verdict);
    row.c3 = to_string(report.c3.verdict);
    row.I = to_string(report.I.cls);
    row.admissible = to_string(report.overall);
    row.gamma = report.c2.gamma;
    row.Theta = report.c3.Theta;
    try {
      row.thm4 = thm4_range(poly).admissible ? "admissible" : "inadmissible";
    } catch (const PreconditionError&) {
      row.thm4 = "precondition_failed";
    }

    if (!c.solve) return row;
    if (report.overall == Verdict::fails && !c.negative_test) {
      append_error(row, "not admissible (set negative_test = true to solve anyway)");
      return row;
    }

    if (c.family == "annulus") {
      const double lo = row.center - 2.0 * g.R, hi = row.center + 2.0 * g.R;
      const double u_lo = fundamental_profile(geom, spec, lo), u_hi = fundamental_profile(geom, spec, hi);
      const auto sol = solve_annulus(geom, spec, lo, hi, u_lo, u_hi, c.solver);
      row.status = to_string(sol.status());
      sample_profile(row, sol);
      measure(row, sol, {row.center, g.R});
    } else {
      const auto sol = solve_ivp(geom, spec, g.u0, g.R, c.solver);
      row.status = to_string(sol.status());
      row.event_radius = sol.event_radius();
      sample_profile(row, sol);
      measure(row, sol, {0.0, 0.5 * g.R});
    }

    if (c.liouville_R_max > 0.0 && g.kappa == 0.0 && g.lambda != 0.0) {
      const auto l = liouville_probe(spec, g.u0, c.liouville_R_max, c.growth_bound, c.solver);
      row.liouville = to_string(l.outcome);
      row.liouville_radius = l.radius;
    }
  } catch (const std::exception& e) {
    append_error(row, e.what());
  }
  return row;
}

std::string cell(double x) { return std::isnan(x) ? std::string() : format_double(x); }

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::string family_key(const SweepRow& r) {
  std::ostringstream os;
  os << r.family << " n=" << r.n << " kappa=" << format_double(r.kappa) << " p=" << format_double(r.p);
  if (r.family == "ivp")
    os << " q=" << format_double(r.q) << " r=" << format_double(r.r) << " lambda=" << format_double(r.lambda)
       << " u0=" << format_double(r.u0);
  return os.str();
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Line plot with optional log10 axes; non-finite points are dropped.
std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, bool logx, bool logy, bool markers) {
  constexpr double W = 720, H = 460, L = 80, Rm = 230, T = 40, B = 60;
  auto tx = [&](double x) { return logx ? std::log10(x) : x; };
  auto ty = [&](double y) { return logy ? std::log10(y) : y; };
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  std::vector<Series> clean;
  for (const auto& s : series) {
    Series c{s.label, {}};
    for (auto [x, y] : s.points) {
      const double X = tx(x), Y = ty(y);
      if (!std::isfinite(X) || !std::isfinite(Y)) continue;
      c.points.emplace_back(X, Y);
      x0 = std::min(x0, X), x1 = std::max(x1, X), y0 = std::min(y0, Y), y1 = std::max(y1, Y);
    }
    if (!c.points.empty()) clean.push_back(std::move(c));
  }
  if (clean.empty()) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto px = [&](double X) { return L + (X - x0) / (x1 - x0) * (W - L - Rm); };
  auto py = [&](double Y) { return H - B - (Y - y0) / (y1 - y0) * (H - T - B); };
  auto label = [](double v, bool lg) { return format_double(lg ? std::pow(10.0, v) : v); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - Rm << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double X = x0 + (x1 - x0) * i / 4, Y = y0 + (y1 - y0) * i / 4;
    os << "<text x=\"" << fmt(px(X)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
       << label(X, logx).substr(0, 10) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << fmt(py(Y) + 4) << "\" text-anchor=\"end\">"
       << label(Y, logy).substr(0, 10) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - Rm) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << xlabel
     << "</text>\n"
     << "<text transform=\"translate(18," << (T + H - B) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel
     << "</text>\n";
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const char* color = kPalette[i % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [X, Y] : clean[i].points) os << fmt(px(X)) << "," << fmt(py(Y)) << " ";
    os << "\"/>\n";
    if (markers)
      for (auto [X, Y] : clean[i].points)
        os << "<circle cx=\"" << fmt(px(X)) << "\" cy=\"" << fmt(py(Y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    if (i < 20)
      os << "<text x=\"" << W - Rm + 10 << "\" y=\"" << T + 14 * (i + 1) << "\" fill=\"" << color
         << "\" font-size=\"10\">" << clean[i].label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, unsigned jobs) {
  config.validate();
  const auto grid = expand(config);
  SweepResult result;
  result.rows.resize(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) result.rows[i] = run_row(config, i, grid[i]);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, bool timestamp) {
  out << "# " << kSweepSchema << "\n";
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out << "# generated " << buf << "\n";
  }
  for (std::size_t i = 0; i < kSweepColumns.size(); ++i) out << (i ? "," : "") << kSweepColumns[i];
  out << "\n";
  for (const auto& r : result.rows) {
    out << r.index << ',' << cell(r.family) << ',' << r.n << ',' << cell(r.kappa) << ',' << cell(r.p) << ','
        << cell(r.q) << ',' << cell(r.r) << ',' << cell(r.lambda) << ',' << cell(r.u0) << ',' << cell(r.R) << ','
        << cell(r.center) << ',' << cell(r.c1) << ',' << cell(r.c2) << ',' << cell(r.c3) << ',' << cell(r.I) << ','
        << cell(r.admissible) << ',' << cell(r.thm4) << ',' << cell(r.gamma) << ',' << cell(r.Theta) << ','
        << cell(r.status) << ',' << cell(r.event_radius) << ',' << cell(r.sup_ratio) << ','
        << cell(r.bound_shape) << ',' << cell(r.fitted_C) << ',' << cell(r.harnack_ratio) << ','
        << cell(r.harnack_exponent) << ',' << cell(r.liouville) << ',' << cell(r.liouville_radius) << ','
        << cell(r.error) << '\n';
  }
}

std::string fitted_c_svg(const SweepResult& result) {
  std::vector<Series> series;
  std::map<std::string, std::size_t> slot;
  for (const auto& r : result.rows) {
    if (std::isnan(r.fitted_C)) continue;
    const auto key = family_key(r);
    auto [it, inserted] = slot.emplace(key, series.size());
    if (inserted) series.push_back({key, {}});
    series[it->second].points.emplace_back(r.R, r.fitted_C);
  }
  return line_plot("fitted C vs R", "R", "fitted C", series, true, false, true);
}

std::string profiles_svg(const SweepResult& result) {
  std::vector<Series> series;
  for (const auto& r : result.rows) {
    if (r.profile.empty()) continue;
    series.push_back({family_key(r) + " R=" + format_double(r.R), r.profile});
  }
  return line_plot("radial profiles", "r", "u", series, false, true, false);
}

std::string stability_summary(const SweepConfig& config, const SweepResult& result) {
  struct Acc {
    double lambda = 0;
    double cmin = kInf, cmax = -kInf, hmax = -kInf;
    std::size_t rows = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const auto& r : result.rows) {
    const auto key = family_key(r);
    auto [it, inserted] = acc.emplace(key, Acc{});
    if (inserted) order.push_back(key);
    auto& a = it->second;
    a.lambda = r.lambda;
    if (std::isfinite(r.fitted_C)) {
      a.cmin = std::min(a.cmin, r.fitted_C), a.cmax = std::max(a.cmax, r.fitted_C);
      ++a.rows;
    }
    if (std::isfinite(r.harnack_exponent)) a.hmax = std::max(a.hmax, r.harnack_exponent);
  }
  std::ostringstream os;
  os << "# stability factor " << format_double(config.stability_factor) << "\n";
  std::size_t unmeasured = 0;
  for (const auto& key : order) {
    const auto& a = acc.at(key);
    if (a.rows == 0) {
      ++unmeasured;
      continue;
    }
    os << key << ": ";
    const double spread = a.cmin > 0 ? a.cmax / a.cmin : kInf;
    os << "fitted_C in [" << format_double(a.cmin) << ", " << format_double(a.cmax) << "] spread "
       << format_double(spread) << ", max harnack exponent " << format_double(a.hmax);
    if (a.lambda == 0.0) os << (spread <= config.stability_factor ? " PASS" : " FAIL");
    os << "\n";
  }
  if (unmeasured) os << unmeasured << " families without gradient measurements\n";
  return os.str();
}

}  // namespace quasieig
