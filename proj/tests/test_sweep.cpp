#include <doctest.h>

#include <sstream>

#include "quasieig/sweep.hpp"

using namespace quasieig;

namespace {

std::string csv(const SweepResult& r) {
  std::ostringstream os;
  write_sweep_csv(os, r, false);
  return os.str();
}

SweepConfig from_text(const std::string& text) {
  std::istringstream in(text);
  auto c = parse_config(in);
  REQUIRE(c.sweep);
  return *c.sweep;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string field(const std::string& line, std::size_t k) {
  std::istringstream in(line);
  std::string f;
  for (std::size_t i = 0; i <= k; ++i) std::getline(in, f, ',');
  return f;
}

}  // namespace

TEST_CASE("grid syntax") {
  CHECK(parse_grid("1, 2,3") == std::vector<double>{1, 2, 3});
  CHECK(parse_grid("linspace(0, 1, 3)") == std::vector<double>{0, 0.5, 1});
  const auto g = parse_grid("geomspace(1, 64, 7)");
  REQUIRE(g.size() == 7);
  CHECK(g[3] == doctest::Approx(8.0));
  CHECK(g.back() == 64.0);
  CHECK(parse_grid("").empty());
  CHECK_THROWS_AS(parse_grid("1, x"), ConfigError);
  CHECK_THROWS_AS(parse_grid("linspace(0, 1)"), ConfigError);
}

TEST_CASE("empty grid gives a header-only CSV") {
  auto c = from_text("[sweep]\nR =\n");
  const auto text = csv(run_sweep(c));
  const auto ls = lines(text);
  REQUIRE(ls.size() == 2);
  CHECK(ls[0] == "# quasieig sweep v1");
  CHECK(ls[1].rfind("row,family,n,kappa,", 0) == 0);
}

TEST_CASE("admissibility column flips at the closed-form threshold") {
  auto c = from_text("[sweep]\np = 2\nq = 1\nn = 3\nlambda = 1\nr = 2.5, 2.999, 3, 3.5\nsolve = false\n"
                     "negative_test = true\n");
  const auto ls = lines(csv(run_sweep(c)));
  REQUIRE(ls.size() == 6);
  CHECK(field(ls[2], 15) == "holds");
  CHECK(field(ls[3], 15) == "holds");
  CHECK(field(ls[4], 15) == "fails");
  CHECK(field(ls[5], 15) == "fails");
  for (int i = 2; i < 6; ++i) CHECK((field(ls[i], 15) == "holds") == (field(ls[i], 16) == "admissible"));
}

TEST_CASE("1/r annulus family gives fitted C = 1/3 on every row") {
  auto c = from_text("[sweep]\nfamily = annulus\nn = 3\nkappa = 0\nR = 1, 2, 4, 8\n");
  const auto res = run_sweep(c);
  REQUIRE(res.rows.size() == 4);
  for (const auto& r : res.rows) {
    CHECK(r.error.empty());
    CHECK(std::abs(r.fitted_C - 1.0 / 3) < 1e-8);
  }
  CHECK(stability_summary(c, res).find("PASS") != std::string::npos);
}

TEST_CASE("inadmissible rows are recorded, not fatal") {
  auto c = from_text("[sweep]\np = 2\nq = 1\nn = 3\nlambda = 1\nr = 1, 4\nR = 2\n");
  const auto res = run_sweep(c);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].error.empty());
  CHECK(res.rows[0].status == "completed");
  CHECK(res.rows[1].error.find("not admissible") != std::string::npos);
  CHECK(res.rows[1].status.empty());
}

TEST_CASE("output does not depend on the number of workers") {
  auto c = from_text("[sweep]\np = 1.5, 2, 3\nq = 1\nn = 3\nlambda = 1, -1\nr = 1.5\nR = 1, 2\n"
                     "liouville_R_max = 100\nnegative_test = true\n");
  const auto one = csv(run_sweep(c, 1));
  CHECK(one == csv(run_sweep(c, 4)));
  CHECK(one == csv(run_sweep(c, 1)));
}

TEST_CASE("SVG output is well formed") {
  auto c = from_text("[sweep]\nfamily = annulus\nn = 3\nR = 1, 2\n");
  const auto res = run_sweep(c);
  for (const auto& svg : {fitted_c_svg(res), profiles_svg(res)}) {
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
  }
}

TEST_CASE("config errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
  };
  CHECK_THROWS_AS(parse("[sweep]\nfamily = torus\n"), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nn = 3\nphi = pow(t, x)\na = pow(t, 0)\npsi = pow(t, 0)\n"), ConfigError);
  CHECK_THROWS_AS(parse("[problem]\nn = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[solver]\nabs_tol = -1\n"), ConfigError);
  const auto c = parse("[problem]\nn = 3\nlambda = -1\np = 3\nterms = 1:1, 2:2\nr = 4\n[geometry]\nkappa = 1\n");
  REQUIRE(c.problem);
  REQUIRE(c.problem->poly);
  CHECK(c.problem->poly->terms.size() == 2);
  CHECK(c.problem->spec.K() == 2.0);
}
