#include "quasieig/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quasieig {

namespace {

constexpr std::size_t kWitnessPoints = 200;
constexpr double kWitnessMin = 1e-8;
constexpr double kWitnessMax = 1e8;

// Degree data of one argument axis, sampled on the witness grid plus the two
// limits t -> 0+ and t -> inf.
struct AxisSample {
  double degree;
  double slope;
};

std::vector<AxisSample> axis_samples(const ScalarFunc& f) {
  std::vector<AxisSample> out;
  auto push = [&](double d, double s) {
    if (std::isfinite(d) && std::isfinite(s)) out.push_back({d, s});
  };
  const auto z = degree_limit_at_zero(f);
  push(z.degree, z.slope);
  for (double t : log_grid(kWitnessMin, kWitnessMax, kWitnessPoints)) {
    try {
      push(degree(f, t), degree_slope(f, t));
    } catch (const DomainError&) {
    }
  }
  const auto i = degree_limit_at_infinity(f);
  push(i.degree, i.slope);
  return out;
}

// s-axis samples carry both a and psi at the same s.
struct SAxisSample {
  double delta_a;
  double slope_a;
  double delta_psi;
};

std::vector<SAxisSample> s_axis_samples(const ProblemSpec& spec) {
  std::vector<SAxisSample> out;
  auto push = [&](DegreeLimit a, DegreeLimit psi) {
    if (std::isfinite(a.degree) && std::isfinite(a.slope) && std::isfinite(psi.degree))
      out.push_back({a.degree, a.slope, psi.degree});
  };
  push(degree_limit_at_zero(spec.a()), degree_limit_at_zero(spec.psi()));
  for (double s : log_grid(kWitnessMin, kWitnessMax, kWitnessPoints)) {
    try {
      push({degree(spec.a(), s), degree_slope(spec.a(), s)}, {degree(spec.psi(), s), 0.0});
    } catch (const DomainError&) {
    }
  }
  push(degree_limit_at_infinity(spec.a()), degree_limit_at_infinity(spec.psi()));
  return out;
}

double min_square(double lo, double hi) {
  if (lo <= 0.0 && hi >= 0.0) return 0.0;
  return std::min(lo * lo, hi * hi);
}

double bracket_value(int n, double d_phi, double d_a, double d_psi) {
  const double nm1 = n - 1.0;
  return 2.0 * (d_phi + d_a + 1.0) / nm1 + d_phi + d_a - d_psi;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Verdict combine(std::initializer_list<Verdict> vs) {
  bool unknown = false;
  for (auto v : vs) {
    if (v == Verdict::fails) return Verdict::fails;
    if (v == Verdict::unknown) unknown = true;
  }
  return unknown ? Verdict::unknown : Verdict::holds;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(IClass c) {
  switch (c) {
    case IClass::all: return "all";
    case IClass::empty: return "empty";
    case IClass::mixed: return "mixed";
  }
  return "mixed";
}

ProblemSpec::ProblemSpec(int n, double K, double lambda, ScalarFunc phi, ScalarFunc a, ScalarFunc psi)
    : n_(n), K_(K), lambda_(lambda), phi_(std::move(phi)), a_(std::move(a)), psi_(std::move(psi)) {
  if (n_ < 2) throw std::invalid_argument("dimension n must be >= 2");
  if (!(K_ >= 0.0) || !std::isfinite(K_)) throw std::invalid_argument("K must be finite and >= 0");
  if (!std::isfinite(lambda_)) throw std::invalid_argument("lambda must be finite");
  if (!phi_.certified_positive()) throw std::invalid_argument("phi is not certifiably positive on (0, inf)");
  if (!a_.certified_positive()) throw std::invalid_argument("a is not certifiably positive on (0, inf)");
  if (!psi_.certified_positive()) throw std::invalid_argument("psi is not certifiably positive on (0, inf)");
}

double ProblemSpec::b(double s) const {
  if (lambda_ == 0.0) return 0.0;
  return lambda_ * std::exp(log_eval(psi_, s) - log_eval(a_, s));
}

ProblemSpec ProblemSpec::with_lambda(double lambda) const {
  return ProblemSpec(n_, K_, lambda, phi_, a_, psi_);
}

ProblemSpec ProblemSpec::with_K(double K) const { return ProblemSpec(n_, K, lambda_, phi_, a_, psi_); }

void PolyPLaplaceSpec::validate() const {
  if (!(p > 1.0)) throw std::invalid_argument("p must be > 1");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (terms.empty()) throw std::invalid_argument("at least one term a_i u^{q_i} is required");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!(terms[i].a * terms[i].q > 0.0)) throw std::invalid_argument("each term needs a_i q_i > 0");
    if (i > 0 && !(terms[i].q > terms[i - 1].q))
      throw std::invalid_argument("exponents q_i must be strictly increasing");
  }
  if (!std::isfinite(r)) throw std::invalid_argument("r must be finite");
}

ProblemSpec to_problem_spec(const PolyPLaplaceSpec& poly, double lambda, double K) {
  poly.validate();
  const bool consistent = (poly.lambda_sign == LambdaSign::nonneg && lambda >= 0.0) ||
                          (poly.lambda_sign == LambdaSign::nonpos && lambda <= 0.0) ||
                          (poly.lambda_sign == LambdaSign::zero && lambda == 0.0);
  if (!consistent) throw std::invalid_argument("lambda does not match the declared sign");
  std::vector<Monomial> base;
  for (const auto& t : poly.terms) base.push_back({t.a * t.q, (t.q - 1.0) / 2.0});
  return ProblemSpec(poly.n, K, lambda, MonomialSum::power((poly.p - 2.0) / 2.0),
                     PowerOfMonomialSum{MonomialSum(std::move(base)), poly.p - 1.0},
                     MonomialSum::power((poly.r - 1.0) / 2.0));
}

std::optional<PolyPLaplaceSpec> match_poly(const ProblemSpec& spec) {
  const auto* phi = std::get_if<MonomialSum>(&spec.phi().variant());
  if (!phi || phi->size() != 1) return std::nullopt;
  const double p = 2.0 * phi->terms()[0].exponent + 2.0;
  if (!(p > 1.0)) return std::nullopt;

  const auto* psi = std::get_if<MonomialSum>(&spec.psi().variant());
  if (!psi || psi->size() != 1) return std::nullopt;
  const double r = 2.0 * psi->terms()[0].exponent + 1.0;

  // Base sum B with a = B^{p-1}; constant factors are irrelevant.
  std::optional<std::vector<Monomial>> base;
  auto single = [&](double coeff, double exponent) {
    base = std::vector<Monomial>{{std::pow(coeff, 1.0 / (p - 1.0)), exponent / (p - 1.0)}};
  };
  if (const auto* a = std::get_if<MonomialSum>(&spec.a().variant())) {
    if (a->size() == 1) single(a->terms()[0].coeff, a->terms()[0].exponent);
    else if (std::abs(p - 2.0) <= 1e-14) base.emplace(a->terms().begin(), a->terms().end());
  } else if (const auto* a = std::get_if<PowerOfMonomialSum>(&spec.a().variant())) {
    if (std::abs(a->power - (p - 1.0)) <= 1e-12 * std::max(1.0, p))
      base.emplace(a->base.terms().begin(), a->base.terms().end());
    else if (a->base.size() == 1)
      single(std::pow(a->base.terms()[0].coeff, a->power), a->base.terms()[0].exponent * a->power);
  }
  if (!base) return std::nullopt;

  PolyPLaplaceSpec out{p, {}, r, LambdaSign::zero, spec.n()};
  for (const auto& m : *base) {
    const double q = 2.0 * m.exponent + 1.0;
    if (q == 0.0 || !(m.coeff > 0.0)) return std::nullopt;
    out.terms.push_back({m.coeff / q, q});
  }
  if (spec.lambda() > 0.0) out.lambda_sign = LambdaSign::nonneg;
  else if (spec.lambda() < 0.0) out.lambda_sign = LambdaSign::nonpos;
  return out;
}

double c2_expression(const ProblemSpec& spec, double s, double t) {
  const double x = degree(spec.phi(), t) + degree(spec.a(), s) + 1.0;
  return x * x / (spec.n() - 1.0) - 2.0 * degree_slope(spec.phi(), t) - 2.0 * degree_slope(spec.a(), s);
}

double bracket(const ProblemSpec& spec, double s, double t) {
  return bracket_value(spec.n(), degree(spec.phi(), t), degree(spec.a(), s), degree(spec.psi(), s));
}

C1Result check_c1(const ProblemSpec& spec) {
  const auto b1 = degree_bounds(spec.phi(), 1);
  const auto b2 = degree_bounds(spec.phi(), 2);
  C1Result out{Verdict::unknown, b1.inf, b1.sup, b1.certified, {}};
  if (!b1.certified) {
    out.notes.push_back("C1: degree bounds of phi are sampled, not certified (grid inf " + num(b1.inf) + ")");
    return out;
  }
  // Certified first-order bounds of the family are limits of delta_phi, so
  // an infimum <= -1 rules out every l_phi > -1.
  if (!(b1.inf > -1.0)) {
    out.verdict = Verdict::fails;
    out.notes.push_back("C1: inf delta_phi = " + num(b1.inf) + " is not > -1");
    return out;
  }
  if (!b1.finite() || (b2.certified && !b2.finite())) {
    out.verdict = Verdict::fails;
    out.notes.push_back("C1: phi has no finite degree (d_phi = " + num(b1.sup) + ")");
    return out;
  }
  out.verdict = Verdict::holds;
  return out;
}

C2Result check_c2(const ProblemSpec& spec) {
  const double nm1 = spec.n() - 1.0;
  const auto bphi = degree_bounds(spec.phi(), 1);
  const auto ba = degree_bounds(spec.a(), 1);
  const auto sphi = degree_slope_bounds(spec.phi());
  const auto sa = degree_slope_bounds(spec.a());

  C2Result out{Verdict::unknown, -kInf, kInf, false, std::nullopt, {}};
  out.certified = bphi.certified && ba.certified && sphi.certified && sa.certified;
  if (out.certified) {
    const double sq = min_square(bphi.inf + ba.inf + 1.0, bphi.sup + ba.sup + 1.0);
    out.gamma = sq / nm1 - 2.0 * sphi.sup - 2.0 * sa.sup;
    if (std::isnan(out.gamma)) out.gamma = -kInf;
  }

  const auto ts = axis_samples(spec.phi());
  const auto ss = s_axis_samples(spec);
  for (const auto& t : ts)
    for (const auto& s : ss) {
      const double x = t.degree + s.delta_a + 1.0;
      out.gamma_witness = std::min(out.gamma_witness, x * x / nm1 - 2.0 * t.slope - 2.0 * s.slope_a);
    }

  if (out.certified && out.gamma > 0.0) {
    out.verdict = Verdict::holds;
  } else if (out.gamma_witness <= 0.0) {
    out.verdict = Verdict::fails;
    out.notes.push_back("C2: expression reaches " + num(out.gamma_witness) + " <= 0 at a sampled point");
  } else {
    out.notes.push_back(std::string("C2: ") + (out.certified ? "certified bound " + num(out.gamma) + " <= 0"
                                                             : "bounds not certified") +
                        ", grid minimum " + num(out.gamma_witness));
  }

  if (auto poly = match_poly(spec)) {
    const double p = poly->p;
    const double q1 = poly->terms.front().q, qm = poly->terms.back().q;
    out.gamma_poly = 4.0 * q1 * q1 * (p - 1.0) * (p - 1.0) / (nm1 * nm1) - 2.0 * (qm - q1) * (qm - q1) * (p - 1.0) / nm1;
    if (std::abs(*out.gamma_poly - out.gamma) > 1e-12 * std::max(1.0, std::abs(out.gamma)))
      out.notes.push_back("C2: polynomial-operator closed form " + num(*out.gamma_poly) +
                          " differs from the C2 bound " + num(out.gamma) +
                          " (it equals 4 gamma/(n-1) when q_1 > 0, the C3 threshold)");
  }
  return out;
}

IResult classify_I(const ProblemSpec& spec) {
  const int n = spec.n();
  const double nm1 = n - 1.0;
  const double c = 2.0 / nm1 + 1.0;
  const auto bphi = degree_bounds(spec.phi(), 1);
  const auto ba = degree_bounds(spec.a(), 1);
  const auto bpsi = degree_bounds(spec.psi(), 1);

  IResult out{IClass::mixed, 0.0, 0.0, bphi.certified && ba.certified && bpsi.certified, {}};
  out.bracket_lo = c * (bphi.inf + ba.inf) + 2.0 / nm1 - bpsi.sup;
  out.bracket_hi = c * (bphi.sup + ba.sup) + 2.0 / nm1 - bpsi.inf;

  const double sigma = sign_of(spec.lambda());
  if (sigma == 0.0) {
    out.cls = IClass::all;
    out.certified = true;
    return out;
  }
  if (!out.certified) {
    out.notes.push_back("I: degree bounds not certified; classification unknown");
    return out;
  }
  const double lo = sigma > 0 ? out.bracket_lo : -out.bracket_hi;
  const double hi = sigma > 0 ? out.bracket_hi : -out.bracket_lo;
  if (lo >= 0.0) {
    out.cls = IClass::all;
    return out;
  }
  out.notes.push_back("I: membership is taken over u^2-values with B bounded jointly over (s, t)");
  if (hi < 0.0) {
    out.cls = IClass::empty;
    return out;
  }
  // With constant delta_phi the bracket does not depend on t, so I is either
  // everything or nothing; one s with b B < 0 empties it.
  if (bphi.inf == bphi.sup) {
    for (const auto& s : s_axis_samples(spec)) {
      if (sigma * bracket_value(n, bphi.inf, s.delta_a, s.delta_psi) < 0.0) {
        out.cls = IClass::empty;
        out.notes.push_back("I: bracket independent of t and negative at a sampled s; I is empty");
        return out;
      }
    }
  }
  out.notes.push_back("I: sign of b B changes over (s, t); treated as mixed");
  return out;
}

C3Result check_c3(const ProblemSpec& spec, const C2Result& c2) {
  const double nm1 = spec.n() - 1.0;
  const auto I = classify_I(spec);
  C3Result out{Verdict::unknown, kInf, 0.0, false, I.cls, I.notes};
  if (I.cls == IClass::all) {
    out.verdict = Verdict::holds;
    out.vacuous = true;
    out.Theta = 0.0;
    out.notes.push_back("C3: vacuous, I = (0, inf)");
    return out;
  }
  if (I.certified) out.Theta = std::max(I.bracket_lo * I.bracket_lo, I.bracket_hi * I.bracket_hi);

  const double threshold = 4.0 * c2.gamma / nm1;
  if (c2.verdict == Verdict::holds && I.certified && out.Theta < threshold) {
    out.verdict = Verdict::holds;
    if (I.cls == IClass::mixed) out.notes.push_back("C3: Theta bounded over all t, which covers the complement of I");
    return out;
  }

  if (I.cls == IClass::empty) {
    const auto ts = axis_samples(spec.phi());
    const auto ss = s_axis_samples(spec);
    for (const auto& t : ts)
      for (const auto& s : ss) {
        const double B = bracket_value(spec.n(), t.degree, s.delta_a, s.delta_psi);
        out.Theta_witness = std::max(out.Theta_witness, B * B);
      }
    if (out.Theta_witness >= 4.0 * c2.gamma_witness / nm1) {
      out.verdict = Verdict::fails;
      out.notes.push_back("C3: sampled B^2 = " + num(out.Theta_witness) + " >= 4 gamma/(n-1) with gamma <= " +
                          num(c2.gamma_witness));
      return out;
    }
  }
  out.notes.push_back("C3: inconclusive (Theta <= " + num(out.Theta) + ", threshold " + num(threshold) + ")");
  return out;
}

DerivedConstants derived_constants(const ProblemSpec& spec, const C1Result& c1, const C2Result& c2,
                                   const C3Result& c3) {
  if (c3.vacuous) return {c2.gamma, 0.0};
  if (c3.verdict != Verdict::holds) throw PreconditionError("derived constants need C3 to hold");
  const double theta = c2.gamma - (spec.n() - 1.0) / 4.0 * c3.Theta;
  if (!(theta > 0.0)) throw std::logic_error("theta <= 0 although C3 holds");
  return {theta, (c1.d_phi + 1.0) / (4.0 * theta) * c3.Theta};
}

Thm4Range thm4_range(const PolyPLaplaceSpec& spec) {
  spec.validate();
  const double p = spec.p;
  const double nm1 = spec.n - 1.0;
  const double q1 = spec.terms.front().q, qm = spec.terms.back().q;
  const double g_lo = (p - 1.0) * q1, g_hi = (p - 1.0) * qm;

  Thm4Range out{};
  out.gamma_c2 = min_square(g_lo, g_hi) / nm1 - (p - 1.0) * (qm - q1) * (qm - q1) / 2.0;
  if (!(out.gamma_c2 > 0.0))
    throw PreconditionError("q_1^2 (p-1)^2/(n-1) - (p-1)(q_m-q_1)^2/2 > 0 fails (value " + num(out.gamma_c2) + ")");
  out.gamma_section = 4.0 * out.gamma_c2 / nm1;
  const double root = std::sqrt(out.gamma_section);
  const double c = (spec.n + 1.0) / nm1;

  // B = c g(s) - r with g ranging over [g_lo, g_hi].
  const bool two_sided = (c * g_hi - spec.r < root) && (c * g_lo - spec.r > -root);
  switch (spec.lambda_sign) {
    case LambdaSign::nonneg:
      out.I_all = spec.r <= c * g_lo;
      out.r_threshold = c * g_lo + root;
      break;
    case LambdaSign::nonpos:
      out.I_all = spec.r >= c * g_hi;
      out.r_threshold = c * g_hi - root;
      break;
    case LambdaSign::zero:
      out.I_all = true;
      out.r_threshold = kInf;
      break;
  }
  out.admissible = out.I_all || two_sided;
  return out;
}

AdmissibilityReport full_report(const ProblemSpec& spec) {
  AdmissibilityReport rep{};
  rep.c1 = check_c1(spec);
  rep.c2 = check_c2(spec);
  rep.I = classify_I(spec);
  rep.c3 = check_c3(spec, rep.c2);

  rep.finite_degree = Verdict::holds;
  for (const ScalarFunc* f : {&spec.phi(), &spec.a()})
    for (int k : {1, 2}) {
      const auto b = degree_bounds(*f, k);
      if (b.certified && !b.finite()) {
        rep.finite_degree = Verdict::fails;
        rep.notes.push_back(std::string(f == &spec.phi() ? "phi" : "a") + " has infinite order-" +
                            std::to_string(k) + " degree");
      } else if (!b.certified && rep.finite_degree == Verdict::holds) {
        rep.finite_degree = Verdict::unknown;
      }
    }

  rep.overall = combine({rep.c1.verdict, rep.c2.verdict, rep.c3.verdict, rep.finite_degree});
  rep.theta = rep.alpha = std::nan("");
  if (rep.c3.verdict == Verdict::holds && rep.c2.verdict == Verdict::holds) {
    const auto dc = derived_constants(spec, rep.c1, rep.c2, rep.c3);
    rep.theta = dc.theta;
    rep.alpha = dc.alpha;
  }

  for (const auto* notes : {&rep.c1.notes, &rep.c2.notes, &rep.c3.notes})
    rep.notes.insert(rep.notes.end(), notes->begin(), notes->end());

  if (auto poly = match_poly(spec)) {
    rep.cross_check.performed = true;
    try {
      rep.cross_check.thm4_admissible = thm4_range(*poly).admissible;
    } catch (const PreconditionError& e) {
      rep.cross_check.thm4_admissible = false;
      rep.cross_check.detail = e.what();
    }
    const bool adm = rep.cross_check.thm4_admissible;
    rep.cross_check.agrees = !(adm && rep.overall == Verdict::fails) && !(!adm && rep.overall == Verdict::holds);
    if (!rep.cross_check.agrees)
      rep.notes.push_back("DEFECT: general checker (" + to_string(rep.overall) +
                          ") contradicts the closed-form range (admissible=" + (adm ? "true" : "false") + ")");
  }
  return rep;
}

std::string to_key_value(const ProblemSpec& spec, const AdmissibilityReport& r) {
  std::ostringstream os;
  os << "schema=quasieig-check/1\n";
  os << "n=" << spec.n() << "\nK=" << num(spec.K()) << "\nlambda=" << num(spec.lambda()) << "\n";
  os << "phi=" << to_string(spec.phi()) << "\na=" << to_string(spec.a()) << "\npsi=" << to_string(spec.psi()) << "\n";
  os << "c1.verdict=" << to_string(r.c1.verdict) << "\nc1.l_phi=" << num(r.c1.l_phi) << "\nc1.d_phi="
     << num(r.c1.d_phi) << "\n";
  os << "c2.verdict=" << to_string(r.c2.verdict) << "\nc2.gamma=" << num(r.c2.gamma)
     << "\nc2.gamma_witness=" << num(r.c2.gamma_witness) << "\n";
  if (r.c2.gamma_poly) os << "c2.gamma_poly=" << num(*r.c2.gamma_poly) << "\n";
  os << "I.class=" << to_string(r.I.cls) << "\nI.bracket_lo=" << num(r.I.bracket_lo)
     << "\nI.bracket_hi=" << num(r.I.bracket_hi) << "\n";
  os << "c3.verdict=" << to_string(r.c3.verdict) << "\nc3.Theta=" << num(r.c3.Theta)
     << "\nc3.vacuous=" << (r.c3.vacuous ? "true" : "false")
     << "\nc3.threshold=" << num(4.0 * r.c2.gamma / (spec.n() - 1.0)) << "\n";
  os << "finite_degree=" << to_string(r.finite_degree) << "\n";
  os << "theta=" << num(r.theta) << "\nalpha=" << num(r.alpha) << "\n";
  os << "overall=" << to_string(r.overall) << "\n";
  if (r.cross_check.performed) {
    os << "cross_check.thm4_admissible=" << (r.cross_check.thm4_admissible ? "true" : "false") << "\n";
    os << "cross_check.agrees=" << (r.cross_check.agrees ? "true" : "false") << "\n";
  }
  for (std::size_t i = 0; i < r.notes.size(); ++i) os << "note." << i << "=" << r.notes[i] << "\n";
  return os.str();
}

std::string to_text(const ProblemSpec& spec, const AdmissibilityReport& r) {
  std::ostringstream os;
  os << "problem: n=" << spec.n() << " K=" << num(spec.K()) << " lambda=" << num(spec.lambda()) << "\n";
  os << "  phi = " << to_string(spec.phi()) << "\n  a   = " << to_string(spec.a()) << "\n  psi = "
     << to_string(spec.psi()) << "\n";
  os << "C1  " << to_string(r.c1.verdict) << "  l_phi=" << num(r.c1.l_phi) << " d_phi=" << num(r.c1.d_phi) << "\n";
  os << "C2  " << to_string(r.c2.verdict) << "  gamma>=" << num(r.c2.gamma) << " (grid min "
     << num(r.c2.gamma_witness) << ")";
  if (r.c2.gamma_poly) os << " poly form " << num(*r.c2.gamma_poly);
  os << "\n";
  os << "I   " << to_string(r.I.cls) << "  B in [" << num(r.I.bracket_lo) << ", " << num(r.I.bracket_hi) << "]\n";
  os << "C3  " << to_string(r.c3.verdict) << "  Theta" << (r.c3.vacuous ? " vacuous" : "<=" + num(r.c3.Theta))
     << " threshold " << num(4.0 * r.c2.gamma / (spec.n() - 1.0)) << "\n";
  os << "finite degree  " << to_string(r.finite_degree) << "\n";
  os << "theta=" << num(r.theta) << " alpha=" << num(r.alpha) << "\n";
  if (r.cross_check.performed)
    os << "closed-form range: " << (r.cross_check.thm4_admissible ? "admissible" : "not admissible")
       << (r.cross_check.agrees ? " (agrees)" : " (DISAGREES)") << "\n";
  os << "overall: " << to_string(r.overall) << "\n";
  for (const auto& n : r.notes) os << "  - " << n << "\n";
  return os.str();
}

}  // namespace quasieig
