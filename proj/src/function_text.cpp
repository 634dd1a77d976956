// Text form of ScalarFunc.
//
//   func  := 'pow' '(' 't' ',' num ')' [ '^' num ]
//          | 'msum' '(' sum ')' [ '^' num ]
//          | 'exp' '(' [ num '*' ] 't' ')'
//   sum   := [ '+' | '-' ] term { ( '+' | '-' ) term }
//   term  := num [ '*' 't' [ '^' num ] ] | 't' [ '^' num ]
//
// Whitespace is ignored between tokens. Numbers use the C locale decimal
// syntax with an optional exponent.

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "quasieig/scalar_family.hpp"

namespace quasieig {

ParseError::ParseError(std::string message, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ScalarFunc parse() {
    auto f = function();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
      return false;
    pos_ = end;
    return true;
  }

  double number() {
    skip_ws();
    const char* first = s_.data() + pos_;
    const char* last = s_.data() + s_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) fail("expected a number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    return value;
  }

  double optional_power(double fallback) { return accept('^') ? number() : fallback; }

  ScalarFunc maybe_raised(MonomialSum base, std::size_t start) {
    if (!accept('^')) return ScalarFunc(std::move(base));
    const double e = number();
    try {
      return ScalarFunc(PowerOfMonomialSum{std::move(base), e});
    } catch (const std::invalid_argument& err) {
      throw ParseError(err.what(), start);
    }
  }

  ScalarFunc function() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept_word("pow")) {
      expect('(');
      if (!accept_word("t")) fail("expected 't'");
      expect(',');
      const double k = number();
      expect(')');
      return maybe_raised(MonomialSum::power(k), start);
    }
    if (accept_word("msum")) {
      expect('(');
      auto terms = sum();
      expect(')');
      try {
        return maybe_raised(MonomialSum(std::move(terms)), start);
      } catch (const std::invalid_argument& err) {
        throw ParseError(err.what(), start);
      }
    }
    if (accept_word("exp")) {
      expect('(');
      double rate = 1.0;
      if (!accept_word("t")) {
        rate = number();
        expect('*');
        if (!accept_word("t")) fail("expected 't'");
      }
      expect(')');
      return ScalarFunc(Exponential{rate});
    }
    fail("expected 'pow', 'msum' or 'exp'");
  }

  std::vector<Monomial> sum() {
    std::vector<Monomial> out;
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    else accept('+');
    out.push_back(term(sign));
    while (true) {
      if (accept('+')) out.push_back(term(1.0));
      else if (accept('-')) out.push_back(term(-1.0));
      else break;
    }
    return out;
  }

  Monomial term(double sign) {
    if (accept_word("t")) return {sign, optional_power(1.0)};
    const double c = number();
    if (!accept('*')) return {sign * c, 0.0};
    if (!accept_word("t")) fail("expected 't'");
    return {sign * c, optional_power(1.0)};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string sum_text(const MonomialSum& m) {
  std::string out = "msum(";
  bool first = true;
  for (const auto& t : m.terms()) {
    if (first) {
      if (t.coeff < 0.0) out += "-";
    } else {
      out += t.coeff < 0.0 ? " - " : " + ";
    }
    out += format_double(std::abs(t.coeff)) + "*t^" + format_double(t.exponent);
    first = false;
  }
  return out + ")";
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

ScalarFunc parse_scalar_func(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const ScalarFunc& f) {
  if (const auto* m = std::get_if<MonomialSum>(&f.variant())) {
    if (m->size() == 1 && m->terms()[0].coeff == 1.0)
      return "pow(t, " + format_double(m->terms()[0].exponent) + ")";
    return sum_text(*m);
  }
  if (const auto* e = std::get_if<Exponential>(&f.variant()))
    return "exp(" + format_double(e->rate) + "*t)";
  const auto& p = std::get<PowerOfMonomialSum>(f.variant());
  return sum_text(p.base) + "^" + format_double(p.power);
}

}  // namespace quasieig
