#include <doctest.h>

#include "quasieig/scalar_family.hpp"

using namespace quasieig;

TEST_CASE("parse the documented forms") {
  CHECK(parse_scalar_func("pow(t, 0.5)") == ScalarFunc(MonomialSum::power(0.5)));
  CHECK(parse_scalar_func("msum(1*t^0.5 + 2*t^1)") == ScalarFunc(MonomialSum({{1, 0.5}, {2, 1}})));
  CHECK(parse_scalar_func("exp(1.0*t)") == ScalarFunc(Exponential{1.0}));
  CHECK(parse_scalar_func("exp(t)") == ScalarFunc(Exponential{1.0}));
  CHECK(parse_scalar_func("msum(1 + t)^2.0") ==
        ScalarFunc(PowerOfMonomialSum{MonomialSum({{1, 0}, {1, 1}}), 2.0}));
  CHECK(parse_scalar_func("  msum( -t^2 + 3 )") == ScalarFunc(MonomialSum({{3, 0}, {-1, 2}})));
}

TEST_CASE("round trip through the canonical text") {
  for (const char* text : {"pow(t, 0.5)", "msum(1*t^0.5 + 2*t^1)", "exp(-0.25*t)", "msum(3*t^0 - 1*t^2)",
                           "msum(1*t^0 + 1*t^1)^2", "pow(t, -0.3333333333333333)"}) {
    const auto f = parse_scalar_func(text);
    CHECK(parse_scalar_func(to_string(f)) == f);
  }
  CHECK(to_string(parse_scalar_func("pow(t,2)")) == "pow(t, 2)");
}

TEST_CASE("errors report a position") {
  try {
    (void)parse_scalar_func("pow(t, x)");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 7);
  }
  CHECK_THROWS_AS(parse_scalar_func("pow(s, 1)"), ParseError);
  CHECK_THROWS_AS(parse_scalar_func("msum(t - t)"), ParseError);
  CHECK_THROWS_AS(parse_scalar_func("pow(t, 1) extra"), ParseError);
  CHECK_THROWS_AS(parse_scalar_func(""), ParseError);
}
