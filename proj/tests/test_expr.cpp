#include <doctest.h>

#include <cmath>

#include "conekit/expr.hpp"
#include "conekit/geometry.hpp"

using namespace conekit;

namespace {
double ev(const std::string& src, const ConeModel& cone, const Vec& x) {
    return expr::evaluate(expr::parse(src), cone, x);
}
}  // namespace

TEST_CASE("arithmetic and precedence") {
    auto c = ConeModel::orthant(2);
    Vec x(2);
    x << 2, 3;
    CHECK(ev("1+2*3", c, x) == doctest::Approx(7.0));
    CHECK(ev("(1+2)*3", c, x) == doctest::Approx(9.0));
    CHECK(ev("2^3^2", c, x) == doctest::Approx(512.0));  // right associative
    CHECK(ev("-2^2", c, x) == doctest::Approx(4.0));     // unary binds the base
    CHECK(ev("8/2/2", c, x) == doctest::Approx(2.0));
    CHECK(ev("1 - 2 - 3", c, x) == doctest::Approx(-4.0));
}

TEST_CASE("cone primitives") {
    auto c = ConeModel::orthant(2);
    Vec x(2);
    x << 2, 3;
    CHECK(ev("delta(x)", c, x) == doctest::Approx(6.0));
    CHECK(ev("delta(x)^0.5", c, x) == doctest::Approx(std::sqrt(6.0)));
    CHECK(ev("dot([1,0.5], x)", c, x) == doctest::Approx(3.5));
    CHECK(ev("exp(-dot([1,1],x))", c, x) == doctest::Approx(std::exp(-5.0)));
    CHECK(ev("delta(x)^2 * exp(-0.5*dot([1,2],x))", c, x) ==
          doctest::Approx(36.0 * std::exp(-4.0)));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(expr::parse("1 +"), std::invalid_argument);
    CHECK_THROWS_AS(expr::parse("delta(y)"), std::invalid_argument);
    CHECK_THROWS_AS(expr::parse("dot([1,2], z)"), std::invalid_argument);
    CHECK_THROWS_AS(expr::parse("1 2"), std::invalid_argument);
    CHECK_THROWS_AS(expr::parse("foo(x)"), std::invalid_argument);
    auto c = ConeModel::orthant(3);
    Vec x(3);
    x << 1, 1, 1;
    CHECK_THROWS_AS(ev("dot([1,2], x)", c, x), std::invalid_argument);  // dim mismatch
}
