#include <doctest.h>

#include <cmath>

#include "conekit/charfn.hpp"
#include "conekit/operators.hpp"
#include "conekit/rng.hpp"
#include "conekit/sampling.hpp"

using namespace conekit;

namespace {
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}
McConfig mk(std::uint64_t samples, std::uint64_t seed = 7001) {
    McConfig mc;
    mc.samples = samples;
    mc.seed = seed;
    return mc;
}
}  // namespace

TEST_CASE("hardy oracle values") {
    auto c = ConeModel::orthant(2);
    {
        auto e = hardy(c, tf_one(c), vec2(2, 3), mk(100000));
        CHECK(std::abs(e.value - 6.0) <= 3.0 * e.stderr_ + 1e-12);
    }
    {
        // int_0^1 int_0^1 y1 y2 = 1/4
        auto e = hardy(c, tf_delta_power(c, 1.0), vec2(1, 1), mk(100000));
        CHECK(std::abs(e.value - 0.25) <= 3.0 * e.stderr_);
    }
    {
        auto e = hardy(c, tf_zero(c), vec2(1, 1), mk(1000));
        CHECK(e.value == 0.0);
        CHECK(e.stderr_ == 0.0);
    }
}

TEST_CASE("hardy homogeneity of H Delta^d") {
    auto c = ConeModel::orthant(2);
    const double d = 0.5, lam = 1.9;
    auto a = hardy(c, tf_delta_power(c, d), vec2(1, 1.4), mk(200000, 42));
    auto b = hardy(c, tf_delta_power(c, d), vec2(lam, 1.4 * lam), mk(200000, 43));
    const double expect = std::pow(lam, 2.0 * (d + 1.0));
    CHECK(std::abs(b.value / a.value - expect) <=
          3.0 * expect * (a.stderr_ / a.value + b.stderr_ / b.value));
}

TEST_CASE("laplace oracles") {
    auto c = ConeModel::orthant(2);
    {
        // x=(1,2): x*=(1,1/2): int exp(-y1) int exp(-y2/2) = 2
        auto e = laplace(c, tf_one(c), vec2(1, 2), mk(100000));
        CHECK(std::abs(e.value - 2.0) <= 3.0 * e.stderr_);
    }
    {
        // L Delta^d = Gamma(1+d)^n Delta^{d+1}
        const double d = 0.7;
        const Vec x = vec2(1.3, 0.8);
        auto e = laplace(c, tf_delta_power(c, d), x, mk(200000));
        const double expect = std::pow(std::tgamma(1.0 + d), 2) * delta(c, x) *
                              std::pow(delta(c, x), d);
        CHECK(std::abs(e.value - expect) <= 3.0 * e.stderr_);
    }
    {
        // homogeneity on lorentz(2): order delta+beta+1 = 1, degree n = 2
        auto l = ConeModel::lorentz(2);
        const double lam = 1.6;
        auto a = laplace(l, tf_one(l), vec2(0.2, 1.0), mk(200000, 52));
        auto b = laplace(l, tf_one(l), vec2(0.2 * lam, 1.0 * lam), mk(200000, 53));
        CHECK(std::abs(b.value / a.value - lam * lam) <
              4.0 * lam * lam * (a.stderr_ / a.value + b.stderr_ / b.value));
    }
}

TEST_CASE("riemann-liouville oracles") {
    {
        // (1/Gamma(2)) int_0^3 (3-t) dt = 4.5
        auto c = ConeModel::orthant(1);
        auto e = riemann_liouville(c, 2.0, tf_one(c), vec1(3.0), mk(100000));
        CHECK(std::abs(e.value - 4.5) <= 3.0 * e.stderr_);
    }
    {
        // int int (1-t1)(1-t2) = 1/4
        auto c = ConeModel::orthant(2);
        auto e = riemann_liouville(c, 2.0, tf_one(c), vec2(1, 1), mk(100000));
        CHECK(std::abs(e.value - 0.25) <= 3.0 * e.stderr_);
    }
    CHECK_THROWS_AS(
        riemann_liouville(ConeModel::orthant(1), 0.5, tf_one(ConeModel::orthant(1)), vec1(1.0),
                          mk(100)),
        std::invalid_argument);
}

TEST_CASE("r=1 riemann-liouville reduces to hardy") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    for (const auto& cone : {ConeModel::orthant(2), ConeModel::lorentz(3), ConeModel::simplicial(a)}) {
        for (int i = 0; i < 4; ++i) {
            auto rng = RngStream::at(61, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.02);
            const TestFunction f = tf_exp_damped(cone, 0.4 * rng.u01(), 0.5 + rng.u01());
            auto e1 = riemann_liouville(cone, 1.0, f, x, mk(60000, 100 + i));
            auto e2 = hardy(cone, f, x, mk(60000, 200 + i));
            CHECK(std::abs(e1.value - e2.value) <= 3.0 * (e1.stderr_ + e2.stderr_));
        }
    }
}

TEST_CASE("weyl oracles") {
    auto c = ConeModel::orthant(1);
    {
        auto e = weyl(c, 1.0, tf_exp_damped(c, 0.0, 1.0), vec1(1.0), mk(100000));
        CHECK(std::abs(e.value - std::exp(-1.0)) <= 3.0 * e.stderr_ + 1e-9);
    }
    {
        // int_0^inf t exp(-t) dt = 1 at x near 0
        auto e = weyl(c, 2.0, tf_exp_damped(c, 0.0, 1.0), vec1(1e-7), mk(100000));
        CHECK(std::abs(e.value - 1.0) <= 3.0 * e.stderr_ + 1e-6);
    }
    {
        auto e = weyl(c, 1.0, tf_zero(c), vec1(1.0), mk(1000));
        CHECK(e.value == 0.0);
    }
    // interval-supported f: W_1 chi_<0,b>(x) = Delta(b - x) when x < b
    {
        auto c2 = ConeModel::orthant(2);
        const Vec b = vec2(2, 2);
        auto e = weyl(c2, 1.0, tf_indicator(c2, b), vec2(0.5, 1.0), mk(50000));
        CHECK(std::abs(e.value - 1.5) <= 3.0 * e.stderr_ + 1e-12);
        auto z = weyl(c2, 1.0, tf_indicator(c2, b), vec2(3.0, 1.0), mk(1000));
        CHECK(z.value == 0.0);
    }
    // non-integrable declared decay refused before sampling
    CHECK_THROWS_AS(weyl(c, 1.0, tf_delta_power(c, -0.5), vec1(1.0), mk(100)),
                    std::invalid_argument);
}

TEST_CASE("apply_kernel routes and matches") {
    auto c = ConeModel::orthant(2);
    {
        // Hardy kernel integrand is supported in <0,x>; f == 1 gives Delta(x)
        auto e = apply_kernel(c, hardy_kernel(c), tf_one(c), vec2(2, 3), mk(100000));
        CHECK(std::abs(e.value - 6.0) <= 3.0 * e.stderr_ + 1e-12);
    }
    {
        auto e = apply_kernel(c, laplace_kernel(c), tf_one(c), vec2(1, 2), mk(100000));
        CHECK(std::abs(e.value - 2.0) <= 3.0 * e.stderr_ + 1e-6);
    }
    {
        auto e = apply_kernel(c, hardy_kernel(c), tf_zero(c), vec2(1, 1), mk(1000));
        CHECK(e.value == 0.0);
    }
    // x outside the left domain
    CHECK_THROWS_AS(
        apply_kernel(c, hardy_kernel(c), tf_one(c), vec2(-1, 1), mk(100)),
        std::invalid_argument);
    // a genuinely global integrand without a declared decay is refused
    TestFunction f = tf_one(c);
    f.decay_declared = false;
    CHECK_THROWS_AS(apply_kernel(c, weyl_kernel(c, 1.0), f, vec2(1, 1), mk(100)),
                    std::invalid_argument);
}

TEST_CASE("s-transform") {
    auto c = ConeModel::orthant(2);
    const double d = 0.8;
    auto sf = s_transform(c, tf_delta_power(c, d));
    for (int i = 0; i < 50; ++i) {
        auto rng = RngStream::at(62, 0, i);
        Vec y = sample_cone_point(c, rng, 0.01);
        // on the self-dual orthant, Delta(y*) = Delta(y)^{-1} exactly
        CHECK(sf.eval(y) == doctest::Approx(std::pow(delta(c, y), -d)).epsilon(1e-10));
    }
    // S(Sf) = f pointwise on a self-dual cone
    auto ssf = s_transform(dual(c), sf);
    auto f = tf_delta_power(c, d);
    for (int i = 0; i < 50; ++i) {
        auto rng = RngStream::at(62, 1, i);
        Vec y = sample_cone_point(c, rng, 0.01);
        CHECK(ssf.eval(y) == doctest::Approx(f.eval(y)).epsilon(1e-9));
    }
    // f == 1 maps to 1
    auto s1 = s_transform(c, tf_one(c));
    Vec y = vec2(0.7, 1.3);
    CHECK(s1.eval(y) == doctest::Approx(1.0));
}

TEST_CASE("fubini duality") {
    auto c = ConeModel::orthant(1);
    {
        auto [lhs, rhs] = fubini_duality_check(c, 1.0, tf_exp_damped(c, 0.0, 1.0),
                                               tf_indicator(c, vec1(1.0)), mk(200000));
        const double expect = 1.0 - std::exp(-1.0);
        CHECK(std::abs(lhs.value - expect) <= 4.0 * (lhs.stderr_ + 1e-4));
        CHECK(std::abs(rhs.value - expect) <= 4.0 * (rhs.stderr_ + 1e-4));
        CHECK(std::abs(lhs.value - rhs.value) <= 4.0 * (lhs.stderr_ + rhs.stderr_) + 1e-4);
    }
    {
        auto [lhs, rhs] = fubini_duality_check(
            c, 1.0, tf_scale(tf_exp_damped(c, 0.0, 1.0), 0.0),
            tf_indicator(c, vec1(1.0)), mk(10000));
        CHECK(lhs.value == 0.0);
        CHECK(rhs.value == 0.0);
    }
    // random orders and functions on orthant(2)
    auto c2 = ConeModel::orthant(2);
    for (int i = 0; i < 3; ++i) {
        auto rng = RngStream::at(63, 0, i);
        const double r = 1.0 + rng.u01();
        auto f = tf_exp_damped(c2, 0.5 * rng.u01(), 0.7 + rng.u01());
        auto g = tf_power_interval(c2, 0.4 * rng.u01(), vec2(1.0 + rng.u01(), 1.0 + rng.u01()));
        McConfig mc = mk(150000, 300 + i);
        auto [lhs, rhs] = fubini_duality_check(c2, r, f, g, mc);
        CHECK(std::abs(lhs.value - rhs.value) <= 4.0 * (lhs.stderr_ + rhs.stderr_));
    }
}

TEST_CASE("operator estimates are bit-reproducible across exec policies") {
    auto c = ConeModel::lorentz(3);
    Vec x(3);
    x << 0.1, -0.2, 1.5;
    auto f = tf_exp_damped(c, 0.5, 1.0);
    auto a = hardy(c, f, x, mk(40000), Exec::Serial);
    auto b = hardy(c, f, x, mk(40000), Exec::OpenMP);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    auto la = laplace(c, f, x, mk(40000), Exec::Serial);
    auto lb = laplace(c, f, x, mk(40000), Exec::OpenMP);
    CHECK(la.value == lb.value);
}
