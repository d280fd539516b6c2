#include <doctest.h>

#include <cmath>

#include "conekit/charfn.hpp"
#include "conekit/rng.hpp"
#include "conekit/sampling.hpp"
#include "conekit/starmap.hpp"

using namespace conekit;

namespace {
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec vec3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
Mat upper2() {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    return a;
}
std::vector<ConeModel> cones() {
    return {ConeModel::orthant(2), ConeModel::orthant(3), ConeModel::lorentz(2),
            ConeModel::lorentz(3), ConeModel::simplicial(upper2()),
            ConeModel::product({ConeModel::orthant(2), ConeModel::lorentz(3)})};
}
}  // namespace

TEST_CASE("star closed forms") {
    auto r = star(ConeModel::orthant(2), vec2(2, 3));
    CHECK(r.x_star[0] == doctest::Approx(0.5));
    CHECK(r.x_star[1] == doctest::Approx(1.0 / 3.0));
    CHECK(r.residual_euler < 1e-12);

    auto l = star(ConeModel::lorentz(3), vec3(0, 0, 2));
    CHECK(l.x_star[0] == doctest::Approx(0.0));
    CHECK(l.x_star[2] == doctest::Approx(1.5));

    CHECK_THROWS(star(ConeModel::orthant(2), vec2(-1, 1)));
}

TEST_CASE("star_fd matches the closed forms") {
    {
        Vec g = star_fd(ConeModel::orthant(2), vec2(2, 3), 1e-5);
        CHECK(std::abs(g[0] - 0.5) < 1e-8);
        CHECK(std::abs(g[1] - 1.0 / 3.0) < 1e-8);
    }
    {
        Vec g = star_fd(ConeModel::lorentz(3), vec3(0, 0, 2), 1e-5);
        CHECK(std::abs(g[2] - 1.5) < 1e-7);
        CHECK(std::abs(g[0]) < 1e-7);
    }
    {
        auto c = ConeModel::simplicial(upper2());
        for (int i = 0; i < 20; ++i) {
            auto rng = RngStream::at(41, 0, i);
            Vec x = sample_cone_point(c, rng, 0.05);
            Vec g = star_fd(c, x, 1e-5);
            CHECK((g - star(c, x).x_star).norm() < 1e-6);
        }
    }
    // stencil guard near the boundary
    CHECK_THROWS(star_fd(ConeModel::orthant(2), vec2(1e-9, 1.0), 1e-5));
}

TEST_CASE("euler identity everywhere") {
    for (const auto& cone : cones()) {
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(42, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.02);
            CHECK(star(cone, x).residual_euler < 1e-10);
            Vec g = star_fd(cone, x, 1e-5);
            CHECK(std::abs(g.dot(x) - cone.dim()) < 1e-6);
        }
    }
}

TEST_CASE("involution and range") {
    for (const auto& cone : cones()) {
        const ConeModel dc = dual(cone);
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(43, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.01);
            Vec xs = star(cone, x).x_star;
            CHECK(contains(dc, xs));
            Vec back = star(dc, xs).x_star;
            CHECK((back - x).norm() < 1e-8 * std::max(1.0, x.norm()));
        }
    }
}

TEST_CASE("jacobian_K properties") {
    auto k = jacobian_K(ConeModel::orthant(2), vec2(2, 3));
    CHECK(k(0, 0) == doctest::Approx(0.25));
    CHECK(k(1, 1) == doctest::Approx(1.0 / 9.0));
    CHECK(k(0, 1) == doctest::Approx(0.0));

    for (const auto& cone : cones()) {
        for (int i = 0; i < 25; ++i) {
            auto rng = RngStream::at(44, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.05);
            Mat kk = jacobian_K(cone, x);
            CHECK((kk - kk.transpose()).cwiseAbs().maxCoeff() < 1e-6);
            Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (kk + kk.transpose()));
            CHECK(es.eigenvalues().minCoeff() > 0);
        }
    }
}

TEST_CASE("determinant law det K = c Delta^-2") {
    for (const auto& cone : cones()) {
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 50; ++i) {
            auto rng = RngStream::at(45, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.05);
            const double c = jacobian_K(cone, x).determinant() *
                             std::exp(2.0 * log_delta(cone, x));
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        CHECK((hi - lo) / hi < 1e-4);
    }
}

TEST_CASE("duality constants are flat across the cone") {
    for (const auto& cone : cones()) {
        const ConeModel dc = dual(cone);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(46, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.01);
            Vec xs = star(cone, x).x_star;
            const double c = std::exp(log_delta(cone, x) + log_delta(dc, xs));
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        CHECK((hi - lo) / hi < 1e-8);
    }
}

TEST_CASE("fixed points") {
    {
        Vec fp = fixed_point(ConeModel::orthant(3), 1e-8);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(fp[i] - 1.0) < 1e-8);
    }
    for (int n = 2; n <= 4; ++n) {
        Vec fp = fixed_point(ConeModel::lorentz(n), 1e-6);
        CHECK(std::abs(fp[n - 1] - std::sqrt(double(n))) < 1e-6);
        CHECK(fp.head(n - 1).norm() < 1e-6);
    }
    {
        Vec fp = fixed_point(ConeModel::product({ConeModel::orthant(1), ConeModel::orthant(1)}),
                             1e-8);
        CHECK(std::abs(fp[0] - 1.0) < 1e-8);
        CHECK(std::abs(fp[1] - 1.0) < 1e-8);
    }
    // from a perturbed start the solver still lands on the fixed point
    {
        auto cone = ConeModel::lorentz(3);
        Vec x0 = vec3(0.4, -0.2, 1.6);
        Vec fp = internal::fixed_point_from(cone, x0, 1e-6, 200);
        CHECK(std::abs(fp[2] - std::sqrt(3.0)) < 1e-6);
    }
    // simplicial image: fixed point exists and satisfies x = x*
    {
        auto cone = ConeModel::simplicial(upper2());
        Vec fp = fixed_point(cone, 1e-6);
        CHECK((star(cone, fp).x_star - fp).norm() < 1e-6);
    }
}

TEST_CASE("order reversal on self-dual cones") {
    for (const auto& cone : {ConeModel::orthant(3), ConeModel::lorentz(3)}) {
        const ConeModel dc = dual(cone);
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(47, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.02);
            Vec z = x + sample_cone_point(cone, rng, 0.02);
            CHECK(cone_less(dc, star(cone, z).x_star, star(cone, x).x_star));
        }
    }
}
