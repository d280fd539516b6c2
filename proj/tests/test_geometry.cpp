#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "conekit/geometry.hpp"
#include "conekit/rng.hpp"
#include "conekit/sampling.hpp"

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
}  // namespace

TEST_CASE("orthant membership") {
    auto c = ConeModel::orthant(2);
    CHECK(contains(c, vec2(1, 2)));
    CHECK(!contains(c, vec2(1, 0)));
    CHECK(!contains(c, vec2(-1, 2)));
    CHECK_THROWS_AS(contains(c, vec3(1, 1, 1)), std::invalid_argument);
    Vec bad = vec2(1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(contains(c, bad), std::invalid_argument);
}

TEST_CASE("lorentz membership") {
    auto c = ConeModel::lorentz(3);
    CHECK(!contains(c, vec3(0, 0, -1)));
    CHECK(contains(c, vec3(0.3, 0.3, 1)));
    CHECK(!contains(c, vec3(1, 0, 1)));  // boundary is excluded
}

TEST_CASE("simplicial membership solves through A") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    auto c = ConeModel::simplicial(a);
    // A^{-1} (1,1) = (0,1) sits on the boundary of the base orthant
    CHECK(!contains(c, vec2(1, 1)));
    CHECK(contains(c, vec2(1.5, 1)));   // A^{-1} = (0.5, 1)
    CHECK(!contains(c, vec2(0.5, 1)));  // A^{-1} = (-0.5, 1)
}

TEST_CASE("simplicial singularity guard") {
    Mat a(2, 2);
    a << 1, 1, 1, 1;
    CHECK_THROWS_AS(ConeModel::simplicial(a), std::invalid_argument);
}

TEST_CASE("dual models") {
    CHECK(dual(ConeModel::orthant(3)).kind() == ConeKind::Orthant);
    CHECK(dual(ConeModel::lorentz(4)).kind() == ConeKind::Lorentz);

    Mat a(2, 2);
    a << 2, 0, 0, 1;
    auto d = dual(ConeModel::simplicial(a));
    CHECK(d.matrix()(0, 0) == doctest::Approx(0.5));
    CHECK(d.matrix()(1, 1) == doctest::Approx(1.0));
    CHECK(d.matrix()(0, 1) == doctest::Approx(0.0));

    // V = V** behaviorally, for random simplicial cones
    for (int i = 0; i < 100; ++i) {
        auto rng = RngStream::at(11, 0, i);
        Mat m(2, 2);
        do {
            for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = rng.normal();
        } while (std::abs(m.determinant()) < 0.2);
        auto c = ConeModel::simplicial(m);
        CHECK(dual(dual(c)).same_cone(c, 1000 + i, 1000));
    }
}

TEST_CASE("boundary distance closed forms") {
    CHECK(boundary_distance(ConeModel::orthant(2), vec2(3, 1)) == doctest::Approx(1.0));
    Vec one(1);
    one << 5.0;
    CHECK(boundary_distance(ConeModel::orthant(1), one) == doctest::Approx(5.0));
    CHECK(boundary_distance(ConeModel::lorentz(2), vec2(0, 1)) ==
          doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK_THROWS(boundary_distance(ConeModel::orthant(2), vec2(-1, 1)));
}

TEST_CASE("lorentz(2) boundary distance agrees with direct minimization") {
    // distance from (0,1) to the ray t*(1,1)/sqrt(2), minimized numerically
    const Vec x = vec2(0, 1);
    double best = 1e300;
    for (double t = 0; t <= 2.0; t += 1e-6) {
        const double dx = x[0] - t / std::sqrt(2.0);
        const double dy = x[1] - t / std::sqrt(2.0);
        best = std::min(best, std::hypot(dx, dy));
    }
    CHECK(boundary_distance(ConeModel::lorentz(2), x) == doctest::Approx(best).epsilon(1e-5));
}

TEST_CASE("cone order and intervals") {
    auto c = ConeModel::orthant(2);
    CHECK(cone_less(c, vec2(1, 1), vec2(2, 3)));
    CHECK(!cone_less(c, vec2(1, 1), vec2(2, 0.5)));
    auto l = ConeModel::lorentz(3);
    CHECK(cone_less(l, Vec::Zero(3), vec3(0, 0, 1)));

    CHECK(in_interval(c, Vec::Zero(2), vec2(1, 1), vec2(0.5, 0.5)));
    CHECK(!in_interval(c, Vec::Zero(2), vec2(1, 1), vec2(0.5, 1.5)));
    // (0.5, 1) and its reflection both lie in lorentz(2)
    auto l2 = ConeModel::lorentz(2);
    CHECK(in_interval(l2, Vec::Zero(2), vec2(0, 2), vec2(0.5, 1)));
}

TEST_CASE("interval bounding boxes") {
    auto l2 = ConeModel::lorentz(2);
    Box b = interval_box(l2, vec2(0, 2));
    CHECK(b.lo[0] == doctest::Approx(-1.0));
    CHECK(b.hi[0] == doctest::Approx(1.0));
    CHECK(b.lo[1] == doctest::Approx(0.0));
    CHECK(b.hi[1] == doctest::Approx(2.0));
    CHECK(b.volume() == doctest::Approx(4.0));

    // box of a simplicial interval is the image parallelotope's box
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    auto s = ConeModel::simplicial(a);
    Box bs = interval_box(s, vec2(2, 1));  // A^{-1} x = (1,1)
    CHECK(bs.lo[0] == doctest::Approx(0.0));
    CHECK(bs.hi[0] == doctest::Approx(2.0));
    CHECK(bs.hi[1] == doctest::Approx(1.0));
}

TEST_CASE("cone axioms hold on randomized points") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    std::vector<ConeModel> cones = {
        ConeModel::orthant(2), ConeModel::lorentz(3), ConeModel::simplicial(a),
        ConeModel::product({ConeModel::orthant(1), ConeModel::lorentz(2)})};
    for (const auto& cone : cones) {
        for (int i = 0; i < 200; ++i) {
            auto rng = RngStream::at(5, 1, i);
            Vec x = sample_cone_point(cone, rng);
            Vec y = sample_cone_point(cone, rng);
            CHECK(contains(cone, Vec(0.7 * x)));
            CHECK(contains(cone, Vec(x + y)));
            CHECK(!contains(cone, Vec(-x)));
        }
    }
}

TEST_CASE("json round trip") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    auto c = ConeModel::product({ConeModel::simplicial(a), ConeModel::lorentz(3)});
    auto j = c.to_json();
    auto c2 = ConeModel::from_json(j);
    CHECK(c2.dim() == c.dim());
    CHECK(c2.same_cone(c));
    CHECK(j.at("kind") == "product");
}

TEST_CASE("product dimension bookkeeping") {
    auto p = ConeModel::product({ConeModel::orthant(2), ConeModel::lorentz(3)});
    CHECK(p.dim() == 5);
    Vec x(5);
    x << 1, 1, 0, 0, 1;
    CHECK(contains(p, x));
    x[4] = -1;
    CHECK(!contains(p, x));
}
