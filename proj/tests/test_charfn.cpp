#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "conekit/charfn.hpp"
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

// brute-force grid count of the area of <0, x> in a 2-D cone
double grid_area(const ConeModel& cone, const Vec& x, int cells) {
    const Box box = interval_box(cone, x);
    const Vec zero = Vec::Zero(2);
    long hits = 0;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            Vec y(2);
            y[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * (i + 0.5) / cells;
            y[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * (j + 0.5) / cells;
            if (in_interval(cone, zero, x, y)) ++hits;
        }
    }
    return box.volume() * double(hits) / (double(cells) * cells);
}
}  // namespace

TEST_CASE("delta closed forms on the orthant") {
    CHECK(delta(ConeModel::orthant(2), vec2(2, 3)) == doctest::Approx(6.0));
    CHECK(delta(ConeModel::orthant(3), vec3(1, 1, 1)) == doctest::Approx(1.0));
    CHECK_THROWS(delta(ConeModel::orthant(2), vec2(-1, 1)));
}

TEST_CASE("lorentz(2) delta matches the grid-count oracle") {
    auto c = ConeModel::lorentz(2);
    // area of the square with vertices 0,(1,1),(-1,1),(0,2) is 2
    CHECK(delta(c, vec2(0, 2)) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(grid_area(c, vec2(0, 2), 2000) == doctest::Approx(2.0).epsilon(1e-3));
    // an off-axis point, oracle only
    const Vec x = vec2(0.6, 1.7);
    CHECK(delta(c, x) == doctest::Approx(grid_area(c, x, 2000)).epsilon(2e-3));
}

TEST_CASE("simplicial delta factors through the base orthant") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    auto c = ConeModel::simplicial(a);
    CHECK(delta(c, vec2(2, 1)) == doctest::Approx(1.0));  // |det A| * Delta_orthant(1,1)
}

TEST_CASE("phi closed forms") {
    CHECK(phi(ConeModel::orthant(2), vec2(2, 3)) == doctest::Approx(1.0 / 6.0));
    // degree -n homogeneity, exact
    auto c = ConeModel::orthant(4);
    Vec x(4);
    x << 0.5, 1.5, 2.0, 3.0;
    CHECK(phi(c, Vec(1.7 * x)) == doctest::Approx(std::pow(1.7, -4) * phi(c, x)).epsilon(1e-14));
    // lorentz ratio via homogeneity
    auto l = ConeModel::lorentz(3);
    CHECK(phi(l, vec3(0, 0, 2)) / phi(l, vec3(0, 0, 1)) == doctest::Approx(1.0 / 8.0));
    // lorentz(2) defining integral at (0,2): int exp(-2 y2) over V = 1/2
    CHECK(phi(ConeModel::lorentz(2), vec2(0, 2)) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("delta_mc agrees with closed forms") {
    McConfig mc;
    mc.samples = 100000;
    {
        auto e = delta_mc(ConeModel::orthant(2), vec2(2, 3), mc);
        CHECK(e.value == doctest::Approx(6.0));
        CHECK(e.stderr_ == 0.0);  // acceptance is exactly one inside the box
    }
    {
        auto e = delta_mc(ConeModel::lorentz(2), vec2(0, 2), mc);
        CHECK(std::abs(e.value - 2.0) <= 3.0 * e.stderr_);
    }
    {
        Mat a(2, 2);
        a << 1, 1, 0, 1;
        auto e = delta_mc(ConeModel::simplicial(a), vec2(2, 1), mc);
        CHECK(std::abs(e.value - 1.0) <= 3.0 * e.stderr_ + 1e-12);
    }
}

TEST_CASE("phi_mc agrees with closed forms") {
    McConfig mc;
    mc.samples = 100000;
    {
        auto e = phi_mc(ConeModel::orthant(2), vec2(2, 3), mc);
        CHECK(std::abs(e.value - 1.0 / 6.0) <= 3.0 * e.stderr_);
    }
    {
        Vec one(1);
        one << 1.0;
        auto e = phi_mc(ConeModel::orthant(1), one, mc);
        CHECK(std::abs(e.value - 1.0) <= 3.0 * e.stderr_);
    }
    {
        // cross-validation at a second lorentz point
        auto e = phi_mc(ConeModel::lorentz(2), vec2(0.4, 1.5), mc);
        CHECK(std::abs(e.value - phi(ConeModel::lorentz(2), vec2(0.4, 1.5))) <= 3.0 * e.stderr_);
    }
    {
        auto e = phi_mc(ConeModel::lorentz(3), vec3(0.2, -0.3, 1.4), mc);
        CHECK(std::abs(e.value - phi(ConeModel::lorentz(3), vec3(0.2, -0.3, 1.4))) <=
              3.0 * e.stderr_);
    }
}

TEST_CASE("calibration cache survives corruption") {
    const std::string path = std::filesystem::temp_directory_path() / "conekit-test-cache.json";
    setenv("CONEKIT_CACHE", path.c_str(), 1);
    invalidate_calibration_cache();
    std::filesystem::remove(path);
    const double first = lorentz_calibration(2).delta_ref;
    CHECK(first == doctest::Approx(0.5).epsilon(1e-9));  // Delta(e_2) of the 45-degree wedge
    CHECK(std::filesystem::exists(path));
    // corrupt it; the library must recalibrate
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    invalidate_calibration_cache();
    CHECK(lorentz_calibration(2).delta_ref == doctest::Approx(first));
    invalidate_calibration_cache();
    unsetenv("CONEKIT_CACHE");
    invalidate_calibration_cache();
}

TEST_CASE("lorentz(3) calibration against geometry") {
    // Delta(e_3) = pi/12 (stacked disks), phi(e_3) = 2*pi (gamma integral)
    CHECK(lorentz_calibration(3).delta_ref == doctest::Approx(M_PI / 12.0).epsilon(1e-9));
    CHECK(lorentz_calibration(3).phi_ref == doctest::Approx(2.0 * M_PI).epsilon(1e-9));
}

TEST_CASE("sigma closed forms") {
    CHECK(sigma0_closed(ConeModel::orthant(2)).sigma0 == doctest::Approx(-1.0));
    CHECK(sigma0_closed(ConeModel::orthant(2)).sigma == doctest::Approx(-1.0));
    CHECK(sigma0_closed(ConeModel::lorentz(3)).sigma0 == doctest::Approx(-2.0 / 3.0));
    CHECK(sigma0_closed(ConeModel::lorentz(3)).sigma == doctest::Approx(-2.0 / 3.0));
    const auto one = sigma0_closed(ConeModel::orthant(1));
    CHECK(std::isinf(one.sigma0));
    CHECK(one.sigma0 < 0);
    CHECK(one.sigma == doctest::Approx(-1.0));
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    CHECK(sigma0_closed(ConeModel::simplicial(a)).sigma0 == doctest::Approx(-1.0));
    // products: mixing contributes -1, so the max wins
    const auto p1 = sigma0_closed(ConeModel::product({ConeModel::orthant(1), ConeModel::orthant(1)}));
    CHECK(p1.sigma0 == doctest::Approx(-1.0));
    const auto p2 = sigma0_closed(ConeModel::product({ConeModel::orthant(1), ConeModel::lorentz(3)}));
    CHECK(p2.sigma0 == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("sigma0_estimate brackets the closed forms") {
    McConfig mc;
    mc.samples = 200000;
    {
        std::vector<double> grid;
        for (double a = -1.5; a <= -0.49; a += 0.1) grid.push_back(a);
        const auto rep = sigma0_estimate(ConeModel::orthant(2), grid, mc);
        CHECK(!rep.one_sided);
        CHECK(rep.bracket_high - rep.bracket_low <= 0.2 + 1e-9);
        CHECK(rep.bracket_low <= -1.0 + 1e-9);
        CHECK(rep.bracket_high >= -1.0 - 1e-9);
    }
    {
        std::vector<double> grid;
        for (double a = -1.2; a <= -0.19; a += 0.1) grid.push_back(a);
        const auto rep = sigma0_estimate(ConeModel::lorentz(3), grid, mc);
        CHECK(!rep.one_sided);
        CHECK(rep.bracket_high - rep.bracket_low <= 0.2 + 1e-9);
        CHECK(rep.bracket_low <= -2.0 / 3.0 + 1e-9);
        CHECK(rep.bracket_high >= -2.0 / 3.0 - 1e-9);
    }
}

TEST_CASE("sigma0_estimate classifies alpha = 0 as convergent and handles the half line") {
    McConfig mc;
    mc.samples = 50000;
    const auto rep = sigma0_estimate(ConeModel::lorentz(2), {-0.5, 0.0}, mc);
    CHECK(!rep.rows.back().divergent);
    const auto rep1 = sigma0_estimate(ConeModel::orthant(1), {-2.0, -1.0, 0.0}, mc);
    CHECK(rep1.one_sided);
    CHECK(std::isinf(rep1.sigma0));
    CHECK(rep1.sigma == doctest::Approx(-1.0));
    CHECK_THROWS(sigma0_estimate(ConeModel::orthant(2), {}, mc));
}

TEST_CASE("homogeneity identities at 1e-10") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    std::vector<ConeModel> cones = {ConeModel::orthant(3), ConeModel::lorentz(3),
                                    ConeModel::simplicial(a),
                                    ConeModel::product({ConeModel::orthant(1), ConeModel::lorentz(2)})};
    for (const auto& cone : cones) {
        const int n = cone.dim();
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(31, 0, i);
            Vec x = sample_cone_point(cone, rng, 0.01);
            const double lam = 0.3 + 2.5 * rng.u01();
            CHECK(delta(cone, Vec(lam * x)) ==
                  doctest::Approx(std::pow(lam, n) * delta(cone, x)).epsilon(1e-10));
            CHECK(phi(cone, Vec(lam * x)) ==
                  doctest::Approx(std::pow(lam, -n) * phi(cone, x)).epsilon(1e-10));
        }
    }
}
