#include <doctest.h>

#include <cmath>

#include "conekit/charfn.hpp"
#include "conekit/numerics.hpp"
#include "conekit/rng.hpp"
#include "conekit/sampling.hpp"

using namespace conekit;

namespace {
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("interval samples are uniform on the orthant box") {
    auto c = ConeModel::orthant(2);
    const Vec x = Vec::Ones(2);
    const int n = 100000;
    Vec mean = Vec::Zero(2);
    for (int i = 0; i < n; ++i) {
        auto rng = RngStream::at(21, 0, i);
        mean += sample_interval(c, x, rng);
    }
    mean /= n;
    // 3 sigma of a U(0,1) mean at n = 1e5 is ~0.0027
    CHECK(std::abs(mean[0] - 0.5) < 0.003);
    CHECK(std::abs(mean[1] - 0.5) < 0.003);
}

TEST_CASE("lorentz(2) interval acceptance rate is area over box volume") {
    auto c = ConeModel::lorentz(2);
    const Vec x = vec2(0, 2);
    const Box box = interval_box(c, x);
    const Vec zero = Vec::Zero(2);
    const int n = 200000;
    int acc = 0;
    for (int i = 0; i < n; ++i) {
        auto rng = RngStream::at(22, 0, i);
        Vec y(2);
        y[0] = rng.uniform(box.lo[0], box.hi[0]);
        y[1] = rng.uniform(box.lo[1], box.hi[1]);
        if (in_interval(c, zero, x, y)) ++acc;
    }
    const double rate = double(acc) / n;
    CHECK(std::abs(rate - 0.5) < 0.01);  // square of area 2 inside the 2x2 box
}

TEST_CASE("interval sampler lands inside and rejects bad input") {
    Mat a(2, 2);
    a << 1, 1, 0, 1;
    for (const auto& cone :
         {ConeModel::lorentz(3), ConeModel::simplicial(a),
          ConeModel::product({ConeModel::orthant(1), ConeModel::lorentz(2)})}) {
        auto rng = RngStream::at(23, 0, 7);
        Vec x = sample_cone_point(cone, rng);
        const Vec zero = Vec::Zero(cone.dim());
        for (int i = 0; i < 2000; ++i) {
            Vec y = sample_interval(cone, x, rng);
            CHECK(in_interval(cone, zero, x, y));
        }
    }
    auto c = ConeModel::orthant(2);
    auto rng = RngStream::at(23, 1, 0);
    CHECK_THROWS_AS(sample_interval(c, vec2(-1, 1), rng), std::invalid_argument);
}

TEST_CASE("section sampling acceptance rates") {
    {
        auto c = ConeModel::orthant(2);
        const int n = 200000;
        int acc = 0;
        for (int i = 0; i < n; ++i) {
            auto rng = RngStream::at(24, 0, i);
            Vec t(2);
            t << rng.normal(), rng.normal();
            t.normalize();
            if (contains(c, t)) ++acc;
        }
        CHECK(std::abs(double(acc) / n - 0.25) < 0.01);
    }
    {
        auto c = ConeModel::lorentz(3);
        const int n = 200000;
        int acc = 0;
        for (int i = 0; i < n; ++i) {
            auto rng = RngStream::at(24, 1, i);
            Vec t(3);
            t << rng.normal(), rng.normal(), rng.normal();
            t.normalize();
            if (contains(c, t)) ++acc;
        }
        const double cap = (1.0 - std::cos(M_PI / 4.0)) / 2.0;
        CHECK(std::abs(double(acc) / n - cap) < 0.005);
    }
}

TEST_CASE("section samples are unit and inside") {
    Mat a(2, 2);
    a << 2, 1, 0, 1;
    for (const auto& cone : {ConeModel::orthant(3), ConeModel::lorentz(4),
                             ConeModel::simplicial(a),
                             ConeModel::product({ConeModel::orthant(2), ConeModel::lorentz(2)})}) {
        for (int i = 0; i < 500; ++i) {
            auto rng = RngStream::at(25, 0, i);
            Vec t = sample_section(cone, rng);
            CHECK(std::abs(t.norm() - 1.0) < 1e-12);
            CHECK(contains(cone, t));
        }
    }
}

// the tilted proposal must integrate to one against the surface measure:
// E_q[1/q(t)] over its own draws equals the section area
TEST_CASE("tilted section density is exactly normalized") {
    struct Case {
        ConeModel cone;
        double tau;
        double section_area;  // independent geometric value
    };
    std::vector<Case> cases;
    cases.push_back({ConeModel::orthant(2), 0.0, M_PI / 2.0});
    cases.push_back({ConeModel::orthant(2), -0.5, M_PI / 2.0});
    cases.push_back({ConeModel::lorentz(2), 0.0, M_PI / 2.0});
    cases.push_back({ConeModel::lorentz(3), 0.0, 2.0 * M_PI * (1.0 - std::cos(M_PI / 4.0))});
    cases.push_back({ConeModel::lorentz(3), -0.45, 2.0 * M_PI * (1.0 - std::cos(M_PI / 4.0))});
    cases.push_back({ConeModel::orthant(3), -0.3, M_PI / 2.0});

    for (const auto& kase : cases) {
        const int n = 400000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            auto rng = RngStream::at(26, 0, i);
            SectionSample s = sample_section_tilted(kase.cone, kase.tau, rng);
            sum += std::exp(-s.log_density);
        }
        const double est = sum / n;
        CHECK_MESSAGE(std::abs(est / kase.section_area - 1.0) < 0.02,
                      kase.cone.label() << " tau=" << kase.tau << " est=" << est
                                        << " expect=" << kase.section_area);
    }
}

TEST_CASE("tilted sampler matches a uniform-rejection estimate of a Delta power") {
    auto cone = ConeModel::lorentz(3);
    const double alpha = -0.25;
    const int n = 300000;
    double tilted = 0.0;
    for (int i = 0; i < n; ++i) {
        auto rng = RngStream::at(27, 0, i);
        SectionSample s = sample_section_tilted(cone, -0.4, rng);
        tilted += std::exp(alpha * log_delta(cone, s.t) - s.log_density);
    }
    tilted /= n;
    double unif = 0.0;
    int acc = 0;
    for (int i = 0; i < 4 * n; ++i) {
        auto rng = RngStream::at(27, 1, i);
        Vec t(3);
        t << rng.normal(), rng.normal(), rng.normal();
        t.normalize();
        if (!contains(cone, t)) continue;
        ++acc;
        unif += std::exp(alpha * log_delta(cone, t));
    }
    const double area = 2.0 * M_PI * (1.0 - std::cos(M_PI / 4.0));
    unif = unif / acc * area;
    CHECK(std::abs(tilted / unif - 1.0) < 0.03);
}

TEST_CASE("product tilted sampler is normalized") {
    auto cone = ConeModel::product({ConeModel::orthant(1), ConeModel::orthant(1)});
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        auto rng = RngStream::at(28, 0, i);
        SectionSample s = sample_section_tilted(cone, 0.0, rng);
        sum += std::exp(-s.log_density);
    }
    CHECK(std::abs(sum / n - M_PI / 2.0) < 0.02);  // behaves like orthant(2)
}

TEST_CASE("global sampler integrates a known function") {
    // integral over orthant(2) of exp(-y1-y2) = 1
    auto cone = ConeModel::orthant(2);
    auto radial = [](const Vec& t) { return RadialProposal::gamma(2.0, t.sum()); };
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        auto rng = RngStream::at(29, 0, i);
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        sum += std::exp(-s.y.sum() - s.log_density);
    }
    CHECK(std::abs(sum / n - 1.0) < 0.01);
}

TEST_CASE("lomax radial proposal round trips") {
    auto rp = RadialProposal::lomax(1.5, 2.0);
    CHECK(rp.inverse_cdf(0.0) == doctest::Approx(0.0));
    const double x = rp.inverse_cdf(0.7);
    CHECK(1.0 - std::pow(1.0 + x / 2.0, -1.5) == doctest::Approx(0.7));
    const double total = adaptive_simpson([&](double t) { return std::exp(rp.log_pdf(t)); },
                                          1e-9, 4000.0, 1e-10);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
}
