#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "conekit/charfn.hpp"
#include "conekit/geometry.hpp"
#include "conekit/harness.hpp"
#include "conekit/operators.hpp"
#include "conekit/rng.hpp"
#include "conekit/sampling.hpp"
#include "conekit/starmap.hpp"

namespace conekit::selftest {

namespace {

Mat simplicial_matrix_2d() {
    Mat a(2, 2);
    a << 1.0, 1.0, 0.0, 1.0;
    return a;
}

std::vector<ConeModel> builtin_cones() {
    return {
        ConeModel::orthant(2),
        ConeModel::orthant(3),
        ConeModel::lorentz(2),
        ConeModel::lorentz(3),
        ConeModel::simplicial(simplicial_matrix_2d()),
        ConeModel::product({ConeModel::orthant(2), ConeModel::lorentz(3)}),
    };
}

struct Runner {
    std::vector<JUnitCase> results;
    McConfig mc;
    Exec exec;

    void check(const std::string& name, const std::function<void()>& body) {
        JUnitCase c;
        c.name = name;
        try {
            body();
        } catch (const std::exception& ex) {
            c.passed = false;
            c.message = ex.what();
        }
        results.push_back(std::move(c));
    }
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

Mat random_diag_automorphism(int n, RngStream& rng) {
    Mat a = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) a(i, i) = 0.5 + 2.0 * rng.u01();
    return a;
}

}  // namespace

std::vector<JUnitCase> run(const McConfig& mc, Exec exec) {
    Runner r;
    r.mc = mc;
    r.exec = exec;
    const auto cones = builtin_cones();

    r.check("cone-axioms-randomized", [&] {
        for (const auto& cone : cones) {
            for (int i = 0; i < 50; ++i) {
                auto rng = RngStream::at(mc.seed, 0x100, i);
                Vec x = sample_cone_point(cone, rng);
                Vec y = sample_cone_point(cone, rng);
                require(contains(cone, Vec(2.5 * x)), cone.label() + ": scaling failed");
                require(contains(cone, Vec(x + y)), cone.label() + ": additivity failed");
                require(!contains(cone, Vec(-x)), cone.label() + ": contains a line");
            }
        }
    });

    r.check("duality-involution-100-simplicial", [&] {
        for (int i = 0; i < 100; ++i) {
            auto rng = RngStream::at(mc.seed, 0x101, i);
            Mat a(2, 2);
            do {
                for (int k = 0; k < 4; ++k) a(k / 2, k % 2) = rng.normal();
            } while (std::abs(a.determinant()) < 0.2);
            ConeModel c = ConeModel::simplicial(a);
            require(dual(dual(c)).same_cone(c, mc.seed + i, 1000),
                    "dual(dual(C)) != C for a simplicial cone");
        }
    });

    r.check("dual-pairing-positivity", [&] {
        for (const auto& cone : cones) {
            const ConeModel dc = dual(cone);
            for (int i = 0; i < 200; ++i) {
                auto rng = RngStream::at(mc.seed, 0x102, i);
                Vec x = sample_cone_point(dc, rng);
                Vec y = sample_cone_point(cone, rng);
                require(x.dot(y) > 0, cone.label() + ": dual pairing not positive");
            }
        }
    });

    r.check("order-reversal-self-dual", [&] {
        for (const auto& cone : {ConeModel::orthant(3), ConeModel::lorentz(3)}) {
            const ConeModel dc = dual(cone);
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x103, i);
                Vec x = sample_cone_point(cone, rng, 0.02);
                Vec z = x + sample_cone_point(cone, rng, 0.02);
                require(cone_less(dc, star(cone, z).x_star, star(cone, x).x_star),
                        cone.label() + ": order reversal failed");
            }
        }
    });

    r.check("boundary-distance-vs-dual-section", [&] {
        for (const auto& cone : cones) {
            const ConeModel dc = dual(cone);
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x104, i);
                Vec x = sample_cone_point(cone, rng);
                Vec y = sample_section(dc, rng, mc.max_rejections);
                require(x.dot(y) >= boundary_distance(cone, x) - 1e-9,
                        cone.label() + ": pairing below boundary distance");
            }
        }
    });

    r.check("delta-phi-homogeneity", [&] {
        for (const auto& cone : cones) {
            const int n = cone.dim();
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x105, i);
                Vec x = sample_cone_point(cone, rng, 0.01);
                const double lam = 0.25 + 3.0 * rng.u01();
                const double d_ratio = delta(cone, Vec(lam * x)) / delta(cone, x);
                const double p_ratio = phi(cone, Vec(lam * x)) / phi(cone, x);
                require(std::abs(d_ratio / std::pow(lam, n) - 1.0) < 1e-10,
                        cone.label() + ": Delta homogeneity off");
                require(std::abs(p_ratio * std::pow(lam, n) - 1.0) < 1e-10,
                        cone.label() + ": phi homogeneity off");
            }
        }
    });

    r.check("closed-form-vs-mc", [&] {
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        for (const auto& cone : cones) {
            for (int i = 0; i < 5; ++i) {
                auto rng = RngStream::at(mc.seed, 0x106, i);
                Vec x = sample_cone_point(cone, rng, 0.05);
                McConfig mi = m;
                mi.seed = m.seed + i;
                const McEstimate de = delta_mc(cone, x, mi, r.exec);
                require(std::abs(de.value - delta(cone, x)) <= 4.0 * de.stderr_ + 1e-12,
                        cone.label() + ": delta_mc disagrees with closed form");
                const McEstimate pe = phi_mc(cone, x, mi, r.exec);
                require(std::abs(pe.value - phi(cone, x)) <= 4.0 * pe.stderr_,
                        cone.label() + ": phi_mc disagrees with closed form");
            }
        }
    });

    r.check("phi-delta-product-constant", [&] {
        for (const auto& cone : cones) {
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x107, i);
                Vec x = sample_cone_point(cone, rng, 0.005);
                const double c = std::exp(log_phi(cone, x) + log_delta(cone, x));
                lo = std::min(lo, c);
                hi = std::max(hi, c);
            }
            require((hi - lo) / hi < 1e-8, cone.label() + ": phi*Delta is not constant");
        }
    });

    r.check("strict-log-convexity", [&] {
        for (const auto& cone : cones) {
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x108, i);
                Vec x0 = sample_cone_point(cone, rng, 0.01);
                Vec x1 = sample_cone_point(cone, rng, 0.01);
                if ((x0 - x1).norm() < 1e-6) continue;
                const double mid = log_phi(cone, Vec(0.5 * (x0 + x1)));
                const double bound = 0.5 * log_phi(cone, x0) + 0.5 * log_phi(cone, x1);
                require(mid < bound - 1e-12 * std::abs(bound),
                        cone.label() + ": log phi not strictly convex at midpoint");
            }
        }
    });

    r.check("boundary-blowup-and-delta-vanishing", [&] {
        for (const auto& cone : cones) {
            auto rng = RngStream::at(mc.seed, 0x109, 0);
            Vec x0 = std::sqrt(double(cone.dim())) * cone.axis();
            Vec xb = x0 - boundary_distance(cone, x0) * 0.9999 *
                              [&] {  // step toward the boundary along a fixed direction
                                  Vec dir = sample_cone_point(cone, rng);
                                  dir.normalize();
                                  return dir;
                              }();
            // walk x_t = xb + t (x0 - xb), t -> 0+
            double prev_phi = phi(cone, x0);
            double last_phi = prev_phi, last_delta = delta(cone, x0);
            bool monotone = true;
            for (double t = 0.5; t >= 1e-7; t *= 0.2) {
                Vec xt = xb + t * (x0 - xb);
                if (!contains(cone, xt)) continue;
                const double p = phi(cone, xt);
                if (p < prev_phi) monotone = false;
                prev_phi = p;
                last_phi = p;
                last_delta = delta(cone, xt);
            }
            require(monotone, cone.label() + ": phi not increasing toward the boundary");
            require(last_phi > 1e6 * phi(cone, x0), cone.label() + ": phi blow-up too weak");
            require(last_delta < 1e-5 * delta(cone, x0), cone.label() + ": Delta does not vanish");
        }
    });

    r.check("simplicial-transformation-law", [&] {
        const Mat a = simplicial_matrix_2d();
        const ConeModel base = ConeModel::orthant(2);
        const ConeModel image = ConeModel::simplicial(a);
        const double adet = std::abs(a.determinant());
        for (int i = 0; i < 50; ++i) {
            auto rng = RngStream::at(mc.seed, 0x10A, i);
            Vec x = sample_cone_point(base, rng, 0.01);
            require(std::abs(phi(image, Vec(a * x)) * adet / phi(base, x) - 1.0) < 1e-12,
                    "phi transformation law violated");
        }
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        Vec x = Vec::Ones(2);
        const McEstimate pe = phi_mc(image, Vec(a * x), m, r.exec);
        require(std::abs(pe.value - phi(base, x) / adet) <= 4 * pe.stderr_,
                "phi transformation law vs phi_mc");
    });

    r.check("sigma-product-formula-vs-estimate", [&] {
        const ConeModel pc = ConeModel::product({ConeModel::orthant(1), ConeModel::lorentz(3)});
        const SigmaReport closed = sigma0_closed(pc);
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(50000, mc.samples);
        std::vector<double> grid;
        for (double a = -1.2; a <= -0.21; a += 0.1) grid.push_back(a);
        const SigmaReport est = sigma0_estimate(pc, grid, m, r.exec);
        require(!est.one_sided, "product sigma bracket is one-sided");
        require(closed.sigma0 >= est.bracket_low - 1e-9 &&
                    closed.sigma0 <= est.bracket_high + 1e-9,
                "product sigma0 formula outside the estimator bracket");
    });

    r.check("star-involution", [&] {
        for (const auto& cone : cones) {
            const ConeModel dc = dual(cone);
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x10B, i);
                Vec x = sample_cone_point(cone, rng, 0.01);
                Vec back = star(dc, star(cone, x).x_star).x_star;
                require((back - x).norm() < 1e-8 * std::max(1.0, x.norm()),
                        cone.label() + ": (x*)* != x");
            }
        }
    });

    r.check("euler-identity", [&] {
        for (const auto& cone : cones) {
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x10C, i);
                Vec x = sample_cone_point(cone, rng, 0.02);
                require(star(cone, x).residual_euler < 1e-10, cone.label() + ": Euler closed");
                Vec fd = star_fd(cone, x, 1e-5);
                require(std::abs(fd.dot(x) - cone.dim()) < 1e-6, cone.label() + ": Euler fd");
            }
        }
    });

    r.check("duality-constants-spread", [&] {
        for (const auto& cone : cones) {
            const ConeModel dc = dual(cone);
            double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
            for (int i = 0; i < 100; ++i) {
                auto rng = RngStream::at(mc.seed, 0x10D, i);
                Vec x = sample_cone_point(cone, rng, 0.01);
                Vec xs = star(cone, x).x_star;
                const double c1 = std::exp(log_phi(cone, x) + log_phi(dc, xs));
                const double c2 = std::exp(log_delta(cone, x) + log_delta(dc, xs));
                lo1 = std::min(lo1, c1), hi1 = std::max(hi1, c1);
                lo2 = std::min(lo2, c2), hi2 = std::max(hi2, c2);
            }
            require((hi1 - lo1) / hi1 < 1e-8, cone.label() + ": phi phi* spread");
            require((hi2 - lo2) / hi2 < 1e-8, cone.label() + ": Delta Delta* spread");
        }
    });

    r.check("determinant-law-spread", [&] {
        for (const auto& cone : cones) {
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < 40; ++i) {
                auto rng = RngStream::at(mc.seed, 0x10E, i);
                Vec x = sample_cone_point(cone, rng, 0.05);
                const double det_k = jacobian_K(cone, x).determinant();
                const double c = det_k * std::exp(2.0 * log_delta(cone, x));
                lo = std::min(lo, c), hi = std::max(hi, c);
            }
            require((hi - lo) / hi < 1e-4, cone.label() + ": det K * Delta^2 spread too big");
        }
    });

    r.check("star-range-and-K-definiteness", [&] {
        for (const auto& cone : cones) {
            const ConeModel dc = dual(cone);
            for (int i = 0; i < 50; ++i) {
                auto rng = RngStream::at(mc.seed, 0x10F, i);
                Vec x = sample_cone_point(cone, rng, 0.05);
                require(contains(dc, star(cone, x).x_star), cone.label() + ": x* not in V*");
                Mat k = jacobian_K(cone, x);
                require((k - k.transpose()).cwiseAbs().maxCoeff() < 1e-6,
                        cone.label() + ": K not symmetric");
                Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (k + k.transpose()));
                require(es.eigenvalues().minCoeff() > 0, cone.label() + ": K not positive definite");
            }
        }
    });

    r.check("kernel-homogeneity", [&] {
        for (const auto& cone : {ConeModel::orthant(2), ConeModel::simplicial(simplicial_matrix_2d()),
                                 ConeModel::lorentz(3)}) {
            std::vector<KernelSpec> kernels = {hardy_kernel(cone), laplace_kernel(cone),
                                               rl_kernel(cone, 1.5), weyl_kernel(cone, 1.5)};
            for (int i = 0; i < 30; ++i) {
                auto rng = RngStream::at(mc.seed, 0x110, i);
                Vec x = sample_cone_point(cone, rng, 0.02);
                Vec y = sample_cone_point(cone, rng, 0.02);
                Mat a;
                if (cone.kind() == ConeKind::Orthant) {
                    a = random_diag_automorphism(cone.dim(), rng);
                } else if (cone.kind() == ConeKind::Simplicial) {
                    a = cone.matrix() * random_diag_automorphism(cone.dim(), rng) *
                        cone.matrix_inv();
                } else {
                    a = (0.3 + 2.0 * rng.u01()) * Mat::Identity(cone.dim(), cone.dim());
                }
                const double adet = std::abs(a.determinant());
                for (const auto& k : kernels) {
                    const double base = k.eval(x, y);
                    if (base <= 0) continue;
                    const double mapped = k.eval(Vec(a * x), Vec(a * y));
                    require(std::abs(mapped / (std::pow(adet, k.beta) * base) - 1.0) < 1e-8,
                            cone.label() + ": " + k.name + " homogeneity violated");
                }
                const KernelSpec dp = dual_pairing_kernel(cone);
                Vec xd = sample_cone_point(dual(cone), rng, 0.02);
                const double base = dp.eval(xd, y);
                const Mat at_inv = a.transpose().inverse();
                const double mapped = dp.eval(Vec(at_inv * xd), Vec(a * y));
                require(std::abs(mapped / base - 1.0) < 1e-8,
                        cone.label() + ": dual pairing kernel homogeneity violated");
            }
        }
    });

    r.check("operator-homogeneity-of-KDelta", [&] {
        const ConeModel cone = ConeModel::orthant(2);
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        auto rng = RngStream::at(mc.seed, 0x111, 0);
        const Mat a = random_diag_automorphism(2, rng);
        const double adet = std::abs(a.determinant());
        const Vec x = Vec::Ones(2) * 1.25;
        const double dexp = 0.5;
        const TestFunction f = tf_delta_power(cone, dexp);
        struct OpCase {
            std::string name;
            double order;
            std::function<McEstimate(const Vec&, std::uint64_t)> run;
        };
        std::vector<OpCase> ops = {
            {"hardy", dexp + 1.0,
             [&](const Vec& p, std::uint64_t s) {
                 McConfig mm = m;
                 mm.seed = m.seed + s;
                 return hardy(cone, f, p, mm, r.exec);
             }},
            {"rl", dexp + 1.5,
             [&](const Vec& p, std::uint64_t s) {
                 McConfig mm = m;
                 mm.seed = m.seed + s;
                 return riemann_liouville(cone, 1.5, f, p, mm, r.exec);
             }},
            {"laplace", dexp + 1.0,
             [&](const Vec& p, std::uint64_t s) {
                 McConfig mm = m;
                 mm.seed = m.seed + s;
                 return laplace(cone, f, p, mm, r.exec);
             }},
        };
        for (const auto& op : ops) {
            const McEstimate base = op.run(x, 0);
            const McEstimate mapped = op.run(Vec(a * x), 1);
            const double expect = std::pow(adet, op.order) * base.value;
            const double tol =
                4.0 * (mapped.stderr_ + std::pow(adet, op.order) * base.stderr_);
            require(std::abs(mapped.value - expect) <= tol,
                    op.name + ": KDelta^d not V-homogeneous of order d+beta+1");
        }
    });

    r.check("hardy-order-preservation", [&] {
        const ConeModel cone = ConeModel::lorentz(3);
        const TestFunction f = tf_exp_damped(cone, 0.0, 0.5);
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        for (int i = 0; i < 10; ++i) {
            auto rng = RngStream::at(mc.seed, 0x112, i);
            Vec x = sample_cone_point(cone, rng, 0.02);
            Vec y = x + sample_cone_point(cone, rng, 0.02);
            const McEstimate hx = hardy(cone, f, x, m, r.exec);
            const McEstimate hy = hardy(cone, f, y, m, r.exec);
            require(hx.value <= hy.value + 3.0 * (hx.stderr_ + hy.stderr_),
                    "Hardy not monotone in the cone order");
        }
    });

    r.check("rl-order-one-equals-hardy", [&] {
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        const ConeModel cone = ConeModel::orthant(2);
        for (int i = 0; i < 5; ++i) {
            auto rng = RngStream::at(mc.seed, 0x113, i);
            Vec x = sample_cone_point(cone, rng, 0.02);
            const TestFunction f = tf_exp_damped(cone, 0.5 * rng.u01(), 0.5 + rng.u01());
            McConfig ma = m, mb = m;
            ma.seed = m.seed + 17 * i;
            mb.seed = m.seed + 17 * i + 1;
            const McEstimate a = riemann_liouville(cone, 1.0, f, x, ma, r.exec);
            const McEstimate b = hardy(cone, f, x, mb, r.exec);
            require(std::abs(a.value - b.value) <= 3.0 * (a.stderr_ + b.stderr_),
                    "R_1 f != H f");
        }
    });

    r.check("operator-scaling-linearity", [&] {
        const ConeModel cone = ConeModel::orthant(2);
        const TestFunction f = tf_exp_damped(cone, 0.5, 1.0);
        const TestFunction f3 = tf_scale(f, 3.0);
        const Vec x = Vec::Ones(2);
        McConfig m = mc;
        m.samples = 20000;
        const McEstimate a = hardy(cone, f, x, m, r.exec);
        const McEstimate b = hardy(cone, f3, x, m, r.exec);
        require(std::abs(b.value - 3.0 * a.value) <= 1e-12 * std::abs(b.value),
                "H(3f) != 3 H(f) with shared streams");
    });

    r.check("verify-ratio-scale-invariance", [&] {
        InequalityCase c;
        c.theorem = Theorem::Hardy1D;
        c.cone = ConeModel::orthant(1);
        c.p = c.q = 2.0;
        c.gamma = 0.0;
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(20000, mc.samples / 5);
        const TestFunction f = tf_indicator(c.cone, Vec::Ones(1));
        const auto rep1 = verify(c, {f}, m, r.exec);
        const auto rep2 = verify(c, {tf_scale(f, 7.5)}, m, r.exec);
        require(std::abs(rep1.max_ratio / rep2.max_ratio - 1.0) < 1e-10,
                "verify ratio is not scale invariant under f -> 7.5 f");
    });

    r.check("automorphism-invariance-of-ratio", [&] {
        InequalityCase c;
        c.theorem = Theorem::T3_3;
        c.cone = ConeModel::orthant(2);
        c.p = c.q = 2.0;
        c.gamma = 0.0;
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(40000, mc.samples / 2);
        const Vec b = Vec::Ones(2) * 2.0;
        const TestFunction f = tf_power_interval(c.cone, 0.25, b);
        Mat a = Mat::Zero(2, 2);
        a(0, 0) = 1.7;
        a(1, 1) = 0.6;
        TestFunction fa = f;
        fa.id = "f(A^-1 x)";
        const Mat ainv = a.inverse();
        auto base_eval = f.eval;
        fa.eval = [base_eval, ainv](const Vec& y) { return base_eval(ainv * y); };
        fa.support_b = a * b;
        const auto rep1 = verify(c, {f}, m, r.exec);
        const auto rep2 = verify(c, {fa}, m, r.exec);
        require(std::abs(rep1.max_ratio / rep2.max_ratio - 1.0) < 0.10,
                "T3.3 max ratio changed under a diagonal automorphism");
    });

    r.check("dual-transfer-constant", [&] {
        const ConeModel cone = ConeModel::orthant(2);
        const ConeModel dc = dual(cone);
        const double dexp = 0.5, qq = 2.0;
        McConfig m = mc;
        m.samples = std::max<std::uint64_t>(50000, mc.samples / 2);
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 5; ++i) {
            const TestFunction f = tf_exp_damped(cone, 0.3 + 0.15 * i, 1.0);
            const TestFunction sf = s_transform(cone, f);
            // lhs: integral over V* of (Sf)^q Delta*^d
            TestFunction sf_q = sf;
            auto base = sf.eval;
            sf_q.eval = [base, qq](const Vec& y) { return std::pow(base(y), qq); };
            sf_q.decay_exponent = qq * sf.decay_exponent;
            McConfig mi = m;
            mi.seed = m.seed + i;
            const McEstimate lhs = weighted_norm(dc, sf_q, dexp, 1.0, mi, r.exec);
            TestFunction f_q = f;
            auto fb = f.eval;
            f_q.eval = [fb, qq](const Vec& y) { return std::pow(fb(y), qq); };
            f_q.decay_exponent = qq * f.decay_exponent;
            f_q.exp_rate = qq * f.exp_rate;
            const McEstimate rhs = weighted_norm(cone, f_q, -dexp - 2.0, 1.0, mi, r.exec);
            const double c = lhs.value / rhs.value;
            lo = std::min(lo, c), hi = std::max(hi, c);
        }
        require((hi - lo) / hi < 0.05, "S-transform transfer constant varies by more than 5%");
    });

    r.check("one-dim-reduction-to-classical-condition", [&] {
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            InequalityCase c;
            c.theorem = Theorem::T3_13a;
            c.cone = ConeModel::orthant(1);
            c.p = c.q = p;
            c.r = 1.0;
            c.gamma = 0.0;
            // margin must equal (p-1) - gamma exactly
            const ConditionReport rep = check_conditions(c);
            require(std::abs(rep.margin - (p - 1.0)) < 1e-12,
                    "T3.13a at n=1 does not reduce to gamma < p-1");
        }
    });

    r.check("condition-margins-affine-in-gamma", [&] {
        for (Theorem t : {Theorem::T3_13a, Theorem::T3_14a, Theorem::T3_15a}) {
            InequalityCase c;
            c.theorem = t;
            c.cone = ConeModel::lorentz(3);
            c.p = 2.0;
            c.q = 2.0;
            c.r = 1.0;
            c.gamma = 0.0;
            const double m0 = check_conditions(c).margin;
            c.gamma = 0.5;
            const double m1 = check_conditions(c).margin;
            const double slope = (m1 - m0) / 0.5;
            const double expect = (t == Theorem::T3_14a) ? 1.0 : -1.0;
            require(std::abs(slope - expect) < 1e-12, "margin not affine in gamma");
        }
    });

    r.check("bradley-matches-hardy-condition", [&] {
        int idx = 0;
        for (double p : {1.25, 2.0, 3.0, 4.0}) {
            for (double g : {-0.5, 0.0, p - 1.2, p - 1.0, p - 0.5}) {
                InequalityCase hc;
                hc.theorem = Theorem::Hardy1D;
                hc.cone = ConeModel::orthant(1);
                hc.p = hc.q = p;
                hc.gamma = g;
                const bool hardy_ok = check_conditions(hc).satisfied;
                const double a = bradley_constant((g - p) / p, g / p, p, p);
                require(hardy_ok == std::isfinite(a),
                        "Bradley finiteness disagrees with the Hardy condition at grid point " +
                            std::to_string(idx));
                ++idx;
            }
        }
    });

    return r.results;
}

}  // namespace conekit::selftest
