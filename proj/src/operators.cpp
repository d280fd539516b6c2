#include "conekit/operators.hpp"

#include <cmath>

#include "conekit/charfn.hpp"
#include "conekit/expr.hpp"
#include "conekit/rng.hpp"
#include "conekit/starmap.hpp"

namespace conekit {

namespace {

constexpr std::uint64_t kStreamHardy = 0xA001;
constexpr std::uint64_t kStreamLaplace = 0xA002;
constexpr std::uint64_t kStreamRL = 0xA003;
constexpr std::uint64_t kStreamWeyl = 0xA004;
constexpr std::uint64_t kStreamKernel = 0xA005;
constexpr std::uint64_t kStreamFubini = 0xA006;

double gamma_fn(double r) { return std::tgamma(r); }

// scale of a point used for proposal scales
double point_scale(const Vec& x) { return std::max(1e-6, x.norm()); }

}  // namespace

KernelSpec hardy_kernel(const ConeModel& cone) {
    KernelSpec k;
    k.name = "hardy";
    k.beta = 0.0;
    k.side = KernelSpec::Side::VxV;
    k.y_interval_bound = true;
    k.eval = [cone](const Vec& x, const Vec& y) {
        return cone_less(cone, y, x) ? 1.0 : 0.0;
    };
    return k;
}

KernelSpec laplace_kernel(const ConeModel& cone) {
    KernelSpec k;
    k.name = "laplace";
    k.beta = 0.0;
    k.side = KernelSpec::Side::VxV;
    k.exp_rate_fn = [cone](const Vec& x, const Vec& t) {
        return star(cone, x).x_star.dot(t);
    };
    k.eval = [cone](const Vec& x, const Vec& y) {
        return std::exp(-star(cone, x).x_star.dot(y));
    };
    return k;
}

KernelSpec rl_kernel(const ConeModel& cone, double r) {
    if (r < 1.0) throw std::invalid_argument("rl_kernel: order r must be >= 1");
    KernelSpec k;
    k.name = "rl";
    k.beta = r - 1.0;
    k.side = KernelSpec::Side::VxV;
    k.y_interval_bound = true;
    k.eval = [cone, r](const Vec& x, const Vec& y) {
        if (!cone_less(cone, y, x)) return 0.0;
        const double w = (r == 1.0) ? 1.0 : std::exp((r - 1.0) * log_delta(cone, Vec(x - y)));
        return w / gamma_fn(r);
    };
    return k;
}

KernelSpec weyl_kernel(const ConeModel& cone, double r) {
    if (r < 1.0) throw std::invalid_argument("weyl_kernel: order r must be >= 1");
    KernelSpec k;
    k.name = "weyl";
    k.beta = r - 1.0;
    k.side = KernelSpec::Side::VxV;
    k.eval = [cone, r](const Vec& x, const Vec& y) {
        if (!cone_less(cone, x, y)) return 0.0;
        const double w = (r == 1.0) ? 1.0 : std::exp((r - 1.0) * log_delta(cone, Vec(y - x)));
        return w / gamma_fn(r);
    };
    return k;
}

KernelSpec dual_pairing_kernel(const ConeModel&) {
    KernelSpec k;
    k.name = "dual_pairing";
    k.beta = 0.0;
    k.side = KernelSpec::Side::VstarxV;
    k.exp_rate_fn = [](const Vec& x, const Vec& t) { return x.dot(t); };
    k.eval = [](const Vec& x, const Vec& y) { return std::exp(-x.dot(y)); };
    return k;
}

// ---- test functions -------------------------------------------------------

TestFunction tf_one(const ConeModel& cone) {
    TestFunction f;
    f.id = "one";
    f.decay_declared = true;
    f.eval = [cone](const Vec& y) { return contains(cone, y) ? 1.0 : 0.0; };
    return f;
}

TestFunction tf_zero(const ConeModel& cone) {
    TestFunction f = tf_one(cone);
    f.id = "zero";
    f.exp_rate = 1.0;  // the zero function satisfies any decay declaration
    f.exp_dir = dual(cone).axis();
    f.eval = [](const Vec&) { return 0.0; };
    return f;
}

TestFunction tf_delta_power(const ConeModel& cone, double d) {
    TestFunction f;
    f.id = "delta^" + std::to_string(d);
    f.decay_exponent = d;
    f.decay_declared = true;
    f.eval = [cone, d](const Vec& y) {
        if (!contains(cone, y)) return 0.0;
        return std::exp(d * log_delta(cone, y));
    };
    return f;
}

TestFunction tf_indicator(const ConeModel& cone, const Vec& b) {
    if (!contains(cone, b)) throw std::invalid_argument("tf_indicator: b must lie in the cone");
    TestFunction f;
    f.id = "chi";
    f.decay_declared = true;
    f.interval_support = true;
    f.support_b = b;
    const Vec zero = Vec::Zero(cone.dim());
    f.eval = [cone, zero, b](const Vec& y) {
        return in_interval(cone, zero, b, y) ? 1.0 : 0.0;
    };
    return f;
}

TestFunction tf_exp_damped(const ConeModel& cone, double d, double rate) {
    TestFunction f;
    f.id = "delta^" + std::to_string(d) + "*exp(-" + std::to_string(rate) + "u.y)";
    f.decay_exponent = d;
    f.decay_declared = true;
    f.exp_rate = rate;
    f.exp_dir = dual(cone).axis();
    const Vec dir = f.exp_dir;
    f.eval = [cone, d, rate, dir](const Vec& y) {
        if (!contains(cone, y)) return 0.0;
        const double lg = (d == 0.0) ? 0.0 : d * log_delta(cone, y);
        return std::exp(lg - rate * dir.dot(y));
    };
    return f;
}

TestFunction tf_power_interval(const ConeModel& cone, double d, const Vec& b) {
    TestFunction f = tf_indicator(cone, b);
    f.id = "delta^" + std::to_string(d) + "*chi";
    f.decay_exponent = d;
    const Vec zero = Vec::Zero(cone.dim());
    f.eval = [cone, zero, b, d](const Vec& y) {
        if (!in_interval(cone, zero, b, y)) return 0.0;
        return std::exp(d * log_delta(cone, y));
    };
    return f;
}

TestFunction tf_window_power(const ConeModel& cone, double d, const Vec& a, const Vec& b) {
    TestFunction f = tf_power_interval(cone, d, b);
    f.id = "delta^" + std::to_string(d) + "*window";
    f.has_window = true;
    f.window_a = a;
    const Vec zero = Vec::Zero(cone.dim());
    auto base = f.eval;
    f.eval = [cone, zero, a, base](const Vec& y) {
        if (in_interval(cone, zero, a, y)) return 0.0;
        return base(y);
    };
    return f;
}

TestFunction tf_scale(const TestFunction& f, double c) {
    TestFunction g = f;
    g.id = std::to_string(c) + "*" + f.id;
    auto base = f.eval;
    g.eval = [base, c](const Vec& y) { return c * base(y); };
    return g;
}

TestFunction tf_times_delta_power(const ConeModel& cone, const TestFunction& f, double e) {
    TestFunction g = f;
    g.id = f.id + "*delta^" + std::to_string(e);
    g.decay_exponent = f.decay_exponent + e;
    auto base = f.eval;
    g.eval = [cone, base, e](const Vec& y) {
        if (!contains(cone, y)) return 0.0;
        const double v = base(y);
        if (v == 0.0) return 0.0;
        return v * std::exp(e * log_delta(cone, y));
    };
    return g;
}

TestFunction tf_custom(const ConeModel& cone, const std::string& source, double decay_exponent,
                       bool decay_declared) {
    TestFunction f;
    f.id = "expr:" + source;
    f.decay_exponent = decay_exponent;
    f.decay_declared = decay_declared;
    auto ast = expr::parse(source);
    f.eval = [cone, ast](const Vec& y) {
        if (!contains(cone, y)) return 0.0;
        return expr::evaluate(ast, cone, y);
    };
    return f;
}

// ---- plain-mean cores ------------------------------------------------------

namespace detail_ops {

// sampling domain for integrals of f over <0,x>: when f is supported in a
// much smaller interval <0,b>, draw there and guard with the <0,x> indicator,
// otherwise the hit fraction (and the nested variance) degrades with Delta(x)
IntervalDomain choose_interval_domain(const ConeModel& cone, const TestFunction& f,
                                      const Vec& x) {
    IntervalDomain d;
    d.top = x;
    d.log_scale = log_delta(cone, x);
    d.guard_x = false;
    if (f.interval_support) {
        const double ldb = log_delta(cone, f.support_b);
        if (ldb < d.log_scale) {
            d.top = f.support_b;
            d.log_scale = ldb;
            d.guard_x = true;
        }
    }
    return d;
}

double interval_operator_mean(const ConeModel& cone, double r_or_neg, const TestFunction& f,
                              const Vec& x, std::uint64_t n, std::uint64_t seed,
                              std::uint64_t stream) {
    const IntervalDomain dom = choose_interval_domain(cone, f, x);
    const bool rl = r_or_neg >= 1.0;
    const double r = rl ? r_or_neg : 1.0;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto rng = RngStream::at(seed, stream, i);
        Vec t = sample_interval(cone, dom.top, rng);
        if (dom.guard_x && !cone_less(cone, t, x)) continue;
        double v = f(t);
        if (v != 0.0 && rl && r > 1.0)
            v *= std::exp((r - 1.0) * log_delta(cone, Vec(x - t)));
        sum += v;
    }
    const double scale = std::exp(dom.log_scale) / (rl ? gamma_fn(r) : 1.0);
    return scale * sum / static_cast<double>(n);
}

double laplace_mean(const ConeModel& cone, const TestFunction& f, const Vec& x, std::uint64_t n,
                    std::uint64_t seed, std::uint64_t stream) {
    const Vec xs = star(cone, x).x_star;
    if (f.interval_support) {
        const double ld = log_delta(cone, f.support_b);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            auto rng = RngStream::at(seed, stream, i);
            Vec t = sample_interval(cone, f.support_b, rng);
            const double v = f(t);
            if (v != 0.0) sum += v * std::exp(-xs.dot(t));
        }
        return std::exp(ld) * sum / static_cast<double>(n);
    }
    const int dim = cone.dim();
    const double shape = std::max(0.5, dim * (1.0 + f.decay_exponent));
    auto radial = [&](const Vec& t) {
        double rate = xs.dot(t);
        if (f.exp_rate > 0) rate += f.exp_rate * f.exp_dir.dot(t);
        return RadialProposal::gamma(shape, rate);
    };
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto rng = RngStream::at(seed, stream, i);
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        const double v = f(s.y);
        if (v != 0.0) sum += v * std::exp(-xs.dot(s.y) - s.log_density);
    }
    return sum / static_cast<double>(n);
}

double weyl_mean(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                 std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
    const double gr = gamma_fn(r);
    if (f.interval_support) {
        if (!cone_less(cone, x, f.support_b)) return 0.0;
        const Vec span = f.support_b - x;
        const double ld = log_delta(cone, span);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            auto rng = RngStream::at(seed, stream, i);
            Vec u = sample_interval(cone, span, rng);
            const double v = f(Vec(x + u));
            if (v != 0.0)
                sum += v * ((r == 1.0) ? 1.0 : std::exp((r - 1.0) * log_delta(cone, u)));
        }
        return std::exp(ld) * sum / (gr * static_cast<double>(n));
    }

    const int dim = cone.dim();
    if (f.exp_rate > 0) {
        const double shape = std::max(0.5, dim * (r + std::min(f.decay_exponent, 0.0)));
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            auto rng = RngStream::at(seed, stream, i);
            double cutoff = 0.0;
            auto radial = [&](const Vec& t) {
                const double rate = f.exp_rate * f.exp_dir.dot(t);
                cutoff = (shape + 40.0) / rate;  // declared tail beyond this is e^-40 suppressed
                return RadialProposal::gamma(shape, rate);
            };
            ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
            if (s.y.norm() > cutoff) continue;
            const double v = f(Vec(x + s.y));
            if (v == 0.0) continue;
            const double lk = (r == 1.0) ? 0.0 : (r - 1.0) * log_delta(cone, s.y);
            sum += v * std::exp(lk - s.log_density);
        }
        return sum / (gr * static_cast<double>(n));
    }

    if (!f.decay_declared)
        throw std::invalid_argument("weyl: global support requires a declared decay_exponent");
    if (!(f.decay_exponent < -r))
        throw std::invalid_argument(
            "weyl: declared decay is non-integrable for this order (need decay < -r)");
    const double tail_power = dim * (r + f.decay_exponent) - 1.0;  // < -1 by the check above
    const double a = std::max(0.3, 0.7 * (-tail_power - 1.0));
    auto radial = [&](const Vec&) { return RadialProposal::lomax(a, point_scale(x)); };
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto rng = RngStream::at(seed, stream, i);
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        const double v = f(Vec(x + s.y));
        if (v == 0.0) continue;
        const double lk = (r == 1.0) ? 0.0 : (r - 1.0) * log_delta(cone, s.y);
        sum += v * std::exp(lk - s.log_density);
    }
    return sum / (gr * static_cast<double>(n));
}

double dual_pairing_mean(const ConeModel& cone, const TestFunction& f, const Vec& x,
                         std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
    // x lives on V*, the integral runs over V
    if (f.interval_support) {
        const double ld = log_delta(cone, f.support_b);
        double sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            auto rng = RngStream::at(seed, stream, i);
            Vec t = sample_interval(cone, f.support_b, rng);
            const double v = f(t);
            if (v != 0.0) sum += v * std::exp(-x.dot(t));
        }
        return std::exp(ld) * sum / static_cast<double>(n);
    }
    const int dim = cone.dim();
    const double shape = std::max(0.5, dim * (1.0 + f.decay_exponent));
    auto radial = [&](const Vec& t) {
        double rate = x.dot(t);
        if (f.exp_rate > 0) rate += f.exp_rate * f.exp_dir.dot(t);
        return RadialProposal::gamma(shape, rate);
    };
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto rng = RngStream::at(seed, stream, i);
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        const double v = f(s.y);
        if (v != 0.0) sum += v * std::exp(-x.dot(s.y) - s.log_density);
    }
    return sum / static_cast<double>(n);
}

}  // namespace detail_ops

// ---- public operators (growth-checked) -------------------------------------

namespace {

// growth protocol wrapper over a per-index term
McEstimate growth_checked(std::uint64_t n, const McConfig& mc, Exec exec,
                          const std::function<double(std::uint64_t)>& term) {
    GrowthCheck g = mc_mean_growth(n, mc, exec, term);
    return g.at_4n;
}

}  // namespace

McEstimate hardy(const ConeModel& cone, const TestFunction& f, const Vec& x, const McConfig& mc,
                 Exec exec) {
    if (!contains(cone, x)) throw std::invalid_argument("hardy: x is not in the cone");
    const auto dom = detail_ops::choose_interval_domain(cone, f, x);
    const double d = std::exp(dom.log_scale);
    McEstimate e = growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
        auto rng = RngStream::at(mc.seed, kStreamHardy, i);
        Vec t = sample_interval(cone, dom.top, rng, mc.max_rejections);
        if (dom.guard_x && !cone_less(cone, t, x)) return 0.0;
        return f(t);
    });
    e.value *= d;
    e.stderr_ *= d;
    return e;
}

McEstimate riemann_liouville(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                             const McConfig& mc, Exec exec) {
    if (r < 1.0) throw std::invalid_argument("riemann_liouville: order r must be >= 1");
    if (!contains(cone, x)) throw std::invalid_argument("riemann_liouville: x is not in the cone");
    const auto dom = detail_ops::choose_interval_domain(cone, f, x);
    const double scale = std::exp(dom.log_scale) / gamma_fn(r);
    McEstimate e = growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
        auto rng = RngStream::at(mc.seed, kStreamRL, i);
        Vec t = sample_interval(cone, dom.top, rng, mc.max_rejections);
        if (dom.guard_x && !cone_less(cone, t, x)) return 0.0;
        double v = f(t);
        if (v != 0.0 && r > 1.0) v *= std::exp((r - 1.0) * log_delta(cone, Vec(x - t)));
        return v;
    });
    e.value *= scale;
    e.stderr_ *= scale;
    return e;
}

McEstimate laplace(const ConeModel& cone, const TestFunction& f, const Vec& x, const McConfig& mc,
                   Exec exec) {
    if (!contains(cone, x)) throw std::invalid_argument("laplace: x is not in the cone");
    if (!f.interval_support && !f.decay_declared)
        throw std::invalid_argument("laplace: global support requires a declared decay_exponent");
    const Vec xs = star(cone, x).x_star;
    if (f.interval_support) {
        const double d = delta(cone, f.support_b);
        McEstimate e = growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamLaplace, i);
            Vec t = sample_interval(cone, f.support_b, rng, mc.max_rejections);
            const double v = f(t);
            return v == 0.0 ? 0.0 : v * std::exp(-xs.dot(t));
        });
        e.value *= d;
        e.stderr_ *= d;
        return e;
    }
    const int dim = cone.dim();
    const double shape = std::max(0.5, dim * (1.0 + f.decay_exponent));
    return growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
        auto rng = RngStream::at(mc.seed, kStreamLaplace, i);
        auto radial = [&](const Vec& t) {
            double rate = xs.dot(t);
            if (f.exp_rate > 0) rate += f.exp_rate * f.exp_dir.dot(t);
            return RadialProposal::gamma(shape, rate);
        };
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        const double v = f(s.y);
        return v == 0.0 ? 0.0 : v * std::exp(-xs.dot(s.y) - s.log_density);
    });
}

McEstimate weyl(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                const McConfig& mc, Exec exec) {
    if (r < 1.0) throw std::invalid_argument("weyl: order r must be >= 1");
    if (!contains(cone, x)) throw std::invalid_argument("weyl: x is not in the cone");
    if (!f.interval_support && f.exp_rate <= 0) {
        if (!f.decay_declared)
            throw std::invalid_argument("weyl: global support requires a declared decay_exponent");
        if (!(f.decay_exponent < -r))
            throw std::invalid_argument(
                "weyl: declared decay is non-integrable for this order (need decay < -r)");
    }
    // one growth-checked pass over the core's per-index term
    return growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
        return detail_ops::weyl_mean(cone, r, f, x, 1, mc.seed, RngStream::mix64(kStreamWeyl) ^ i);
    });
}

McEstimate apply_kernel(const ConeModel& cone, const KernelSpec& k, const TestFunction& f,
                        const Vec& x, const McConfig& mc, Exec exec) {
    const ConeModel left = (k.side == KernelSpec::Side::VstarxV) ? dual(cone) : cone;
    if (!contains(left, x))
        throw std::invalid_argument("apply_kernel: x is not in the kernel's left domain");
    if (f.interval_support) {
        const double d = delta(cone, f.support_b);
        McEstimate e = growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamKernel, i);
            Vec t = sample_interval(cone, f.support_b, rng, mc.max_rejections);
            const double v = f(t);
            return v == 0.0 ? 0.0 : v * k.eval(x, t);
        });
        e.value *= d;
        e.stderr_ *= d;
        return e;
    }
    if (k.y_interval_bound) {
        // the kernel vanishes outside <0, x>, so the integrand is interval supported
        const double d = delta(cone, x);
        McEstimate e = growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamKernel, i);
            Vec t = sample_interval(cone, x, rng, mc.max_rejections);
            const double v = f(t);
            return v == 0.0 ? 0.0 : v * k.eval(x, t);
        });
        e.value *= d;
        e.stderr_ *= d;
        return e;
    }
    if (!f.decay_declared)
        throw std::invalid_argument(
            "apply_kernel: global support requires a declared decay_exponent");
    const int dim = cone.dim();
    if (f.exp_rate > 0 || k.exp_rate_fn) {
        const double shape = std::max(0.5, dim * (1.0 + f.decay_exponent + std::max(k.beta, 0.0)));
        return growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamKernel, i);
            auto radial = [&](const Vec& t) {
                double rate = 0.0;
                if (f.exp_rate > 0) rate += f.exp_rate * f.exp_dir.dot(t);
                if (k.exp_rate_fn) rate += k.exp_rate_fn(x, t);
                return RadialProposal::gamma(shape, rate);
            };
            ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
            const double v = f(s.y);
            return v == 0.0 ? 0.0 : v * k.eval(x, s.y) * std::exp(-s.log_density);
        });
    }
    const double tail_power = dim - 1.0 + dim * (f.decay_exponent + k.beta);
    if (!(tail_power < -1.0))
        throw std::invalid_argument(
            "apply_kernel: declared exponents give a non-integrable tail");
    const double a = std::max(0.3, 0.7 * (-tail_power - 1.0));
    return growth_checked(mc.samples, mc, exec, [&](std::uint64_t i) {
        auto rng = RngStream::at(mc.seed, kStreamKernel, i);
        auto radial = [&](const Vec&) { return RadialProposal::lomax(a, point_scale(x)); };
        ConeSample s = sample_cone_global(cone, 0.0, radial, rng);
        const double v = f(s.y);
        return v == 0.0 ? 0.0 : v * k.eval(x, s.y) * std::exp(-s.log_density);
    });
}

TestFunction s_transform(const ConeModel& cone, const TestFunction& f) {
    const ConeModel dc = dual(cone);
    TestFunction g;
    g.id = "S(" + f.id + ")";
    g.decay_exponent = -f.decay_exponent;
    g.decay_declared = f.decay_declared && f.exp_rate == 0 && !f.interval_support;
    auto base = f.eval;
    g.eval = [dc, base](const Vec& y) {
        if (!contains(dc, y)) return 0.0;
        return base(star(dc, y).x_star);
    };
    return g;
}

std::pair<McEstimate, McEstimate> fubini_duality_check(const ConeModel& cone, double r,
                                                       const TestFunction& f,
                                                       const TestFunction& g, const McConfig& mc,
                                                       Exec exec) {
    if (r < 1.0) throw std::invalid_argument("fubini_duality_check: r must be >= 1");
    if (!g.interval_support)
        throw std::invalid_argument("fubini_duality_check: g must be interval-supported");
    if (!f.interval_support && f.exp_rate <= 0 && !(f.decay_declared && f.decay_exponent < -r))
        throw std::invalid_argument("fubini_duality_check: f needs integrable declared decay");

    const std::uint64_t n_out =
        std::max<std::uint64_t>(64, static_cast<std::uint64_t>(std::sqrt(mc.samples / 10.0)));
    const std::uint64_t n_in = 10 * n_out;
    const int dim = cone.dim();

    // left side: integral over V of f * (R_r g), f supplies the decay
    McEstimate lhs;
    if (f.interval_support) {
        const double d = delta(cone, f.support_b);
        GrowthCheck gc = mc_mean_growth(n_out, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamFubini, i);
            Vec x = sample_interval(cone, f.support_b, rng, mc.max_rejections);
            const double v = f(x);
            if (v == 0.0) return 0.0;
            const double rl = detail_ops::interval_operator_mean(
                cone, r, g, x, n_in, mc.seed, RngStream::mix64(kStreamFubini ^ i));
            return v * rl;
        });
        lhs = gc.at_4n;
        lhs.value *= d;
        lhs.stderr_ *= d;
    } else {
        const double shape = std::max(0.5, dim * (r + std::min(f.decay_exponent, 0.0)));
        GrowthCheck gc = mc_mean_growth(n_out, mc, exec, [&](std::uint64_t i) {
            auto rng = RngStream::at(mc.seed, kStreamFubini, i);
            ConeSample s = [&] {
                if (f.exp_rate > 0) {
                    auto radial = [&](const Vec& t) {
                        return RadialProposal::gamma(shape, f.exp_rate * f.exp_dir.dot(t));
                    };
                    return sample_cone_global(cone, 0.0, radial, rng);
                }
                const double tail = dim - 1.0 + dim * (r - 1.0 + f.decay_exponent + 1.0);
                auto radial = [&](const Vec&) {
                    return RadialProposal::lomax(std::max(0.3, 0.7 * (-tail - 1.0)), 1.0);
                };
                return sample_cone_global(cone, 0.0, radial, rng);
            }();
            const double v = f(s.y);
            if (v == 0.0) return 0.0;
            const double rl = detail_ops::interval_operator_mean(
                cone, r, g, s.y, n_in, mc.seed, RngStream::mix64(kStreamFubini ^ i));
            return v * rl * std::exp(-s.log_density);
        });
        lhs = gc.at_4n;
    }

    // right side: integral over <0, b_g> of g * (W_r f)
    const double dg = delta(cone, g.support_b);
    GrowthCheck gc2 = mc_mean_growth(n_out, mc, exec, [&](std::uint64_t i) {
        auto rng = RngStream::at(mc.seed, kStreamFubini + 1, i);
        Vec x = sample_interval(cone, g.support_b, rng, mc.max_rejections);
        const double v = g(x);
        if (v == 0.0) return 0.0;
        const double wf = detail_ops::weyl_mean(cone, r, f, x, n_in, mc.seed,
                                                RngStream::mix64((kStreamFubini + 1) ^ i));
        return v * wf;
    });
    McEstimate rhs = gc2.at_4n;
    rhs.value *= dg;
    rhs.stderr_ *= dg;
    return {lhs, rhs};
}

}  // namespace conekit
