#include "conekit/sampling.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "conekit/charfn.hpp"
#include "conekit/numerics.hpp"

namespace conekit {

namespace {

[[noreturn]] void rejection_exhausted(const char* where) {
    throw std::runtime_error(std::string(where) +
                             ": rejection budget exhausted (degenerate geometry)");
}

}  // namespace

Vec sample_interval(const ConeModel& cone, const Vec& x, RngStream& rng,
                    std::uint64_t max_rejections) {
    if (!contains(cone, x)) throw std::invalid_argument("sample_interval: x is not in the cone");
    switch (cone.kind()) {
        case ConeKind::Orthant: {
            Vec y(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = rng.u01() * x[i];
            return y;
        }
        case ConeKind::Simplicial: {
            const Vec u = cone.matrix_inv() * x;
            Vec y(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = rng.u01() * u[i];
            return cone.matrix() * y;
        }
        default: {
            const Box box = interval_box(cone, x);
            const Vec zero = Vec::Zero(cone.dim());
            for (std::uint64_t k = 0; k < max_rejections; ++k) {
                Vec y(cone.dim());
                for (int i = 0; i < cone.dim(); ++i) y[i] = rng.uniform(box.lo[i], box.hi[i]);
                if (in_interval(cone, zero, x, y)) return y;
            }
            rejection_exhausted("sample_interval");
        }
    }
}

Vec sample_section(const ConeModel& cone, RngStream& rng, std::uint64_t max_rejections) {
    const int n = cone.dim();
    for (std::uint64_t k = 0; k < max_rejections; ++k) {
        Vec t(n);
        for (int i = 0; i < n; ++i) t[i] = rng.normal();
        const double nrm = t.norm();
        if (nrm == 0.0) continue;
        t /= nrm;
        if (contains(cone, t)) return t;
    }
    rejection_exhausted("sample_section");
}

double RadialProposal::sample(RngStream& rng) const {
    if (kind == Kind::Gamma) return rng.gamma(shape) / scale;
    return this->inverse_cdf(rng.u01());
}

double RadialProposal::log_pdf(double rho) const {
    if (kind == Kind::Gamma)
        return shape * std::log(scale) - std::lgamma(shape) + (shape - 1.0) * std::log(rho) -
               scale * rho;
    return std::log(shape / scale) - (shape + 1.0) * std::log1p(rho / scale);
}

double RadialProposal::inverse_cdf(double u) const {
    if (kind != Kind::Lomax)
        throw std::logic_error("RadialProposal::inverse_cdf: only the Lomax tail is invertible");
    return scale * (std::pow(1.0 - u, -1.0 / shape) - 1.0);
}

namespace {

SectionSample tilted_impl(const ConeModel& cone, double tau, RngStream& rng,
                          std::uint64_t max_rejections);

// factors[0] x product(factors[1..]) via the bipolar split of the sphere
SectionSample tilted_product(std::span<const ConeModel> factors, int total_dim, double tau,
                             RngStream& rng, std::uint64_t max_rejections) {
    if (factors.size() == 1) return tilted_impl(factors[0], tau, rng, max_rejections);
    const ConeModel& first = factors[0];
    const int n1 = first.dim();
    const int n2 = total_dim - n1;

    SectionSample s1 = tilted_impl(first, tau, rng, max_rejections);
    SectionSample s2 = tilted_product(factors.subspan(1), n2, tau, rng, max_rejections);

    const double a1 = 0.5 * n1 * (1.0 + tau);
    const double a2 = 0.5 * n2 * (1.0 + tau);
    const double c = rng.beta(a1, a2);
    const double ch = std::sqrt(c), sh = std::sqrt(1.0 - c);

    SectionSample out;
    out.t.resize(total_dim);
    out.t.head(n1) = ch * s1.t;
    out.t.tail(n2) = sh * s2.t;
    out.log_density = std::log(2.0) - log_beta(a1, a2) + n1 * tau * std::log(ch) +
                      n2 * tau * std::log(sh) + s1.log_density + s2.log_density;
    out.log_delta =
        n1 * std::log(ch) + s1.log_delta + n2 * std::log(sh) + s2.log_delta;
    return out;
}

SectionSample tilted_orthant_like(const Mat* a, double log_abs_det, int n, double tau,
                                  RngStream& rng) {
    Vec u(n);  // base orthant draw
    double sum_log_u = 0.0, sum_u = 0.0;
    for (int i = 0; i < n; ++i) {
        u[i] = rng.gamma(1.0 + tau);
        sum_log_u += std::log(u[i]);
        sum_u += u[i];
    }
    Vec y = a ? Vec((*a) * u) : u;
    const double nrm = y.norm();
    const double log_nrm = std::log(nrm);
    SectionSample s;
    s.t = y / nrm;
    // in normalized coordinates the base draw becomes u/|y|
    s.log_density = std::lgamma(n * (1.0 + tau)) - n * std::lgamma(1.0 + tau) +
                    tau * (sum_log_u - n * log_nrm) -
                    n * (1.0 + tau) * (std::log(sum_u) - log_nrm) - log_abs_det;
    s.log_delta = log_abs_det + sum_log_u - n * log_nrm;
    return s;
}

SectionSample tilted_lorentz(int n, double tau, RngStream& rng, std::uint64_t max_rejections) {
    // boundary coordinates u = y_n - |y'|, v = y_n + |y'|; target density on the
    // cone is (uv)^s exp(-y_n) with s = n*tau/2
    const double s = 0.5 * n * tau;
    double u = 0.0, v = 0.0;
    if (n == 2) {
        const double g1 = 2.0 * rng.gamma(s + 1.0);
        const double g2 = 2.0 * rng.gamma(s + 1.0);
        u = std::min(g1, g2);
        v = std::max(g1, g2);
    } else {
        const int m = n - 2;
        bool ok = false;
        for (std::uint64_t k = 0; k < max_rejections; ++k) {
            // envelope (a^m + b^m) mixture, accept with |a-b|^m / (2^{m-1}(a^m+b^m))
            double a, b;
            if (rng.u01() < 0.5) {
                a = 2.0 * rng.gamma(s + m + 1.0);
                b = 2.0 * rng.gamma(s + 1.0);
            } else {
                a = 2.0 * rng.gamma(s + 1.0);
                b = 2.0 * rng.gamma(s + m + 1.0);
            }
            const double num = std::pow(std::abs(a - b), m);
            const double den = std::pow(2.0, m - 1) * (std::pow(a, m) + std::pow(b, m));
            if (rng.u01() * den < num) {
                u = std::min(a, b);
                v = std::max(a, b);
                ok = true;
                break;
            }
        }
        if (!ok) rejection_exhausted("sample_section_tilted(lorentz)");
    }
    const double yn = 0.5 * (u + v);
    const double rr = 0.5 * (v - u);
    Vec y(n);
    if (n == 2) {
        y[0] = (rng.u01() < 0.5 ? -rr : rr);
    } else {
        Vec w(n - 1);
        for (int i = 0; i < n - 1; ++i) w[i] = rng.normal();
        const double wn = w.norm();
        y.head(n - 1) = (wn > 0 ? Vec(w / wn * rr) : Vec::Zero(n - 1));
    }
    y[n - 1] = yn;

    SectionSample out;
    const double nrm = y.norm();
    const double log_nrm = std::log(nrm);
    out.t = y / nrm;
    const double log_uv = std::log(u) + std::log(v);  // exact; u,v are the draws
    const double log_tn = std::log(yn) - log_nrm;
    // q(t) = 2/(|S^{n-2}| B((n-1)/2, s+1)) (u_t v_t)^s t_n^{-(2s+n)}
    const double log_norm =
        std::log(2.0) - std::log(sphere_area(n - 1)) - log_beta(0.5 * (n - 1), s + 1.0);
    out.log_density = log_norm + s * (log_uv - 2.0 * log_nrm) - (2.0 * s + n) * log_tn;
    out.log_delta =
        std::log(lorentz_calibration(n).delta_ref) + 0.5 * n * (log_uv - 2.0 * log_nrm);
    return out;
}

SectionSample tilted_impl(const ConeModel& cone, double tau, RngStream& rng,
                          std::uint64_t max_rejections) {
    if (tau <= -0.98)
        throw std::invalid_argument("sample_section_tilted: tau must exceed -0.98");
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return tilted_orthant_like(nullptr, 0.0, cone.dim(), tau, rng);
        case ConeKind::Simplicial:
            return tilted_orthant_like(&cone.matrix(), std::log(cone.abs_det()), cone.dim(), tau,
                                       rng);
        case ConeKind::Lorentz:
            return tilted_lorentz(cone.dim(), tau, rng, max_rejections);
        case ConeKind::Product: {
            const auto& fs = cone.factors();
            return tilted_product(std::span<const ConeModel>(fs.data(), fs.size()), cone.dim(),
                                  tau, rng, max_rejections);
        }
    }
    throw std::logic_error("sample_section_tilted: bad kind");
}

}  // namespace

SectionSample sample_section_tilted(const ConeModel& cone, double tau, RngStream& rng,
                                    std::uint64_t max_rejections) {
    return tilted_impl(cone, tau, rng, max_rejections);
}

ConeSample sample_cone_global(const ConeModel& cone, double tau,
                              const std::function<RadialProposal(const Vec&)>& radial,
                              RngStream& rng) {
    SectionSample s = sample_section_tilted(cone, tau, rng);
    const RadialProposal rp = radial(s.t);
    const double rho = rp.sample(rng);
    ConeSample out;
    out.y = rho * s.t;
    out.log_density = s.log_density + rp.log_pdf(rho) - (cone.dim() - 1) * std::log(rho);
    out.log_delta = s.log_delta + cone.dim() * std::log(rho);
    return out;
}

Vec sample_cone_point(const ConeModel& cone, RngStream& rng, double min_rel_boundary) {
    const double scale = std::sqrt(static_cast<double>(cone.dim()));
    for (int tries = 0; tries < 10000; ++tries) {
        SectionSample s = sample_section_tilted(cone, 0.0, rng);
        const double rho = scale * (0.25 + rng.gamma(2.0) * 0.5);
        Vec x = rho * s.t;
        if (min_rel_boundary <= 0.0 ||
            boundary_distance(cone, x) >= min_rel_boundary * x.norm())
            return x;
    }
    rejection_exhausted("sample_cone_point");
}

}  // namespace conekit
