#include "conekit/starmap.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "conekit/charfn.hpp"

namespace conekit {

namespace {

Vec star_closed(const ConeModel& cone, const Vec& x) {
    switch (cone.kind()) {
        case ConeKind::Orthant:
            return x.cwiseInverse();
        case ConeKind::Lorentz: {
            const int n = cone.dim();
            const double r = x.head(n - 1).norm();
            const double q = (x[n - 1] - r) * (x[n - 1] + r);
            Vec s(n);
            s.head(n - 1) = -x.head(n - 1);
            s[n - 1] = x[n - 1];
            return (n / q) * s;
        }
        case ConeKind::Simplicial: {
            Vec u = cone.matrix_inv() * x;
            return cone.matrix_inv().transpose() * Vec(u.cwiseInverse());
        }
        case ConeKind::Product: {
            Vec s(cone.dim());
            int off = 0;
            for (const auto& f : cone.factors()) {
                s.segment(off, f.dim()) = star_closed(f, x.segment(off, f.dim()));
                off += f.dim();
            }
            return s;
        }
    }
    throw std::logic_error("star: bad kind");
}

double fd_step(const Vec& x) { return std::max(1e-6, 1e-6 * x.norm()); }

}  // namespace

StarResult star(const ConeModel& cone, const Vec& x) {
    if (!contains(cone, x)) throw std::invalid_argument("star: x is not in the open cone");
    StarResult r;
    r.x_star = star_closed(cone, x);
    r.method = StarResult::Method::ClosedForm;
    r.residual_euler = std::abs(r.x_star.dot(x) - static_cast<double>(cone.dim()));
    return r;
}

Vec star_fd(const ConeModel& cone, const Vec& x, double h) {
    if (!(h > 0)) throw std::invalid_argument("star_fd: h must be positive");
    if (!contains(cone, x)) throw std::invalid_argument("star_fd: x is not in the open cone");
    if (boundary_distance(cone, x) <= h)
        throw std::runtime_error("star_fd: stencil leaves the cone; reduce h or move inward");
    const int n = cone.dim();
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = -(log_phi(cone, xp) - log_phi(cone, xm)) / (2.0 * h);
    }
    return g;
}

Mat jacobian_K(const ConeModel& cone, const Vec& x) {
    if (!contains(cone, x)) throw std::invalid_argument("jacobian_K: x is not in the open cone");
    const int n = cone.dim();
    if (cone.kind() == ConeKind::Orthant)
        return Vec(x.array().square().inverse()).asDiagonal();
    const double h = fd_step(x);
    if (boundary_distance(cone, x) <= 10.0 * h)
        throw std::runtime_error("jacobian_K: point too close to the boundary for the stencil");
    Mat k(n, n);
    for (int j = 0; j < n; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        Vec col = -(star_closed(cone, xp) - star_closed(cone, xm)) / (2.0 * h);
        k.col(j) = col;
    }
    return k;
}

namespace internal {

Vec fixed_point_from(const ConeModel& cone, Vec x, double tol, int max_iters) {
    const int n = cone.dim();
    const double sn = std::sqrt(static_cast<double>(n));
    x *= sn / x.norm();
    if (!contains(cone, x))
        throw std::invalid_argument("fixed_point: start point is not in the cone");

    // projected gradient descent of log phi on the sphere |x|^2 = n
    double f = log_phi(cone, x);
    for (int it = 0; it < max_iters; ++it) {
        const Vec g = -star_closed(cone, x);  // grad log phi
        Vec gt = g - (g.dot(x) / static_cast<double>(n)) * x;
        if (gt.norm() < 1e-12) break;
        double step = 1.0 / std::max(1.0, gt.norm());
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec y = x - step * gt;
            y *= sn / y.norm();
            if (contains(cone, y)) {
                const double fy = log_phi(cone, y);
                if (fy <= f - 0.25 * step * gt.squaredNorm() / (1.0 + gt.norm())) {
                    x = y;
                    f = fy;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    // Newton polish on x* - x = 0
    for (int it = 0; it < 50; ++it) {
        const Vec res = star_closed(cone, x) - x;
        if (res.norm() < 0.1 * tol) break;
        Mat j = jacobian_K(cone, x) + Mat::Identity(n, n);
        Vec dx = j.ldlt().solve(res);
        Vec y = x + dx;
        if (!contains(cone, y)) {
            double damp = 0.5;
            while (damp > 1e-6 && !contains(cone, Vec(x + damp * dx))) damp *= 0.5;
            y = x + damp * dx;
            if (!contains(cone, y)) break;
        }
        x = y;
    }

    const double res = (star_closed(cone, x) - x).norm();
    if (!(res < tol)) {
        std::ostringstream os;
        os << "fixed_point: no convergence, |x*-x| = " << res << " at last iterate [";
        for (int i = 0; i < n; ++i) os << (i ? "," : "") << x[i];
        os << "]";
        throw std::runtime_error(os.str());
    }
    return x;
}

}  // namespace internal

Vec fixed_point(const ConeModel& cone, double tol, int max_iters) {
    return internal::fixed_point_from(cone, cone.axis(), tol, max_iters);
}

}  // namespace conekit
