#pragma once

#include "conekit/geometry.hpp"

namespace conekit {

struct StarResult {
    Vec x_star;
    enum class Method { ClosedForm, FiniteDifference } method = Method::ClosedForm;
    double residual_euler = 0;  // |x* . x - n|
};

// x* = -(grad log phi_V(x))^t, closed form for every built-in model
StarResult star(const ConeModel& cone, const Vec& x);

// central-difference gradient of -log phi, the oracle for star()
Vec star_fd(const ConeModel& cone, const Vec& x, double h);

// K_V(x) = -d(x*)/dx; analytic for the orthant, second-order central
// differences of star() otherwise
Mat jacobian_K(const ConeModel& cone, const Vec& x);

// solves x = x* by minimizing log phi on {|x|^2 = n} with a Newton polish
Vec fixed_point(const ConeModel& cone, double tol, int max_iters = 200);

namespace internal {
Vec fixed_point_from(const ConeModel& cone, Vec x0, double tol, int max_iters);
}

}  // namespace conekit
