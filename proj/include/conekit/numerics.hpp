#pragma once

#include <cmath>
#include <functional>

namespace conekit {

// surface area of the unit sphere S^{n-1} in R^n
inline double sphere_area(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

// volume of the unit ball in R^m (m = 0 gives 1)
inline double ball_volume(int m) {
    return std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// adaptive Simpson quadrature on [a,b]
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 60);

}  // namespace conekit
