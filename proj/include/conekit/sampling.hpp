#pragma once

#include "conekit/geometry.hpp"
#include "conekit/rng.hpp"

namespace conekit {

// Uniform draw from the cone interval <0, x>.  Orthant and simplicial models
// sample directly; Lorentz and product models reject from the bounding box.
Vec sample_interval(const ConeModel& cone, const Vec& x, RngStream& rng,
                    std::uint64_t max_rejections = 1000000);

// Approximately uniform draw from the section Sigma_V = V ∩ S^{n-1} by
// rejection from the sphere.
Vec sample_section(const ConeModel& cone, RngStream& rng,
                   std::uint64_t max_rejections = 1000000);

// A section draw together with its exact density w.r.t. the surface measure.
// log_delta is computed from the construction variables, which stays accurate
// for draws near the section boundary where recomputing Delta(t) from the
// normalized coordinates cancels catastrophically.
struct SectionSample {
    Vec t;
    double log_density;
    double log_delta;
};

// Importance draw on Sigma_V with density proportional to Delta^tau times a
// bounded factor whose normalization is known in closed form.  tau = 0 gives a
// rejection-free all-purpose proposal; tau < 0 pushes mass toward the section
// boundary.  Requires tau > -1 + 0.02 (Gamma shapes must stay positive).
SectionSample sample_section_tilted(const ConeModel& cone, double tau, RngStream& rng,
                                    std::uint64_t max_rejections = 1000000);

// Radial proposal for global integrals over V: y = rho * t.
struct RadialProposal {
    enum class Kind { Gamma, Lomax } kind = Kind::Gamma;
    double shape = 1.0;  // Gamma shape / Lomax tail index
    double scale = 1.0;  // Gamma rate / Lomax scale

    static RadialProposal gamma(double shape, double rate) {
        return {Kind::Gamma, shape, rate};
    }
    static RadialProposal lomax(double shape, double scale) {
        return {Kind::Lomax, shape, scale};
    }
    double sample(RngStream& rng) const;
    double log_pdf(double rho) const;
    double inverse_cdf(double u) const;  // Lomax only (used for stratified draws)
};

struct ConeSample {
    Vec y;
    double log_density;  // w.r.t. Lebesgue measure on V
    double log_delta;    // Delta_V(y), carried exactly from the construction
};

// Global draw y = rho*t on V with exact density; the radial proposal may
// depend on the section draw (e.g. exponential kernels).
ConeSample sample_cone_global(const ConeModel& cone, double tau,
                              const std::function<RadialProposal(const Vec&)>& radial,
                              RngStream& rng);

// generic interior point at O(sqrt(n)) scale, optionally kept away from the
// boundary (relative to |x|); used by randomized checks
Vec sample_cone_point(const ConeModel& cone, RngStream& rng, double min_rel_boundary = 0.0);

}  // namespace conekit
