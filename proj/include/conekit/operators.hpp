#pragma once

#include <functional>
#include <string>
#include <utility>

#include "conekit/geometry.hpp"
#include "conekit/mc.hpp"
#include "conekit/sampling.hpp"

namespace conekit {

// Kernel k(x,y) with its declared homogeneity order and side.  The two
// optional hints describe the kernel's own y-decay so apply_kernel can build a
// sound proposal: y_interval_bound marks kernels vanishing outside <0,x>, and
// exp_rate_fn gives an exponential decay rate along the section direction t.
struct KernelSpec {
    std::string name;
    std::function<double(const Vec&, const Vec&)> eval;
    double beta = 0.0;
    enum class Side { VxV, VstarxV } side = Side::VxV;
    bool y_interval_bound = false;
    std::function<double(const Vec& x, const Vec& t)> exp_rate_fn;
};

KernelSpec hardy_kernel(const ConeModel& cone);                   // indicator of y < x, beta 0
KernelSpec laplace_kernel(const ConeModel& cone);                 // exp(-x*.y), beta 0
KernelSpec rl_kernel(const ConeModel& cone, double r);            // Delta^{r-1}(x-y)/Gamma(r)
KernelSpec weyl_kernel(const ConeModel& cone, double r);          // Delta^{r-1}(y-x)/Gamma(r)
KernelSpec dual_pairing_kernel(const ConeModel& cone);            // exp(-x.y) on V* x V

// Nonnegative test function on V with declared behavior at infinity:
// |f(y)| <= C * Delta^{decay_exponent}(y) * exp(-exp_rate * <exp_dir, y>).
struct TestFunction {
    std::string id = "f";
    std::function<double(const Vec&)> eval;
    double decay_exponent = 0.0;
    bool decay_declared = false;
    double exp_rate = 0.0;
    Vec exp_dir;
    bool interval_support = false;
    Vec support_b;   // support contained in <0, b>
    bool has_window = false;
    Vec window_a;    // vanishes on <0, a> (window families)

    double operator()(const Vec& y) const { return eval(y); }
};

TestFunction tf_one(const ConeModel& cone);
TestFunction tf_zero(const ConeModel& cone);
TestFunction tf_delta_power(const ConeModel& cone, double d);
TestFunction tf_indicator(const ConeModel& cone, const Vec& b);
TestFunction tf_exp_damped(const ConeModel& cone, double d, double rate);
TestFunction tf_power_interval(const ConeModel& cone, double d, const Vec& b);
TestFunction tf_window_power(const ConeModel& cone, double d, const Vec& a, const Vec& b);
TestFunction tf_scale(const TestFunction& f, double c);
// f times Delta^e (used for the sup-norm variants' twisted arguments)
TestFunction tf_times_delta_power(const ConeModel& cone, const TestFunction& f, double e);
// custom expression in the config grammar; decay must be declared by the caller
TestFunction tf_custom(const ConeModel& cone, const std::string& source, double decay_exponent,
                       bool decay_declared);

// ---- operator evaluation -------------------------------------------------

McEstimate apply_kernel(const ConeModel& cone, const KernelSpec& k, const TestFunction& f,
                        const Vec& x, const McConfig& mc, Exec exec = Exec::OpenMP);
McEstimate hardy(const ConeModel& cone, const TestFunction& f, const Vec& x, const McConfig& mc,
                 Exec exec = Exec::OpenMP);
McEstimate laplace(const ConeModel& cone, const TestFunction& f, const Vec& x, const McConfig& mc,
                   Exec exec = Exec::OpenMP);
McEstimate riemann_liouville(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                             const McConfig& mc, Exec exec = Exec::OpenMP);
McEstimate weyl(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                const McConfig& mc, Exec exec = Exec::OpenMP);

// Sf(x) = f(x*) for x in V*; the result lives on the dual cone
TestFunction s_transform(const ConeModel& cone, const TestFunction& f);

// both sides of  ∫(R_r g) f = ∫ g (W_r f)  with nested estimators
std::pair<McEstimate, McEstimate> fubini_duality_check(const ConeModel& cone, double r,
                                                       const TestFunction& f,
                                                       const TestFunction& g, const McConfig& mc,
                                                       Exec exec = Exec::OpenMP);

// ---- plain-mean cores shared with the harness (no growth protocol) -------
namespace detail_ops {
struct IntervalDomain {
    Vec top;
    double log_scale = 0.0;
    bool guard_x = false;
};
IntervalDomain choose_interval_domain(const ConeModel& cone, const TestFunction& f, const Vec& x);
double interval_operator_mean(const ConeModel& cone, double r_or_neg,  // r>=1: RL; <0: Hardy
                              const TestFunction& f, const Vec& x, std::uint64_t n,
                              std::uint64_t seed, std::uint64_t stream);
double laplace_mean(const ConeModel& cone, const TestFunction& f, const Vec& x, std::uint64_t n,
                    std::uint64_t seed, std::uint64_t stream);
double weyl_mean(const ConeModel& cone, double r, const TestFunction& f, const Vec& x,
                 std::uint64_t n, std::uint64_t seed, std::uint64_t stream);
double dual_pairing_mean(const ConeModel& cone, const TestFunction& f, const Vec& x,
                         std::uint64_t n, std::uint64_t seed, std::uint64_t stream);
}  // namespace detail_ops

}  // namespace conekit
