// Throughput comparison of the serial reference kernels against the OpenMP
// ones, on the estimators that dominate run time.  Results must agree bitwise.
#include <chrono>
#include <cstdio>
#include <vector>

#include "conekit/charfn.hpp"
#include "conekit/geometry.hpp"

using namespace conekit;

namespace {

template <class F>
double time_ms(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

using Op = McEstimate (*)(const ConeModel&, const Vec&, const McConfig&, Exec);

void bench(const char* name, const ConeModel& cone, const Vec& x, const McConfig& mc, Op op) {
    McEstimate serial_est, omp_est;
    const double t_serial = time_ms([&] { serial_est = op(cone, x, mc, Exec::Serial); });
    const double t_omp = time_ms([&] { omp_est = op(cone, x, mc, Exec::OpenMP); });
    const bool identical =
        serial_est.value == omp_est.value && serial_est.stderr_ == omp_est.stderr_;
    std::printf("%-24s serial %8.1f ms   openmp %8.1f ms   speedup %4.2fx   bitwise %s\n", name,
                t_serial, t_omp, t_serial / t_omp, identical ? "equal" : "DIFFER");
}

}  // namespace

int main() {
    McConfig mc;
    mc.samples = 2000000;
    mc.seed = 42;

    const ConeModel orth3 = ConeModel::orthant(3);
    const ConeModel lor3 = ConeModel::lorentz(3);
    Vec x3(3);
    x3 << 1.0, 2.0, 1.5;
    Vec xl(3);
    xl << 0.2, -0.1, 2.0;

    bench("delta_mc orthant(3)", orth3, x3, mc, &delta_mc);
    bench("delta_mc lorentz(3)", lor3, xl, mc, &delta_mc);
    bench("phi_mc orthant(3)", orth3, x3, mc, &phi_mc);
    bench("phi_mc lorentz(3)", lor3, xl, mc, &phi_mc);

    McConfig ms = mc;
    ms.samples = 300000;
    std::vector<double> grid;
    for (double a = -1.4; a <= -0.59; a += 0.2) grid.push_back(a);
    McEstimate dummy;
    (void)dummy;
    const double t_serial =
        time_ms([&] { (void)sigma0_estimate(orth3, grid, ms, Exec::Serial); });
    const double t_omp = time_ms([&] { (void)sigma0_estimate(orth3, grid, ms, Exec::OpenMP); });
    std::printf("%-24s serial %8.1f ms   openmp %8.1f ms   speedup %4.2fx\n",
                "sigma0_estimate orth(3)", t_serial, t_omp, t_serial / t_omp);
    return 0;
}
