#pragma once

#include <optional>
#include <vector>

#include "conekit/geometry.hpp"
#include "conekit/mc.hpp"

namespace conekit {

// interval-volume function Delta_V and characteristic function phi_V
double log_delta(const ConeModel& cone, const Vec& x);
double delta(const ConeModel& cone, const Vec& x);
double log_phi(const ConeModel& cone, const Vec& x);
double phi(const ConeModel& cone, const Vec& x);

// Monte Carlo cross-checks, independent of the closed forms above
McEstimate delta_mc(const ConeModel& cone, const Vec& x, const McConfig& mc,
                    Exec exec = Exec::OpenMP);
McEstimate phi_mc(const ConeModel& cone, const Vec& x, const McConfig& mc,
                  Exec exec = Exec::OpenMP);

// Lorentz normalization constants, calibrated once by quadrature and cached.
// delta_ref = Delta(e_n), phi_ref = phi(e_n) at the reference point (0,..,0,1).
struct LorentzCalibration {
    double delta_ref;
    double phi_ref;
    double accuracy;
};
const LorentzCalibration& lorentz_calibration(int n);

// Calibration cache location: CONEKIT_CACHE env var, else a per-user default.
std::string calibration_cache_path();
void invalidate_calibration_cache();  // test hook: drop the in-memory copy

struct SigmaMethod {
    enum Value { ClosedForm, Estimated } value = ClosedForm;
};

struct SigmaAlphaRow {
    double alpha = 0;
    double estimate_n = 0;
    double estimate_4n = 0;
    double growth = 1;
    bool divergent = false;
};

struct SigmaReport {
    double sigma0 = 0;  // -inf when the section integral is finite for every alpha
    double sigma = 0;   // max(-1, sigma0)
    SigmaMethod::Value method = SigmaMethod::ClosedForm;
    double bracket_low = 0, bracket_high = 0;
    bool one_sided = false;
    double tail_exponent = 0;  // estimated boundary exponent theta (estimated mode)
    std::vector<SigmaAlphaRow> rows;
};

SigmaReport sigma0_closed(const ConeModel& cone);
double sigma_of(const ConeModel& cone);  // max(-1, sigma0) closed form

SigmaReport sigma0_estimate(const ConeModel& cone, const std::vector<double>& alphas,
                            const McConfig& mc, Exec exec = Exec::OpenMP);

}  // namespace conekit
