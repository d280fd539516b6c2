#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conekit/geometry.hpp"
#include "conekit/mc.hpp"
#include "conekit/operators.hpp"

namespace conekit {

enum class Theorem {
    T3_3, T3_4, T3_5, T3_6,
    T3_9, T3_10, T3_11, T3_12,
    T3_13a, T3_13b, T3_13c,
    T3_14a, T3_14b, T3_14c,
    T3_15a, T3_15b, T3_15c,
    Hardy1D, Bradley1D,
};

std::string theorem_name(Theorem t);
Theorem theorem_from_name(const std::string& name);

struct InequalityCase {
    Theorem theorem = Theorem::Hardy1D;
    ConeModel cone = ConeModel::orthant(1);
    double p = 2.0;
    double q = 2.0;      // ignored by the sup-norm variants
    double gamma = 0.0;
    double delta = 0.0;  // used where the theorem takes a chosen delta
    double alpha = 0.0;  // sup-norm variants
    double r = 1.0;      // fractional order
    std::string kernel;  // optional kernel override for the generic theorems
};

struct ConditionReport {
    bool satisfied = false;
    double margin = 0.0;  // distance to the boundary of the condition region
    std::optional<double> witness_delta;
    bool witness_numeric_ok = false;
    std::string notes;
};

ConditionReport check_conditions(const InequalityCase& kase);
// full variant: numerically verifies the finiteness flags at the delta witness
ConditionReport check_conditions(const InequalityCase& kase, const McConfig& mc, Exec exec);

// (integral of f^p * Delta^weight_exp)^{1/p}; p = inf gives the stratified
// sup of f * Delta^weight_exp (a documented lower bound of the ess sup)
McEstimate weighted_norm(const ConeModel& cone, const TestFunction& f, double weight_exp,
                         double p, const McConfig& mc, Exec exec = Exec::OpenMP);

struct FunctionResult {
    std::string id;
    McEstimate lhs, rhs;
    double ratio = 0.0;
    double lhs_growth = 1.0, rhs_growth = 1.0;  // N -> 4N stability of each side
    std::string status;                          // ok | divergent | inconclusive
};

struct VerificationReport {
    InequalityCase kase;
    ConditionReport conditions;
    std::vector<FunctionResult> per_function;
    double max_ratio = 0.0;
    double max_ratio_n = 0.0;   // max ratio recomputed from the N-prefix means
    enum class Verdict { Consistent, Violated, Inconclusive } verdict = Verdict::Inconclusive;
    std::string notes;
};

std::string verdict_name(VerificationReport::Verdict v);

VerificationReport verify(const InequalityCase& kase, const std::vector<TestFunction>& family,
                          const McConfig& mc, Exec exec = Exec::OpenMP);

// default test family for a case (declared-finite on both sides)
std::vector<TestFunction> default_family(const InequalityCase& kase);

struct ProbeRow {
    double truncation = 0.0;
    double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

struct ProbeReport {
    InequalityCase kase;
    std::vector<ProbeRow> rows;
    double total_growth = 1.0;
    bool monotone = false;
    bool violation_evidence = false;
    std::string notes;
};

// ramps the outer-norm truncation radius over decades at a fixed
// near-extremal function; evidence of failure = monotone ratio growth
ProbeReport probe_violation(const InequalityCase& kase, const McConfig& mc,
                            Exec exec = Exec::OpenMP);

// sup_r of the two power-weight factors; +inf sentinel when not finite
double bradley_constant(double u_exp, double v_exp, double p, double q);

}  // namespace conekit
