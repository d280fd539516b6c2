#pragma once

#include <vector>

#include "conekit/mc.hpp"
#include "conekit/report.hpp"

namespace conekit::selftest {

// runs the full invariant suite at the given (reduced) budget; one entry per check
std::vector<JUnitCase> run(const McConfig& mc, Exec exec);

}  // namespace conekit::selftest
