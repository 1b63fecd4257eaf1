#pragma once

#include <string>
#include <vector>

namespace magcool {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Cross-module oracle checks: closed-form reduction of the general spectrum,
/// Lyapunov versus the occupancy formula, sweep/point consistency, spectrum
/// nonnegativity, occupancy inversion and coupling volume invariance.
std::vector<CheckResult> run_validation(unsigned seed = 20240601u, int threads = 0);

}  // namespace magcool
