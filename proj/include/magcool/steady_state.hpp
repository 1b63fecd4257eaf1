#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "magcool/model.hpp"

namespace magcool {

/// Classical steady-state amplitudes (dimensionless mode amplitudes).
struct SteadyState {
    cplx a0{};
    cplx m0{};
    cplx c0{};
    double residual = 0.0;  // max |x - RHS(x)| over the three fixed-point equations
    int iterations = 0;
    bool multistable = false;
    std::vector<std::array<cplx, 3>> roots;  // every distinct converged root (CMI only)
};

/// Cavity-only steady state with m0 = c0 = 0. Drive in omega_c units.
/// Throws ThresholdError when |gamma_a/2 + i Delta_a|^2 = 4|eps_a|^2.
SteadyState solve_mcm(const SystemParams& params, cplx drive);

struct CmiSolverOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
    int max_halvings = 40;
    int starts = 8;
    double distinct_root_distance = 1e-6;
};

/// Full three-mode steady state. `coupling` is G_amc in omega_c units.
SteadyState solve_cmi(const SystemParams& params, cplx cavity_drive, cplx magnon_drive, double coupling,
                      const CmiSolverOptions& options = {});

/// Max-norm residual of the fixed-point equations at (a0, m0, c0).
double cmi_residual(const SystemParams& params, cplx cavity_drive, cplx magnon_drive, double coupling,
                    cplx a0, cplx m0, cplx c0);

struct EffectiveCouplings {
    double J_ac;
    double J_mc;
    double J_am;
};

EffectiveCouplings effective_couplings(const SteadyState& steady, double coupling);

/// Linearized fluctuation model in the ladder basis (da, da+, dm, dm+[, dc, dc+]).
///
/// Input channels share the basis ordering: channel k drives row k through
/// noise_map(k, k), and <xi_i(w) xi_j(w')> = 2 pi delta(w + w') input_correlations(i, j).
struct DriftModel {
    int dimension = 4;
    Eigen::MatrixXcd drift;
    Eigen::MatrixXd noise_map;
    Eigen::MatrixXcd input_correlations;
};

DriftModel build_drift(const SystemParams& params, bool include_cm);

struct StabilityReport {
    std::vector<double> eigenvalue_real_parts;
    bool stable = false;
    double margin = 0.0;       // smallest |Re lambda|
    cplx worst_eigenvalue{};   // eigenvalue with the largest real part
};

StabilityReport stability(const DriftModel& model);

/// As `stability`, but throws InstabilityError naming the offending eigenvalue.
StabilityReport assert_stable(const DriftModel& model);

/// Throws ThresholdError if the bare cavity is at or above parametric threshold.
void check_parametric_threshold(const SystemParams& params);

}  // namespace magcool
