#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "magcool/model.hpp"

namespace magcool {

/// Free parameters. EpsA contributes two coordinates, |eps_a| and arg eps_a.
enum class FreeParam { Rs, PhiS, EpsA, Jac, Jmc, Jam };

enum class Objective { Occupancy, HeatingRatio, StokesPsd };

FreeParam parse_free_param(std::string_view name);      // r_s, phi_s, eps_a, J_ac, J_mc, J_am
Objective parse_objective(std::string_view name);       // n_c, ratio, stokes
std::string_view to_string(Objective o);

struct OptimizerOptions {
    int grid_points = 7;          // per coordinate
    int starts = 3;               // simplex runs launched from the best grid points
    double tolerance = 1e-8;      // simplex size at convergence
    int max_evaluations = 2000;   // per simplex run
    int threads = 0;
};

struct TracePoint {
    int evaluations;
    double best;
};

struct OptimizationResult {
    SystemParams optimal;
    double objective_value = 0.0;
    double base_value = 0.0;
    std::vector<TracePoint> trace;  // from the run that produced the optimum
    bool converged = false;
    int evaluations = 0;            // total, grid included
};

/// Objective at one point; +inf when the point is unstable, runaway or out of bounds.
double objective_value(const SystemParams& params, Objective objective);

/// Coarse grid over the free coordinates, then Nelder-Mead from the best few
/// grid points (and the base). Bounds: r_s in [0, 3], phi_s periodic,
/// |eps_a| <= 0.95 of the parametric threshold, couplings in [0, 1].
OptimizationResult optimize_interference(const SystemParams& base, const std::vector<FreeParam>& free,
                                         Objective objective = Objective::Occupancy,
                                         const OptimizerOptions& options = {});

nlohmann::json to_json(const OptimizationResult& result, Objective objective);

}  // namespace magcool
