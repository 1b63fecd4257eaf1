#pragma once

// Table-producing runs shared by the CLI subcommands and the figure bundles,
// so a bundle's config file re-runs through exactly the same code.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "magcool/config.hpp"
#include "magcool/io.hpp"

namespace magcool {

struct RunOutput {
    std::vector<std::pair<std::string, CsvTable>> tables;  // file name, table
    nlohmann::json summary;                                 // status flags, scalars
};

/// "spectrum": {min, max, n}; defaults -3, 3, 601. Writes spectrum.csv.
RunOutput run_spectrum(const RunConfig& config, int threads = 0);

/// "dynamics": {n0, t_min_s, t_max_s, n, scale, method} or {n0, times_s, method}.
/// n0 defaults to nbar_c; method is rate_equation (default) or lyapunov.
/// Writes trajectory.csv with columns t_s,n_c.
RunOutput run_dynamics(const RunConfig& config);

/// "sweep": see sweep_from_json. Writes one CSV per observable.
RunOutput run_sweep_config(const RunConfig& config, int threads = 0);

}  // namespace magcool
