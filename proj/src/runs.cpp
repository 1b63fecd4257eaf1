#include "magcool/runs.hpp"

#include <cmath>

#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "magcool/lyapunov.hpp"
#include "magcool/sweep.hpp"

namespace magcool {

using nlohmann::json;

namespace {

const json& payload(const RunConfig& config, const char* name) {
    static const json empty = json::object();
    if (!config.document.contains(name)) return empty;
    const json& p = config.document[name];
    if (!p.is_object()) throw ConfigError(std::string("'") + name + "' payload must be an object");
    return p;
}

void only_keys(const json& p, const char* section, std::initializer_list<const char*> keys) {
    for (const auto& [k, _] : p.items()) {
        bool ok = false;
        for (const char* key : keys) ok = ok || k == key;
        if (!ok) throw ConfigError(std::string("unknown ") + section + " key '" + k + "'");
    }
}

}  // namespace

RunOutput run_spectrum(const RunConfig& config, int threads) {
    const json& p = payload(config, "spectrum");
    only_keys(p, "spectrum", {"min", "max", "n"});
    SpectrumResult s;
    try {
        s = psd_grid(config.params, p.value("min", -3.0), p.value("max", 3.0), p.value("n", 601), threads);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed spectrum payload: ") + e.what());
    }
    double lowest = 0.0;
    for (double v : s.values) lowest = std::min(lowest, v);
    RunOutput out;
    out.tables.emplace_back("spectrum.csv", spectrum_table(s));
    out.summary = {{"points", s.values.size()}, {"min_value", lowest}, {"nonnegative", lowest >= 0.0}};
    return out;
}

RunOutput run_dynamics(const RunConfig& config) {
    const json& p = payload(config, "dynamics");
    only_keys(p, "dynamics", {"n0", "t_min_s", "t_max_s", "n", "scale", "times_s", "method"});
    const SystemParams& params = config.params;
    std::vector<double> seconds;
    double n0 = params.nbar_c;
    std::string method = "rate_equation";
    try {
        n0 = p.value("n0", params.nbar_c);
        method = p.value("method", method);
        if (p.contains("times_s")) {
            seconds = p["times_s"].get<std::vector<double>>();
        } else {
            const std::string scale = p.value("scale", std::string("log"));
            if (scale != "log" && scale != "linear")
                throw ConfigError("dynamics.scale must be 'linear' or 'log', got '" + scale + "'");
            seconds = make_grid(p.value("t_min_s", 1e-6), p.value("t_max_s", 1.0), p.value("n", 400),
                                scale == "log" ? Scale::Log : Scale::Linear);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed dynamics payload: ") + e.what());
    }
    std::vector<double> natural;
    natural.reserve(seconds.size());
    for (double s : seconds) natural.push_back(seconds_to_natural(params, s));

    OccupancyTrajectory traj;
    if (method == "rate_equation") {
        traj = occupancy_dynamics(params, n0, natural);
    } else if (method == "lyapunov") {
        traj = lyapunov_dynamics(params, initial_covariance(params, n0), natural);
    } else {
        throw ConfigError("dynamics.method must be rate_equation or lyapunov, got '" + method + "'");
    }

    CsvTable t{{"t_s", "n_c"}, {}};
    for (std::size_t k = 0; k < seconds.size(); ++k) t.rows.push_back({seconds[k], traj.occupancies[k]});
    RunOutput out;
    out.tables.emplace_back("trajectory.csv", std::move(t));
    out.summary = {{"method", method}, {"n0", n0}};
    const RatePair r = rates(params);
    out.summary["n_inf"] = nullptr;
    out.summary["crossing_time_s"] = nullptr;
    if (params.gamma_c + r.net() > 0.0) {
        out.summary["n_inf"] = steady_occupancy(params, r.cooling, r.heating);
        if (const auto crossing = crossing_time(params, n0))
            out.summary["crossing_time_s"] = natural_to_seconds(params, *crossing);
    }
    return out;
}

RunOutput run_sweep_config(const RunConfig& config, int threads) {
    if (!config.document.contains("sweep")) throw ConfigError("sweep needs a 'sweep' payload in the config");
    if (config.mode != EntryMode::Direct) throw ConfigError("sweep runs on direct-mode parameters only");
    const SweepSpec spec = sweep_from_json(config.document["sweep"], config.params);
    const SweepResult result = run_sweep(spec, threads);
    RunOutput out;
    out.tables = sweep_tables(result);
    out.summary = sweep_status(result);
    return out;
}

}  // namespace magcool
