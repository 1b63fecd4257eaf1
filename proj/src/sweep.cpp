#include "magcool/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magcool/errors.hpp"
#include "magcool/parallel.hpp"

namespace magcool {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct ObservableName {
    Observable id;
    const char* name;
};

constexpr ObservableName kObservables[] = {
    {Observable::Spectrum, "S_F"},       {Observable::GammaMinus, "Gamma_minus"},
    {Observable::GammaPlus, "Gamma_plus"}, {Observable::GammaNet, "Gamma_net"},
    {Observable::Occupancy, "n_c"},      {Observable::Threshold, "q_threshold"},
};

bool wants(const SweepSpec& spec, Observable o) {
    return std::find(spec.observables.begin(), spec.observables.end(), o) != spec.observables.end();
}

}  // namespace

std::string_view observable_name(Observable o) {
    for (const auto& e : kObservables)
        if (e.id == o) return e.name;
    return "?";
}

Observable parse_observable(std::string_view name) {
    for (const auto& e : kObservables)
        if (name == e.name) return e.id;
    throw ConfigError("unknown observable '" + std::string(name) +
                      "' (expected S_F, Gamma_minus, Gamma_plus, Gamma_net, n_c or q_threshold)");
}

const std::vector<std::string>& sweep_keys() {
    static const std::vector<std::string> keys = {"delta",  "delta_a", "delta_m", "gamma_a", "gamma_m", "gamma_c",
                                                  "q_c",    "nbar_m",  "nbar_c",  "J_ac",    "J_mc",    "J_am",
                                                  "r_s",    "phi_s",   "eps_re",  "eps_im"};
    return keys;
}

void set_parameter(SystemParams& p, const std::string& key, double v) {
    if (key == "delta") p.delta_a = p.delta_m = v;
    else if (key == "delta_a") p.delta_a = v;
    else if (key == "delta_m") p.delta_m = v;
    else if (key == "gamma_a") p.gamma_a = v;
    else if (key == "gamma_m") p.gamma_m = v;
    else if (key == "gamma_c") p.gamma_c = v;
    else if (key == "q_c") {
        if (!(v > 0.0)) throw ConfigError("q_c must be positive, got " + format_double(v));
        p.gamma_c = 1.0 / v;
    }
    else if (key == "nbar_m") p.nbar_m = v;
    else if (key == "nbar_c") p.nbar_c = v;
    else if (key == "J_ac") p.J_ac = v;
    else if (key == "J_mc") p.J_mc = v;
    else if (key == "J_am") p.J_am = v;
    else if (key == "r_s") p.r_s = v;
    else if (key == "phi_s") p.phi_s = v * kDeg;
    else if (key == "eps_re") p.eps_a = {v, p.eps_a.imag()};
    else if (key == "eps_im") p.eps_a = {p.eps_a.real(), v};
    else throw ConfigError("unknown sweep key '" + key + "'");
}

std::vector<double> make_grid(double min, double max, int n, Scale scale) {
    if (n < 1) throw ConfigError("grid needs n >= 1, got " + std::to_string(n));
    if (!(min <= max)) throw ConfigError("grid needs min <= max, got " + format_double(min) + " > " + format_double(max));
    if (scale == Scale::Log && !(min > 0.0))
        throw ConfigError("log grid needs min > 0, got " + format_double(min));
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = min;
        return v;
    }
    const double lo = scale == Scale::Log ? std::log10(min) : min;
    const double hi = scale == Scale::Log ? std::log10(max) : max;
    for (int k = 0; k < n; ++k) {
        const double x = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
        v[static_cast<std::size_t>(k)] = scale == Scale::Log ? std::pow(10.0, x) : x;
    }
    if (scale == Scale::Log) {
        v.front() = min;
        v.back() = max;
    }
    return v;
}

void SweepSpec::validate() const {
    const auto& keys = sweep_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown sweep key '" + key + "'");
    if (values.empty()) throw ConfigError("sweep over '" + key + "' has no values");
    if (!std::is_sorted(values.begin(), values.end()))
        throw ConfigError("sweep values for '" + key + "' must be sorted ascending");
    if (observables.empty()) throw ConfigError("sweep needs at least one observable");
    if (spectrum.points < 2) throw ConfigError("spectrum grid needs at least 2 points");
    base.validate();
    for (double v : values) {
        SystemParams p = base;
        set_parameter(p, key, v);
        try {
            p.validate();
        } catch (const DomainError& e) {
            throw ConfigError("sweep value " + key + "=" + format_double(v) + ": " + e.what());
        }
    }
}

std::string_view to_string(RowStatus s) {
    switch (s) {
        case RowStatus::Ok: return "ok";
        case RowStatus::Unstable: return "unstable";
        case RowStatus::Runaway: return "runaway";
        case RowStatus::NoThreshold: return "no_threshold";
    }
    return "?";
}

SweepRow evaluate_row(const SweepSpec& spec, double value) {
    SweepRow row;
    row.value = value;
    SystemParams p = spec.base;
    set_parameter(p, spec.key, value);
    try {
        row.report = evaluate_cooling(p);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::Instability) throw;
        row.status = RowStatus::Unstable;
        row.note = e.what();
        row.report.params = p;
        row.report.mechanism = p.mechanism;
        return row;
    }
    if (row.report.runaway) {
        row.status = RowStatus::Runaway;
        row.note = "gamma_c + Gamma_net <= 0";
    }
    if (wants(spec, Observable::Spectrum))
        row.spectrum = psd_grid(p, spec.spectrum.min, spec.spectrum.max, spec.spectrum.points, 1);
    if (wants(spec, Observable::Threshold)) {
        try {
            row.threshold = qc_threshold(p, RatePair{row.report.gamma_minus, row.report.gamma_plus}, spec.threshold);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Convergence) throw;
            if (row.status == RowStatus::Ok) row.status = RowStatus::NoThreshold;
            if (row.note.empty()) row.note = e.what();
        }
    }
    return row;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
    spec.validate();
    SweepResult result{spec, std::vector<SweepRow>(spec.values.size())};
    parallel_for(spec.values.size(), threads,
                 [&](std::size_t i) { result.rows[i] = evaluate_row(spec, spec.values[i]); });
    return result;
}

std::vector<std::pair<std::string, CsvTable>> sweep_tables(const SweepResult& result) {
    const SweepSpec& spec = result.spec;
    std::vector<std::pair<std::string, CsvTable>> out;
    for (Observable o : spec.observables) {
        const std::string name(observable_name(o));
        CsvTable t;
        if (o == Observable::Spectrum)
            t.header = {spec.key, "omega_over_wc", "S_F"};
        else
            t.header = {spec.key, name};
        for (const SweepRow& row : result.rows) {
            if (row.status == RowStatus::Unstable) continue;
            const CoolingReport& r = row.report;
            switch (o) {
                case Observable::Spectrum:
                    for (std::size_t k = 0; k < row.spectrum->values.size(); ++k)
                        t.rows.push_back({row.value, row.spectrum->frequencies[k], row.spectrum->values[k]});
                    break;
                case Observable::GammaMinus: t.rows.push_back({row.value, r.gamma_minus}); break;
                case Observable::GammaPlus: t.rows.push_back({row.value, r.gamma_plus}); break;
                case Observable::GammaNet: t.rows.push_back({row.value, r.gamma_net}); break;
                case Observable::Occupancy:
                    if (!r.runaway) t.rows.push_back({row.value, r.n_c});
                    break;
                case Observable::Threshold:
                    if (row.threshold) t.rows.push_back({row.value, row.threshold->q_threshold});
                    break;
            }
        }
        out.emplace_back(name + ".csv", std::move(t));
    }
    return out;
}

json sweep_status(const SweepResult& result) {
    json rows = json::array();
    json flagged = json::array();
    for (const SweepRow& row : result.rows) {
        json r = {{"value", row.value}, {"status", std::string(to_string(row.status))}};
        if (!row.note.empty()) r["note"] = row.note;
        rows.push_back(r);
        if (row.status != RowStatus::Ok) flagged.push_back(r);
    }
    return {{"key", result.spec.key}, {"rows", rows.size()}, {"flagged", flagged}};
}

SweepSpec sweep_from_json(const json& payload, const SystemParams& base) {
    if (!payload.is_object()) throw ConfigError("sweep payload must be an object");
    static const std::vector<std::string> known = {"key", "values", "min", "max", "n", "scale",
                                                   "observables", "spectrum", "threshold"};
    for (const auto& [k, _] : payload.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ConfigError("unknown sweep key '" + k + "'");
    SweepSpec spec;
    spec.base = base;
    if (!payload.contains("key") || !payload["key"].is_string()) throw ConfigError("sweep.key must name a parameter");
    spec.key = payload["key"].get<std::string>();

    const bool has_list = payload.contains("values");
    const bool has_range = payload.contains("min") || payload.contains("max") || payload.contains("n");
    if (has_list == has_range) throw ConfigError("sweep needs either 'values' or 'min'/'max'/'n'");
    try {
        if (has_list) {
            spec.values = payload["values"].get<std::vector<double>>();
        } else {
            Scale scale = Scale::Linear;
            if (payload.contains("scale")) {
                const std::string s = payload["scale"].get<std::string>();
                if (s == "log") scale = Scale::Log;
                else if (s != "linear") throw ConfigError("sweep.scale must be 'linear' or 'log', got '" + s + "'");
            }
            spec.values = make_grid(payload.at("min").get<double>(), payload.at("max").get<double>(),
                                    payload.at("n").get<int>(), scale);
        }
        if (payload.contains("observables")) {
            spec.observables.clear();
            for (const auto& o : payload["observables"]) spec.observables.push_back(parse_observable(o.get<std::string>()));
        }
        if (payload.contains("spectrum")) {
            const json& s = payload["spectrum"];
            spec.spectrum.min = s.value("min", spec.spectrum.min);
            spec.spectrum.max = s.value("max", spec.spectrum.max);
            spec.spectrum.points = s.value("n", spec.spectrum.points);
        }
        if (payload.contains("threshold")) {
            const json& s = payload["threshold"];
            spec.threshold.log10_low = s.value("log10_low", spec.threshold.log10_low);
            spec.threshold.log10_high = s.value("log10_high", spec.threshold.log10_high);
            spec.threshold.tolerance_decades = s.value("tolerance_decades", spec.threshold.tolerance_decades);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed sweep payload: ") + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace magcool
