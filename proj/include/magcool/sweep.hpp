#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magcool/cooling.hpp"
#include "magcool/io.hpp"
#include "magcool/model.hpp"
#include "magcool/spectra.hpp"

namespace magcool {

enum class Observable { Spectrum, GammaMinus, GammaPlus, GammaNet, Occupancy, Threshold };

/// Column name used in CSV headers: S_F, Gamma_minus, Gamma_plus, Gamma_net, n_c, q_threshold.
std::string_view observable_name(Observable o);
Observable parse_observable(std::string_view name);

/// Keys accepted by set_parameter. Angles in degrees; "delta" sets both detunings,
/// "q_c" sets gamma_c = 1/q_c, eps_re/eps_im edit one component of eps_a.
const std::vector<std::string>& sweep_keys();
void set_parameter(SystemParams& params, const std::string& key, double value);

enum class Scale { Linear, Log };
std::vector<double> make_grid(double min, double max, int n, Scale scale);

struct SpectrumGrid {
    double min = -3.0;
    double max = 3.0;
    int points = 601;
};

struct SweepSpec {
    std::string key;
    std::vector<double> values;
    SystemParams base;
    std::vector<Observable> observables{Observable::GammaMinus, Observable::GammaPlus, Observable::GammaNet,
                                        Observable::Occupancy};
    SpectrumGrid spectrum;
    ThresholdOptions threshold;

    /// Throws ConfigError on an unknown key, empty or unsorted values.
    void validate() const;
};

enum class RowStatus { Ok, Unstable, Runaway, NoThreshold };
std::string_view to_string(RowStatus s);

struct SweepRow {
    double value = 0.0;
    RowStatus status = RowStatus::Ok;
    std::string note;  // diagnostic for flagged rows
    CoolingReport report;
    std::optional<ThresholdResult> threshold;
    std::optional<SpectrumResult> spectrum;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRow> rows;  // in the order of spec.values
};

/// Evaluates every value concurrently; rows come back in input order.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0);

/// One row on its own, exactly as run_sweep computes it.
SweepRow evaluate_row(const SweepSpec& spec, double value);

/// One CSV per observable, named "<observable>.csv". Flagged rows are left out.
std::vector<std::pair<std::string, CsvTable>> sweep_tables(const SweepResult& result);

/// Per-row status flags and the list of flagged values.
nlohmann::json sweep_status(const SweepResult& result);

/// Reads a "sweep" payload: {key, values | min/max/n/scale, observables, spectrum, threshold}.
SweepSpec sweep_from_json(const nlohmann::json& payload, const SystemParams& base);

}  // namespace magcool
