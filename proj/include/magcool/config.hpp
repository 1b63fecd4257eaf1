#pragma once

// Run configuration: a JSON document whose top-level keys mirror the
// SystemParams fields, plus at most one command payload section.
//
//   direct mode    rates, detunings and couplings in omega_c units
//   physical mode  geometry + drives; couplings come from the steady state
//
// Angles (phi_s, eps_a.theta) are in degrees.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magcool/model.hpp"
#include "magcool/steady_state.hpp"

namespace magcool {

enum class EntryMode { Direct, Physical };

struct PhysicalDerivation {
    PhysicalConstants constants;
    DeviceGeometry geometry;
    double cavity_frequency = 0.0;  // rad/s
    double drive_frequency = 0.0;   // rad/s
    MicroscopicCouplings couplings{};
    DriveAmplitudes drives{};
    double coupling = 0.0;  // G_amc in omega_c units
    SteadyState steady;
    std::vector<std::string> warnings;
};

struct RunConfig {
    EntryMode mode = EntryMode::Direct;
    SystemParams params;
    std::optional<PhysicalDerivation> physical;
    nlohmann::json document;  // the effective config after overrides
};

/// Payload section names recognised in a config.
inline constexpr const char* kPayloadSections[] = {"spectrum", "dynamics", "threshold", "sweep", "optimize"};

/// Applies `key.path=value` overrides; the value is parsed as JSON, falling back to a string.
void apply_override(nlohmann::json& document, const std::string& assignment);

/// Validates keys and builds the run parameters. Physical mode runs the
/// steady-state solver to obtain the effective couplings.
RunConfig parse_config(const nlohmann::json& document);

/// Parameters alone, from the parameter keys of `document` (payloads ignored).
SystemParams params_from_json(const nlohmann::json& document);

nlohmann::json load_json_file(const std::string& path);

}  // namespace magcool
