#include "magcool/config.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <set>

#include "magcool/errors.hpp"

namespace magcool {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const std::set<std::string> kShared = {"mode",   "mechanism", "gamma_a", "gamma_m", "gamma_c", "q_c",
                                       "nbar_m", "nbar_c",    "eps_a",   "r_s",     "phi_s",   "provenance"};
const std::set<std::string> kDirectOnly = {"omega_c", "omega_c_hz", "delta", "delta_a", "delta_m",
                                           "J_ac",    "J_mc",       "J_am"};
const std::set<std::string> kPhysicalOnly = {"geometry", "constants", "cavity_frequency_hz", "drive_frequency_hz"};

bool is_payload(const std::string& key) {
    return std::any_of(std::begin(kPayloadSections), std::end(kPayloadSections),
                       [&](const char* s) { return key == s; });
}

double number(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number, got " + v.dump());
    return v.get<double>();
}

double number_or(const json& doc, const std::string& key, double fallback) {
    return doc.contains(key) ? number(doc, key) : fallback;
}

cplx parse_eps(const json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_object()) {
        if (v.contains("re") || v.contains("im")) {
            for (const auto& [k, _] : v.items())
                if (k != "re" && k != "im") throw ConfigError("eps_a: unexpected key '" + k + "'");
            return {number_or(v, "re", 0.0), number_or(v, "im", 0.0)};
        }
        if (v.contains("lambda")) {
            for (const auto& [k, _] : v.items())
                if (k != "lambda" && k != "theta") throw ConfigError("eps_a: unexpected key '" + k + "'");
            return SystemParams::squeezing_from_polar(number(v, "lambda"), number_or(v, "theta", 0.0) * kDeg);
        }
    }
    throw ConfigError("eps_a must be a number, {re, im} or {lambda, theta}; got " + v.dump());
}

// Fills everything except the direct-only fields.
void read_shared(const json& doc, SystemParams& p) {
    if (doc.contains("mechanism")) {
        if (!doc["mechanism"].is_string()) throw ConfigError("mechanism must be a string");
        p.mechanism = parse_mechanism(doc["mechanism"].get<std::string>());
    }
    p.gamma_a = number_or(doc, "gamma_a", p.gamma_a);
    p.gamma_m = number_or(doc, "gamma_m", p.gamma_m);
    if (doc.contains("gamma_c") && doc.contains("q_c")) throw ConfigError("give either gamma_c or q_c, not both");
    p.gamma_c = number_or(doc, "gamma_c", p.gamma_c);
    if (doc.contains("q_c")) {
        const double q = number(doc, "q_c");
        if (!(q > 0.0)) throw ConfigError("q_c must be positive, got " + doc["q_c"].dump());
        p.gamma_c = 1.0 / q;
    }
    p.nbar_m = number_or(doc, "nbar_m", p.nbar_m);
    p.nbar_c = number_or(doc, "nbar_c", p.nbar_c);
    if (doc.contains("eps_a")) p.eps_a = parse_eps(doc["eps_a"]);
    p.r_s = number_or(doc, "r_s", p.r_s);
    p.phi_s = number_or(doc, "phi_s", p.phi_s / kDeg) * kDeg;
}

void read_direct(const json& doc, SystemParams& p) {
    if (doc.contains("omega_c") && doc.contains("omega_c_hz")) throw ConfigError("give omega_c or omega_c_hz, not both");
    p.omega_c = number_or(doc, "omega_c", p.omega_c);
    if (doc.contains("omega_c_hz")) p.omega_c = 2.0 * std::numbers::pi * number(doc, "omega_c_hz");
    if (doc.contains("delta") && (doc.contains("delta_a") || doc.contains("delta_m")))
        throw ConfigError("'delta' sets both detunings; do not combine it with delta_a/delta_m");
    if (doc.contains("delta")) p.delta_a = p.delta_m = number(doc, "delta");
    p.delta_a = number_or(doc, "delta_a", p.delta_a);
    p.delta_m = number_or(doc, "delta_m", p.delta_m);
    p.J_ac = number_or(doc, "J_ac", p.J_ac);
    p.J_mc = number_or(doc, "J_mc", p.J_mc);
    p.J_am = number_or(doc, "J_am", p.J_am);
}

PhysicalConstants read_constants(const json& doc) {
    PhysicalConstants c;
    if (!doc.contains("constants")) return c;
    const json& s = doc["constants"];
    for (const auto& [k, _] : s.items()) {
        static const std::set<std::string> known = {"gyromagnetic_ratio", "vacuum_permeability", "spin_density",
                                                    "ground_spin",        "mass_density",        "reduced_planck",
                                                    "boltzmann"};
        if (!known.count(k)) throw ConfigError("unknown constants key '" + k + "'");
    }
    c.gyromagnetic_ratio = number_or(s, "gyromagnetic_ratio", c.gyromagnetic_ratio);
    c.vacuum_permeability = number_or(s, "vacuum_permeability", c.vacuum_permeability);
    c.spin_density = number_or(s, "spin_density", c.spin_density);
    c.ground_spin = number_or(s, "ground_spin", c.ground_spin);
    c.mass_density = number_or(s, "mass_density", c.mass_density);
    c.reduced_planck = number_or(s, "reduced_planck", c.reduced_planck);
    c.boltzmann = number_or(s, "boltzmann", c.boltzmann);
    c.validate();
    return c;
}

DeviceGeometry read_geometry(const json& s) {
    static const std::set<std::string> known = {"sphere_diameter",      "cavity_mode_volume", "wave_number",
                                                "equilibrium_position", "trap_frequency_hz",  "bias_field",
                                                "drive_power",          "drive_field"};
    for (const auto& [k, _] : s.items())
        if (!known.count(k)) throw ConfigError("unknown geometry key '" + k + "'");
    for (const char* required : {"sphere_diameter", "cavity_mode_volume", "wave_number", "trap_frequency_hz"})
        if (!s.contains(required)) throw ConfigError(std::string("physical mode requires geometry.") + required);
    DeviceGeometry g;
    g.sphere_diameter = number(s, "sphere_diameter");
    g.cavity_mode_volume = number(s, "cavity_mode_volume");
    g.wave_number = number(s, "wave_number");
    g.equilibrium_position = number_or(s, "equilibrium_position", 0.0);
    g.trap_frequency = 2.0 * std::numbers::pi * number(s, "trap_frequency_hz");
    g.bias_field = number_or(s, "bias_field", 0.0);
    g.drive_power = number_or(s, "drive_power", 0.0);
    g.drive_field = number_or(s, "drive_field", 0.0);
    g.validate();
    return g;
}

PhysicalDerivation derive_physical(const json& doc, SystemParams& p) {
    PhysicalDerivation d;
    d.constants = read_constants(doc);
    if (!doc.contains("geometry")) throw ConfigError("physical mode requires a 'geometry' section");
    d.geometry = read_geometry(doc["geometry"]);
    for (const char* required : {"cavity_frequency_hz", "drive_frequency_hz"})
        if (!doc.contains(required)) throw ConfigError(std::string("physical mode requires ") + required);
    d.cavity_frequency = 2.0 * std::numbers::pi * number(doc, "cavity_frequency_hz");
    d.drive_frequency = 2.0 * std::numbers::pi * number(doc, "drive_frequency_hz");
    d.warnings = d.geometry.warnings();

    const double wc = d.geometry.trap_frequency;
    p.omega_c = wc;
    p.delta_a = (d.cavity_frequency - d.drive_frequency) / wc;
    p.delta_m = (d.constants.gyromagnetic_ratio * d.geometry.bias_field - d.drive_frequency) / wc;

    d.couplings = derive_couplings(d.constants, d.geometry, d.cavity_frequency);
    d.drives = drive_amplitudes(d.constants, d.geometry, p.gamma_a * wc, d.drive_frequency);
    d.coupling = d.couplings.g_amc * std::abs(std::sin(d.geometry.wave_number * d.geometry.equilibrium_position)) / wc;

    const cplx cavity_drive = d.drives.cavity / wc;
    const cplx magnon_drive = d.drives.magnon / wc;
    p.J_ac = p.J_mc = p.J_am = 0.0;
    d.steady = p.mechanism == Mechanism::MCM ? solve_mcm(p, cavity_drive)
                                             : solve_cmi(p, cavity_drive, magnon_drive, d.coupling);
    const EffectiveCouplings j = effective_couplings(d.steady, d.coupling);
    p.J_mc = j.J_mc;
    if (p.mechanism == Mechanism::CMI) {
        p.J_ac = j.J_ac;
        p.J_am = j.J_am;
    }
    return d;
}

}  // namespace

void apply_override(json& document, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &document;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("--set: empty path component in '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
        node = &(*node)[part];
        start = dot + 1;
    }
}

SystemParams params_from_json(const json& doc) {
    SystemParams p;
    read_shared(doc, p);
    read_direct(doc, p);
    p.validate();
    return p;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    cfg.document = doc;
    if (doc.contains("mode")) {
        const std::string mode = doc["mode"].is_string() ? doc["mode"].get<std::string>() : doc["mode"].dump();
        if (mode == "physical")
            cfg.mode = EntryMode::Physical;
        else if (mode != "direct")
            throw ConfigError("mode must be 'direct' or 'physical', got " + doc["mode"].dump());
    }

    int payloads = 0;
    for (const auto& [key, _] : doc.items()) {
        if (is_payload(key)) {
            ++payloads;
            continue;
        }
        if (kShared.count(key)) continue;
        if (kDirectOnly.count(key)) {
            if (cfg.mode == EntryMode::Physical)
                throw ConfigError("physical mode derives '" + key + "'; remove it or use mode=direct");
            continue;
        }
        if (kPhysicalOnly.count(key)) {
            if (cfg.mode == EntryMode::Direct)
                throw ConfigError("direct mode forbids geometry key '" + key + "'; set mode=physical");
            continue;
        }
        throw ConfigError("unknown config key '" + key + "'");
    }
    if (payloads > 1) throw ConfigError("config carries more than one command payload section");

    read_shared(doc, cfg.params);
    if (cfg.mode == EntryMode::Direct) {
        read_direct(doc, cfg.params);
    } else {
        cfg.params.validate();
        cfg.physical = derive_physical(doc, cfg.params);
    }
    cfg.params.validate();
    return cfg;
}

json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    json doc = json::parse(f, nullptr, false, true);
    if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
    return doc;
}

}  // namespace magcool
