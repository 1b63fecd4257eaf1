#include "magcool/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "magcool/errors.hpp"

namespace magcool {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string precise(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::uint64_t parameter_hash(const SystemParams& p) {
    std::string s;
    for (double v : {p.omega_c, p.delta_a, p.delta_m, p.gamma_a, p.gamma_m, p.gamma_c, p.nbar_m, p.nbar_c, p.J_ac,
                     p.J_mc, p.J_am, p.eps_a.real(), p.eps_a.imag(), p.r_s, p.phi_s}) {
        s += precise(v);
        s += ';';
    }
    s += to_string(p.mechanism);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json to_json(const SystemParams& p) {
    return {{"mechanism", std::string(to_string(p.mechanism))},
            {"omega_c", p.omega_c},
            {"delta_a", p.delta_a},
            {"delta_m", p.delta_m},
            {"gamma_a", p.gamma_a},
            {"gamma_m", p.gamma_m},
            {"gamma_c", p.gamma_c},
            {"nbar_m", p.nbar_m},
            {"nbar_c", p.nbar_c},
            {"J_ac", p.J_ac},
            {"J_mc", p.J_mc},
            {"J_am", p.J_am},
            {"eps_a", complex_json(p.eps_a)},
            {"r_s", p.r_s},
            {"phi_s", p.phi_s * 180.0 / std::numbers::pi},
            {"parameter_hash", hash_hex(parameter_hash(p))}};
}

nlohmann::json to_json(const SteadyState& s) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : s.roots) roots.push_back({complex_json(r[0]), complex_json(r[1]), complex_json(r[2])});
    return {{"a0", complex_json(s.a0)},         {"m0", complex_json(s.m0)},
            {"c0", complex_json(s.c0)},         {"residual", s.residual},
            {"iterations", s.iterations},       {"multistable", s.multistable},
            {"roots", roots}};
}

nlohmann::json to_json(const StabilityReport& r) {
    return {{"stable", r.stable},
            {"margin", r.margin},
            {"eigenvalue_real_parts", r.eigenvalue_real_parts},
            {"worst_eigenvalue", complex_json(r.worst_eigenvalue)}};
}

nlohmann::json to_json(const CoolingReport& r) {
    nlohmann::json j = {{"mechanism", std::string(to_string(r.mechanism))},
                        {"Gamma_minus", r.gamma_minus},
                        {"Gamma_plus", r.gamma_plus},
                        {"Gamma_net", r.gamma_net},
                        {"stable", r.stable},
                        {"runaway", r.runaway},
                        {"params", to_json(r.params)}};
    j["n_c"] = r.runaway ? nlohmann::json(nullptr) : nlohmann::json(r.n_c);
    return j;
}

nlohmann::json to_json(const ThresholdResult& r) {
    return {{"q_threshold", r.q_threshold},
            {"log10_bracket", {r.log10_low, r.log10_high}},
            {"iterations", r.iterations},
            {"residual", r.residual}};
}

nlohmann::json to_json(const SpectrumResult& s, const SystemParams& params) {
    return {{"mechanism", std::string(to_string(s.mechanism))},
            {"parameter_hash", hash_hex(s.parameter_hash)},
            {"params", to_json(params)},
            {"omega_over_wc", s.frequencies},
            {"S_F", s.values}};
}

std::string CsvTable::render() const {
    std::string out;
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) out += ',';
        out += header[k];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_double(row[k]);
        }
        out += '\n';
    }
    return out;
}

CsvTable spectrum_table(const SpectrumResult& s) {
    CsvTable t{{"omega_over_wc", "S_F"}, {}};
    t.rows.reserve(s.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k) t.rows.push_back({s.frequencies[k], s.values[k]});
    return t;
}

CsvTable trajectory_table(const OccupancyTrajectory& traj, const std::string& time_column) {
    CsvTable t{{time_column, "n_c"}, {}};
    for (std::size_t k = 0; k < traj.times.size(); ++k) t.rows.push_back({traj.times[k], traj.occupancies[k]});
    return t;
}

CsvTable cooling_table(const CoolingReport& r) {
    return {{"Gamma_minus", "Gamma_plus", "Gamma_net", "n_c"}, {{r.gamma_minus, r.gamma_plus, r.gamma_net, r.n_c}}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw DomainError("failed writing " + path.string());
}

}  // namespace magcool
