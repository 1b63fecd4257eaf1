#include "magcool/figures.hpp"

#include <cmath>
#include <ctime>

#include "magcool/config.hpp"
#include "magcool/errors.hpp"
#include "magcool/runs.hpp"

namespace magcool {

using nlohmann::json;

namespace {

// Parameters shared by every figure. n̄_c is not given directly; it comes from
// inverting the occupancy formula at the target MCM occupancy.
json base_document() {
    return {{"mode", "direct"},
            {"mechanism", "CMI"},
            {"omega_c_hz", 50e3},
            {"delta", 1.0},
            {"gamma_a", 8.0 / 3.0},
            {"gamma_m", 2.0},
            {"nbar_m", 0.31},
            {"nbar_c", 1.87e5},
            {"J_ac", 0.09},
            {"J_mc", 0.05},
            {"J_am", 0.03},
            {"gamma_c", 1e-7},
            {"r_s", 2.0},
            {"phi_s", 94.0},
            {"eps_a", {{"re", 0.575}, {"im", -0.142}}}};
}

json base_provenance() {
    json p;
    for (const char* k : {"omega_c_hz", "gamma_a", "gamma_m", "nbar_m", "J_ac", "J_mc", "J_am", "gamma_c", "r_s",
                          "phi_s", "eps_a"})
        p[k] = "caption";
    p["nbar_c"] = "derived";
    p["delta"] = "chosen";
    p["mechanism"] = "caption";
    return p;
}

json with(json doc, const json& changes) {
    for (const auto& [k, v] : changes.items()) {
        if (k == "q_c") doc.erase("gamma_c");
        if (k == "gamma_c") doc.erase("q_c");
        if (k == "delta_a" || k == "delta_m") doc.erase("delta");
        doc[k] = v;
    }
    return doc;
}

json sweep_range(const std::string& key, double min, double max, int n, bool log, const std::string& observable) {
    return {{"key", key},
            {"min", min},
            {"max", max},
            {"n", n},
            {"scale", log ? "log" : "linear"},
            {"observables", {observable}}};
}

json sweep_list(const std::string& key, const std::vector<double>& values, const std::string& observable) {
    return {{"key", key}, {"values", values}, {"observables", {observable}}};
}

FigureSeries sweep_series(std::string panel, std::string name, json doc, json sweep, Axis axis) {
    doc["sweep"] = std::move(sweep);
    return {std::move(panel), std::move(name), SeriesKind::Sweep, std::move(doc), std::move(axis)};
}

std::string tag(double v) {
    std::string s = format_double(v);
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

constexpr int kQcPoints = 111;
constexpr int kSweepPoints = 121;

FigurePreset fig2() {
    FigurePreset f{"fig2", "Spectra, net cooling rate and occupancy versus detuning, MCM and CMI", {}, base_provenance()};
    const json cmi = base_document();
    const json mcm = with(cmi, {{"mechanism", "MCM"}});
    const json spectrum = {{"min", -3.0}, {"max", 3.0}, {"n", 601}};
    const Axis sp{"omega_over_wc", "S_F"};
    f.series.push_back({"a", "mcm_spectrum", SeriesKind::Spectrum, with(mcm, {{"spectrum", spectrum}}), sp});
    f.series.push_back({"d", "cmi_spectrum", SeriesKind::Spectrum, with(cmi, {{"spectrum", spectrum}}), sp});
    f.series.push_back(sweep_series("b", "mcm_gamma_net", mcm, sweep_range("delta", -3, 3, kSweepPoints, false, "Gamma_net"),
                                    {"delta", "Gamma_net"}));
    f.series.push_back(sweep_series("e", "cmi_gamma_net", cmi, sweep_range("delta", -3, 3, kSweepPoints, false, "Gamma_net"),
                                    {"delta", "Gamma_net"}));
    f.series.push_back(sweep_series("c", "mcm_n_c", mcm, sweep_range("delta", -3, 3, kSweepPoints, false, "n_c"),
                                    {"delta", "n_c", false, true}));
    f.series.push_back(sweep_series("f", "cmi_n_c", cmi, sweep_range("delta", -3, 3, kSweepPoints, false, "n_c"),
                                    {"delta", "n_c", false, true}));
    return f;
}

FigurePreset fig3() {
    FigurePreset f{"fig3", "Occupancy versus cavity and magnon decay rates at Q_c = 1e7", {}, base_provenance()};
    f.provenance["q_c"] = "caption";
    const json cmi = with(base_document(), {{"q_c", 1e7}});
    const json mcm = with(cmi, {{"mechanism", "MCM"}});
    f.series.push_back(sweep_series("a", "cmi_gamma_a", cmi, sweep_range("gamma_a", 0.1, 10, kSweepPoints, true, "n_c"),
                                    {"gamma_a", "n_c", true, true}));
    f.series.push_back(sweep_series("b", "mcm_gamma_m", mcm, sweep_range("gamma_m", 0.01, 10, kSweepPoints, true, "n_c"),
                                    {"gamma_m", "n_c", true, true}));
    f.series.push_back(sweep_series("b", "cmi_gamma_m", cmi, sweep_range("gamma_m", 0.01, 10, kSweepPoints, true, "n_c"),
                                    {"gamma_m", "n_c", true, true}));
    return f;
}

FigurePreset fig4a() {
    FigurePreset f{"fig4a", "Occupancy dynamics n_c(t) at Q_c = 5e7 and 1e11", {}, base_provenance()};
    f.provenance["J_ac"] = f.provenance["J_mc"] = f.provenance["delta_a"] = f.provenance["delta_m"] = "caption";
    f.provenance["q_c"] = "caption";
    f.provenance.erase("delta");
    const double ga = 8.0 / 3.0;
    const double gm = 2.0;
    const json cmi = with(base_document(), {{"J_ac", 0.3},
                                            {"J_mc", 0.025},
                                            {"delta_a", std::sqrt(ga * ga + 4.0) / 2.0},
                                            {"delta_m", std::sqrt(gm * gm + 4.0) / 2.0}});
    const json mcm = with(cmi, {{"mechanism", "MCM"}});
    const json dynamics = {{"t_min_s", 1e-6}, {"t_max_s", 1.0}, {"n", 400}, {"scale", "log"}};
    const Axis ax{"t_s", "n_c", true, true};
    for (double q : {5e7, 1e11}) {
        f.series.push_back({"a", "mcm_q" + tag(q), SeriesKind::Dynamics, with(mcm, {{"q_c", q}, {"dynamics", dynamics}}), ax});
        f.series.push_back({"a", "cmi_q" + tag(q), SeriesKind::Dynamics, with(cmi, {{"q_c", q}, {"dynamics", dynamics}}), ax});
    }
    return f;
}

FigurePreset fig4b() {
    FigurePreset f{"fig4b", "Occupancy versus Q_c for MCM and CMI at r_s = 1.6, 2.0, 2.6", {}, base_provenance()};
    const json cmi = base_document();
    const json mcm = with(cmi, {{"mechanism", "MCM"}});
    const Axis ax{"q_c", "n_c", true, true};
    f.series.push_back(sweep_series("b", "mcm", mcm, sweep_range("q_c", 1e2, 1e13, kQcPoints, true, "n_c"), ax));
    for (double r : {1.6, 2.0, 2.6})
        f.series.push_back(sweep_series("b", "cmi_r" + tag(r), with(cmi, {{"r_s", r}}),
                                        sweep_range("q_c", 1e2, 1e13, kQcPoints, true, "n_c"), ax));
    f.series.push_back(sweep_series("b", "cmi_thresholds", cmi, sweep_list("r_s", {1.6, 2.0, 2.6}, "q_threshold"),
                                    {"r_s", "q_threshold", false, true}));
    f.series.push_back(sweep_series("b", "mcm_threshold", mcm, sweep_list("J_mc", {0.05}, "q_threshold"),
                                    {"J_mc", "q_threshold", false, true}));
    return f;
}

FigurePreset fig5(const std::string& panel, const std::string& key, const std::vector<double>& values,
                  const json& fixed, const char* values_provenance) {
    FigurePreset f{"fig5" + panel, "Occupancy versus Q_c for several " + key + " at r_s = 2.6", {}, base_provenance()};
    f.provenance[key] = values_provenance;
    const json cmi = with(base_document(), fixed);
    const Axis ax{"q_c", "n_c", true, true};
    for (double v : values)
        f.series.push_back(sweep_series(panel, key + "_" + tag(v), with(cmi, {{key, v}}),
                                        sweep_range("q_c", 1e2, 1e13, kQcPoints, true, "n_c"), ax));
    f.series.push_back(sweep_series(panel, "thresholds", cmi, sweep_list(key, values, "q_threshold"),
                                    {key, "q_threshold", false, true}));
    return f;
}

FigurePreset fig6(const std::string& panel, const std::string& key, double min, double max, bool log, bool with_mcm,
                  const json& fixed) {
    FigurePreset f{"fig6" + panel, "Occupancy versus " + key + " at gamma_c = 1e-5, r_s = 2.6", {}, base_provenance()};
    f.provenance[key] = "chosen";
    const json cmi = with(base_document(), with(fixed, {{"gamma_c", 1e-5}, {"r_s", 2.6}}));
    const Axis ax{key, "n_c", log, true};
    if (with_mcm)
        f.series.push_back(sweep_series(panel, "mcm", with(cmi, {{"mechanism", "MCM"}}),
                                        sweep_range(key, min, max, kSweepPoints, log, "n_c"), ax));
    f.series.push_back(sweep_series(panel, "cmi", cmi, sweep_range(key, min, max, log ? kSweepPoints : 101, log, "n_c"), ax));
    return f;
}

std::uint64_t fnv(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string stem(const std::string& file) { return file.substr(0, file.rfind('.')); }

std::string_view kind_name(SeriesKind k) {
    switch (k) {
        case SeriesKind::Spectrum: return "spectrum";
        case SeriesKind::Sweep: return "sweep";
        case SeriesKind::Dynamics: return "dynamics";
    }
    return "?";
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig2",  "fig3",  "fig4a", "fig4b", "fig5a",
                                                 "fig5b", "fig5c", "fig6a", "fig6b", "fig6c"};
    return ids;
}

FigurePreset figure_preset(const std::string& id) {
    if (id == "fig2") return fig2();
    if (id == "fig3") return fig3();
    if (id == "fig4a") return fig4a();
    if (id == "fig4b") return fig4b();
    if (id == "fig5a")
        return fig5("a", "J_ac", {0.01, 0.03, 0.06, 0.09, 0.2}, {{"r_s", 2.6}, {"J_mc", 0.09}, {"J_am", 0.05}}, "text");
    if (id == "fig5b")
        return fig5("b", "J_mc", {0.01, 0.05, 0.1}, {{"r_s", 2.6}, {"J_ac", 0.2}, {"J_am", 0.05}}, "text endpoints");
    if (id == "fig5c")
        return fig5("c", "J_am", {0.01, 0.05, 0.1}, {{"r_s", 2.6}, {"J_ac", 0.2}, {"J_mc", 0.09}}, "text endpoints");
    if (id == "fig6a") return fig6("a", "J_mc", 1e-3, 10.0, true, true, {{"J_ac", 0.09}, {"J_am", 0.03}});
    if (id == "fig6b") return fig6("b", "J_am", 0.0, 0.1, false, false, {{"J_ac", 0.09}, {"J_mc", 0.05}});
    if (id == "fig6c") return fig6("c", "J_ac", 0.01, 1.0, true, false, {{"J_mc", 0.05}, {"J_am", 0.03}});
    std::string known;
    for (const auto& k : figure_ids()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown figure id '" + id + "' (expected one of " + known + ")");
}

FigureBundle reproduce_figure(const std::string& id, int threads) {
    const FigurePreset preset = figure_preset(id);
    FigureBundle bundle;
    bundle.id = id;
    json series = json::array();
    json presets = json::object();
    std::string hashes;
    for (const FigureSeries& s : preset.series) {
        const RunConfig cfg = parse_config(s.config);
        RunOutput out;
        switch (s.kind) {
            case SeriesKind::Spectrum: out = run_spectrum(cfg, threads); break;
            case SeriesKind::Sweep: out = run_sweep_config(cfg, threads); break;
            case SeriesKind::Dynamics: out = run_dynamics(cfg); break;
        }
        const std::string config_file = "configs/" + s.name + ".json";
        bundle.files.emplace_back(config_file, s.config.dump(2) + "\n");
        json csvs = json::array();
        for (const auto& [file, table] : out.tables) {
            const std::string name = s.panel + "_" + s.name + "_" + stem(file) + ".csv";
            bundle.files.emplace_back(name, table.render());
            csvs.push_back({{"file", name}, {"header", table.header}, {"rows", table.rows.size()}});
        }
        series.push_back({{"panel", s.panel},
                          {"name", s.name},
                          {"kind", std::string(kind_name(s.kind))},
                          {"config", config_file},
                          {"csv", csvs},
                          {"axis", {{"x", s.axis.x}, {"y", s.axis.y}, {"log_x", s.axis.log_x}, {"log_y", s.axis.log_y}}},
                          {"status", out.summary}});
        json values = s.config;
        for (const char* p : kPayloadSections) values.erase(p);
        presets[s.name] = {{"values", values}, {"resolved", to_json(cfg.params)}};
        hashes += s.config.dump();
    }
    bundle.manifest = {{"figure", id},
                       {"description", preset.description},
                       {"generated_at", utc_timestamp()},
                       {"parameter_hash", hash_hex(fnv(hashes))},
                       {"units", "rates, detunings, couplings and frequencies in omega_c; times in seconds"},
                       {"provenance", preset.provenance},
                       {"derived",
                        {{"nbar_c",
                          {{"value", 1.87e5},
                           {"method", "occupancy formula inverted at MCM n_c = 4.926 with Gamma_-/+ = 0.005/0.001 and "
                                      "gamma_c = 1e-7; not among the caption values"}}}}},
                       {"presets", presets},
                       {"series", series}};
    return bundle;
}

void write_bundle(const FigureBundle& bundle, const std::filesystem::path& dir) {
    for (const auto& [name, text] : bundle.files) write_text(dir / name, text);
    write_text(dir / "manifest.json", bundle.manifest.dump(2) + "\n");
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

}  // namespace magcool
