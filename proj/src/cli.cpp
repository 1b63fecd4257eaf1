#include "magcool/cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "magcool/config.hpp"
#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "magcool/figures.hpp"
#include "magcool/io.hpp"
#include "magcool/lyapunov.hpp"
#include "magcool/optimize.hpp"
#include "magcool/parallel.hpp"
#include "magcool/runs.hpp"
#include "magcool/validation.hpp"

namespace magcool {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = "runs";
    std::string format = "csv";
    int threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "JSON run configuration");
    cmd->add_option("--set", c.overrides, "override a config key, e.g. --set gamma_a=2 (repeatable)");
    cmd->add_option("--out", c.out, "parent directory for run outputs")->capture_default_str();
    cmd->add_option("--format", c.format, "data files to write")
        ->check(CLI::IsMember({"csv", "json", "both"}))
        ->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (default: MAGCOOL_THREADS or all cores)");
}

json effective_document(const Common& c) {
    json doc = c.config.empty() ? json::object() : load_json_file(c.config);
    for (const auto& s : c.overrides) apply_override(doc, s);
    return doc;
}

// The payload a subcommand accepts; any other payload section is an error.
RunConfig load(const Common& c, const std::string& command, const char* allowed_payload) {
    const json doc = effective_document(c);
    if (doc.is_object()) {
        for (const char* section : kPayloadSections) {
            if (doc.contains(section) && (allowed_payload == nullptr || std::string(section) != allowed_payload))
                throw ConfigError("config carries a '" + std::string(section) + "' payload, which '" + command +
                                  "' does not take");
        }
    }
    return parse_config(doc);
}

json table_json(const CsvTable& t) { return {{"header", t.header}, {"rows", t.rows}}; }

struct RunWriter {
    fs::path dir;
    std::string format;

    void tables(const std::vector<std::pair<std::string, CsvTable>>& tables) const {
        for (const auto& [name, table] : tables) {
            if (format != "json") write_text(dir / name, table.render());
            if (format != "csv") {
                const std::string stem = name.substr(0, name.rfind('.'));
                write_text(dir / (stem + ".json"), table_json(table).dump(2) + "\n");
            }
        }
    }
    void record(const std::string& command, const RunConfig& cfg, const json& result) const {
        json doc = {{"command", command},
                    {"generated_at", utc_timestamp()},
                    {"parameter_hash", hash_hex(parameter_hash(cfg.params))},
                    {"params", to_json(cfg.params)},
                    {"result", result}};
        write_text(dir / "config.json", cfg.document.dump(2) + "\n");
        write_text(dir / "run.json", doc.dump(2) + "\n");
    }
};

RunWriter writer(const Common& c, const std::string& hash) {
    // same config within the same second: keep both runs
    const std::string base = hash + "-" + utc_timestamp();
    fs::path dir = fs::path(c.out) / base;
    for (int k = 2; fs::exists(dir); ++k) dir = fs::path(c.out) / (base + "-" + std::to_string(k));
    return {dir, c.format};
}

RunWriter writer(const Common& c, const RunConfig& cfg) { return writer(c, hash_hex(parameter_hash(cfg.params))); }

void print_warnings(const RunConfig& cfg, std::ostream& err) {
    if (!cfg.physical) return;
    for (const auto& w : cfg.physical->warnings) err << "warning: " << w << "\n";
}

void print_rates(const CoolingReport& r, std::ostream& out) {
    out << "mechanism    " << to_string(r.mechanism) << "\n"
        << "Gamma_minus  " << format_double(r.gamma_minus) << "\n"
        << "Gamma_plus   " << format_double(r.gamma_plus) << "\n"
        << "Gamma_net    " << format_double(r.gamma_net) << "\n"
        << "n_c          " << (r.runaway ? std::string("runaway") : format_double(r.n_c)) << "\n";
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return 1;
        case ErrorKind::Instability: return 2;
        case ErrorKind::Convergence: return 3;
    }
    return 1;
}

int dispatch(CLI::App& app, const std::map<std::string, CLI::App*>& cmds, Common& c, const std::string& fig_id,
             std::ostream& out, std::ostream& err) {
    const int threads = c.threads > 0 ? c.threads : default_thread_count();
    auto used = [&](const char* name) { return cmds.at(name)->parsed(); };

    if (used("spectrum")) {
        const RunConfig cfg = load(c, "spectrum", "spectrum");
        print_warnings(cfg, err);
        const RunOutput r = run_spectrum(cfg, threads);
        const RunWriter w = writer(c, cfg);
        w.tables(r.tables);
        w.record("spectrum", cfg, r.summary);
        out << "points       " << r.summary["points"] << "\n"
            << "S_F(+1)      " << format_double(psd(cfg.params, 1.0)) << "\n"
            << "S_F(-1)      " << format_double(psd(cfg.params, -1.0)) << "\n"
            << "output       " << w.dir.string() << "\n";
        return 0;
    }
    if (used("rates") || used("occupancy")) {
        const std::string name = used("rates") ? "rates" : "occupancy";
        const RunConfig cfg = load(c, name, nullptr);
        print_warnings(cfg, err);
        const CoolingReport rep = evaluate_cooling(cfg.params);
        const RunWriter w = writer(c, cfg);
        w.tables({{name + ".csv", cooling_table(rep)}});
        w.record(name, cfg, to_json(rep));
        print_rates(rep, out);
        out << "output       " << w.dir.string() << "\n";
        if (name == "occupancy" && rep.runaway)
            throw RunawayError("gamma_c + Gamma_net = " + format_double(cfg.params.gamma_c + rep.gamma_net) +
                               " <= 0: no steady occupancy");
        return 0;
    }
    if (used("dynamics")) {
        const RunConfig cfg = load(c, "dynamics", "dynamics");
        print_warnings(cfg, err);
        const RunOutput r = run_dynamics(cfg);
        const RunWriter w = writer(c, cfg);
        w.tables(r.tables);
        w.record("dynamics", cfg, r.summary);
        out << "n_inf        " << r.summary["n_inf"] << "\n"
            << "crossing_s   " << r.summary["crossing_time_s"] << "\n"
            << "output       " << w.dir.string() << "\n";
        return 0;
    }
    if (used("threshold")) {
        const RunConfig cfg = load(c, "threshold", "threshold");
        print_warnings(cfg, err);
        ThresholdOptions opt;
        if (cfg.document.contains("threshold")) {
            const json& t = cfg.document["threshold"];
            for (const auto& [k, _] : t.items())
                if (k != "log10_low" && k != "log10_high" && k != "tolerance_decades")
                    throw ConfigError("unknown threshold key '" + k + "'");
            opt.log10_low = t.value("log10_low", opt.log10_low);
            opt.log10_high = t.value("log10_high", opt.log10_high);
            opt.tolerance_decades = t.value("tolerance_decades", opt.tolerance_decades);
        }
        const RatePair r = rates(cfg.params);
        if (r.net() <= 0.0)
            throw RunawayError("Gamma_net = " + format_double(r.net()) +
                               " <= 0: heating dominates, no quality factor reaches n_c < 1");
        const ThresholdResult t = qc_threshold(cfg.params, r, opt);
        const RunWriter w = writer(c, cfg);
        w.tables({{"threshold.csv", CsvTable{{"q_threshold", "log10_low", "log10_high", "residual"},
                                             {{t.q_threshold, t.log10_low, t.log10_high, t.residual}}}}});
        w.record("threshold", cfg, to_json(t));
        out << "q_threshold  " << format_double(t.q_threshold) << "\n"
            << "iterations   " << t.iterations << "\n"
            << "output       " << w.dir.string() << "\n";
        return 0;
    }
    if (used("sweep")) {
        const RunConfig cfg = load(c, "sweep", "sweep");
        const RunOutput r = run_sweep_config(cfg, threads);
        const RunWriter w = writer(c, cfg);
        w.tables(r.tables);
        w.record("sweep", cfg, r.summary);
        out << "rows         " << r.summary["rows"] << "\n"
            << "flagged      " << r.summary["flagged"].size() << "\n"
            << "output       " << w.dir.string() << "\n";
        return 0;
    }
    if (used("optimize")) {
        const RunConfig cfg = load(c, "optimize", "optimize");
        const json p = cfg.document.value("optimize", json::object());
        std::vector<FreeParam> free;
        Objective objective = Objective::Occupancy;
        OptimizerOptions opt;
        opt.threads = threads;
        try {
            for (const auto& [k, _] : p.items())
                if (k != "free" && k != "objective" && k != "grid_points" && k != "starts" && k != "max_evaluations")
                    throw ConfigError("unknown optimize key '" + k + "'");
            for (const auto& f : p.value("free", json::array())) free.push_back(parse_free_param(f.get<std::string>()));
            objective = parse_objective(p.value("objective", std::string("n_c")));
            opt.grid_points = p.value("grid_points", opt.grid_points);
            opt.starts = p.value("starts", opt.starts);
            opt.max_evaluations = p.value("max_evaluations", opt.max_evaluations);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed optimize payload: ") + e.what());
        }
        const OptimizationResult res = optimize_interference(cfg.params, free, objective, opt);
        const json j = to_json(res, objective);
        const RunWriter w = writer(c, cfg);
        CsvTable trace{{"evaluation", "objective"}, {}};
        for (const auto& t : res.trace) trace.rows.push_back({double(t.evaluations), t.best});
        w.tables({{"trace.csv", trace}});
        w.record("optimize", cfg, j);
        out << "objective    " << format_double(res.objective_value) << " (base " << format_double(res.base_value)
            << ")\n"
            << "optimal      " << j["optimal"].dump() << "\n"
            << "converged    " << (res.converged ? "yes" : "no") << "\n"
            << "output       " << w.dir.string() << "\n";
        return 0;
    }
    if (used("fig")) {
        const FigureBundle b = reproduce_figure(fig_id, threads);
        const std::string base = fig_id + "-" + b.manifest["parameter_hash"].get<std::string>() + "-" +
                                 b.manifest["generated_at"].get<std::string>();
        fs::path dir = fs::path(c.out) / base;
        for (int k = 2; fs::exists(dir); ++k) dir = fs::path(c.out) / (base + "-" + std::to_string(k));
        write_bundle(b, dir);
        out << "figure       " << fig_id << "\n"
            << "files        " << b.files.size() + 1 << "\n"
            << "output       " << dir.string() << "\n";
        return 0;
    }
    if (used("steady")) {
        const RunConfig cfg = load(c, "steady", nullptr);
        print_warnings(cfg, err);
        json result;
        if (cfg.physical) {
            const auto& d = *cfg.physical;
            result["steady_state"] = to_json(d.steady);
            result["couplings"] = {{"g_am", d.couplings.g_am}, {"g_amc", d.couplings.g_amc},
                                   {"x_zpm", d.couplings.x_zpm}, {"G_amc_over_wc", d.coupling}};
            result["warnings"] = d.warnings;
            out << "a0           " << d.steady.a0 << "\n"
                << "m0           " << d.steady.m0 << "\n"
                << "c0           " << d.steady.c0 << "\n"
                << "residual     " << format_double(d.steady.residual) << "\n";
        }
        result["params"] = to_json(cfg.params);
        const StabilityReport s = stability(build_drift(cfg.params, true));
        result["stability"] = to_json(s);
        const RunWriter w = writer(c, cfg);
        w.record("steady", cfg, result);
        out << "J_ac J_mc J_am " << format_double(cfg.params.J_ac) << " " << format_double(cfg.params.J_mc) << " "
            << format_double(cfg.params.J_am) << "\n"
            << "stable       " << (s.stable ? "yes" : "no") << " (margin " << format_double(s.margin) << ")\n"
            << "output       " << w.dir.string() << "\n";
        if (!s.stable) assert_stable(build_drift(cfg.params, true));
        return 0;
    }
    if (used("validate")) {
        const auto checks = run_validation(20240601u, threads);
        bool ok = true;
        for (const auto& r : checks) {
            out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [" << r.detail << "]\n";
            ok = ok && r.passed;
        }
        return ok ? 0 : 1;
    }
    out << app.help();
    return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Levitated micromagnet cooling simulator"};
    app.require_subcommand(1);
    Common c;
    std::string fig_id;
    std::map<std::string, CLI::App*> cmds;
    const std::pair<const char*, const char*> specs[] = {
        {"spectrum", "force noise spectrum on a frequency grid"},
        {"rates", "cooling and heating rates with the steady occupancy"},
        {"occupancy", "steady occupancy; fails on runaway heating"},
        {"dynamics", "occupancy trajectory n_c(t)"},
        {"threshold", "quality factor at which n_c crosses 1"},
        {"sweep", "one-parameter sweep"},
        {"optimize", "tune squeezing and couplings for interference"},
        {"fig", "write a figure data bundle"},
        {"steady", "steady state and drift stability"},
        {"validate", "run the cross-module oracle checks"},
    };
    for (const auto& [name, help] : specs) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, c);
        cmds[name] = cmd;
    }
    cmds["fig"]->add_option("id", fig_id, "figure id")->required()->check(CLI::IsMember(figure_ids()));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            for (const auto& [name, cmd] : cmds)
                if (cmd->parsed()) out << cmd->help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        return dispatch(app, cmds, c, fig_id, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        err << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace magcool
