// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-red=3,4]
//
// Without the option the exit code is 0 only if every criterion passes. With
// it, the exit code is 0 only if exactly the listed criteria fail; a listed
// criterion that starts passing also fails the run so the list stays honest.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "magcool/config.hpp"
#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "magcool/figures.hpp"
#include "magcool/lyapunov.hpp"
#include "magcool/spectra.hpp"
#include "magcool/sweep.hpp"
#include "oracles.hpp"

using namespace magcool;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }
bool factor_of(double v, double target, double f) { return v >= target / f && v <= target * f; }

// CM occupancy formula, written out here rather than taken from the library.
double occupancy(double gamma_c, double nbar, double gm, double gp) { return (gamma_c * nbar + gp) / (gamma_c + gm - gp); }
double invert(double n, double gamma_c, double gm, double gp) { return (n * (gamma_c + gm - gp) - gp) / gamma_c; }

const FigureSeries& series(const FigurePreset& f, const std::string& name) {
    for (const auto& s : f.series)
        if (s.name == name) return s;
    throw DomainError("preset " + f.id + " has no series " + name);
}

SweepSpec sweep_of(const FigureSeries& s) {
    const RunConfig cfg = parse_config(s.config);
    return sweep_from_json(cfg.document["sweep"], cfg.params);
}

// Bath occupancy from the target MCM numbers: n_c = 4.926 at Gamma_-/+ = 0.005/0.001, gamma_c = 1e-7.
double derived_nbar() { return invert(4.926, 1e-7, 0.005, 0.001); }

Verdict c1() {
    const SystemParams p = oracle::fig2(Mechanism::MCM);
    const RatePair r = rates(p);
    const double e1 = std::abs(r.cooling - 0.005) / 0.005;
    const double e2 = std::abs(r.heating - 0.001) / 0.001;
    const double e3 = std::abs(r.net() - 0.004) / 0.004;
    return {std::max({e1, e2, e3}) <= 1e-12,
            "G- " + num(r.cooling) + ", G+ " + num(r.heating) + ", net " + num(r.net()) + ", max rel err " +
                num(std::max({e1, e2, e3}))};
}

Verdict c2() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> j(1e-3, 0.5), g(0.05, 5.0), d(-3.0, 3.0), w(-5.0, 5.0);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        SystemParams p;
        p.J_mc = j(rng);
        p.gamma_m = g(rng);
        p.delta_m = d(rng);
        p.gamma_a = g(rng);
        p.delta_a = d(rng);
        p.J_ac = p.J_am = 0.0;
        p.eps_a = 0.0;
        p.r_s = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double om = w(rng);
            const double ref = oracle::lorentzian(p.J_mc, p.gamma_m, p.delta_m, om);
            worst = std::max(worst, std::abs(psd_general(p, om) - ref) / ref);
        }
    }
    return {worst <= 1e-10, "100 x 50 points, max rel err " + num(worst)};
}

Verdict c3() {
    const SystemParams cmi = oracle::fig2();
    const double sp = psd(cmi, 1.0), sm = psd(cmi, -1.0);
    const double net = sp - sm;
    const double mcm_net = rates(oracle::fig2(Mechanism::MCM)).net();
    const bool primary = within(sp, 0.61, 0.82) && sm <= 0.006 && within(net, 0.60, 0.82);
    const bool fallback = sm < sp / 100.0 && net / mcm_net > 100.0;
    std::string d = "S(+1) " + num(sp) + " (want [0.61, 0.82]), S(-1) " + num(sm) + " (want <= 0.006), net " +
                    num(net) + " (want [0.60, 0.82]); fallback: S(-1)/S(+1) " + num(sm / sp) +
                    " (want < 0.01), enhancement " + num(net / mcm_net) + " (want > 100)";
    return {primary || fallback, d};
}

Verdict c4(bool c3_centered) {
    const double nbar = derived_nbar();
    SystemParams mcm = oracle::fig2(Mechanism::MCM);
    mcm.nbar_c = nbar;
    SystemParams cmi = oracle::fig2();
    cmi.nbar_c = nbar;
    const double n_mcm = evaluate_cooling(mcm).n_c;
    const double n_cmi = evaluate_cooling(cmi).n_c;
    const bool mcm_ok = std::abs(n_mcm - 4.93) <= 0.05;
    const bool cmi_ok = c3_centered && std::abs(n_cmi - 0.030) <= 0.006;
    return {mcm_ok && cmi_ok, "nbar_c " + num(nbar) + "; MCM n_c " + num(n_mcm) + " (want 4.93 +- 0.05); CMI n_c " +
                                  num(n_cmi) + " (want 0.030 +- 0.006" +
                                  (c3_centered ? ")" : ", conditional on criterion 3, which is not met)")};
}

Verdict c5() {
    SystemParams p = oracle::fig2();
    p.nbar_c = derived_nbar();
    p.set_quality_factor(1e7);
    const LyapunovResult ly = lyapunov_steady(p);
    const RatePair r = rates(p);
    const double formula = occupancy(p.gamma_c, p.nbar_c, r.cooling, r.heating);
    const double rel = std::abs(ly.n_c - formula) / formula;
    return {rel < 0.15 && ly.physicality >= -1e-10, "Lyapunov " + num(ly.n_c) + ", formula " + num(formula) +
                                                          ", rel diff " + num(rel) + ", physicality margin " +
                                                          num(ly.physicality)};
}

Verdict c6() {
    const FigurePreset f = figure_preset("fig4b");
    std::map<double, std::optional<double>> cmi;
    std::string d;
    const SweepSpec spec = sweep_of(series(f, "cmi_thresholds"));
    for (double r : spec.values) {
        SystemParams p = spec.base;
        p.r_s = r;
        try {
            cmi[r] = qc_threshold(p).q_threshold;
            d += "r=" + num(r) + ": " + num(*cmi[r]) + "; ";
        } catch (const BracketError& e) {
            cmi[r] = std::nullopt;
            d += "r=" + num(r) + ": none (n_c at Q=1e13 is " + num(e.n_at_high) + "); ";
        }
    }
    const SystemParams mcm = sweep_of(series(f, "mcm_threshold")).base;
    std::optional<double> qm;
    try {
        qm = qc_threshold(mcm).q_threshold;
    } catch (const BracketError&) {
    }
    d += "MCM: " + (qm ? num(*qm) : std::string("none")) + " (want within x3 of 1e7, 2.5e5 at r=2, 3.6e5 at r=1.6)";
    const auto t16 = cmi[1.6], t20 = cmi[2.0], t26 = cmi[2.6];
    const bool ok = t16 && t20 && t26 && *t26 < *t20 && *t20 < *t16 && factor_of(*t20, 2.5e5, 3.0) &&
                    factor_of(*t16, 3.6e5, 3.0) && qm && factor_of(*qm, 1e7, 3.0);
    return {ok, d};
}

Verdict c7() {
    const FigurePreset f = figure_preset("fig4a");
    auto cross = [&](const std::string& name) -> std::optional<double> {
        const SystemParams p = parse_config(series(f, name).config).params;
        const auto t = crossing_time(p, p.nbar_c);
        if (!t) return std::nullopt;
        return natural_to_seconds(p, *t);
    };
    const auto cmi = cross("cmi_q1e+11");
    const auto mcm_hi = cross("mcm_q1e+11");
    const auto mcm_lo = cross("mcm_q5e+07");
    const bool ok = cmi && within(*cmi, 3e-4, 3e-3) && mcm_hi && within(*mcm_hi, 3e-2, 3e-1) && !mcm_lo;
    auto show = [](const std::optional<double>& t) { return t ? num(*t) + " s" : std::string("never"); };
    return {ok, "CMI Q=1e11 " + show(cmi) + " (want [3e-4, 3e-3]); MCM Q=1e11 " + show(mcm_hi) +
                    " (want [3e-2, 3e-1]); MCM Q=5e7 " + show(mcm_lo) + " (want never)"};
}

Verdict c8() {
    const FigurePreset f = figure_preset("fig3");
    const SweepResult a = run_sweep(sweep_of(series(f, "cmi_gamma_a")));
    double min13 = INFINITY, max_all = 0.0;
    int unstable = 0;
    for (const auto& row : a.rows) {
        if (row.status != RowStatus::Ok) {
            ++unstable;
            continue;
        }
        if (within(row.value, 1.0, 3.0)) min13 = std::min(min13, row.report.n_c);
        max_all = std::max(max_all, row.report.n_c);
    }
    const bool a_ok = min13 <= 0.05 && max_all < 1.0 && unstable == 0;

    const SweepResult b = run_sweep(sweep_of(series(f, "mcm_gamma_m")));
    std::optional<double> crossing;
    for (std::size_t k = 1; k < b.rows.size(); ++k) {
        const double n0 = b.rows[k - 1].report.n_c, n1 = b.rows[k].report.n_c;
        if ((n0 - 1.0) * (n1 - 1.0) <= 0.0) {
            const double g0 = std::log(b.rows[k - 1].value), g1 = std::log(b.rows[k].value);
            crossing = std::exp(g0 + (1.0 - n0) * (g1 - g0) / (n1 - n0));
            break;
        }
    }
    const bool b_ok = crossing && within(*crossing, 0.5, 2.0);
    return {a_ok && b_ok, "(a) min n_c on gamma_a in [1, 3] " + num(min13) + " (want <= 0.05), max n_c " +
                              num(max_all) + " (want < 1), flagged rows " + std::to_string(unstable) +
                              "; (b) MCM crosses n_c = 1 at gamma_m " + (crossing ? num(*crossing) : "never") +
                              " (want [0.5, 2])"};
}

Verdict c9() {
    std::string d;
    bool ok = true;

    // nonnegativity of every emitted spectrum grid, and determinism of the sweep CSVs
    double lowest = INFINITY;
    int grids = 0, differing = 0;
    for (const auto& id : figure_ids()) {
        const FigureBundle one = reproduce_figure(id, 1);
        const FigureBundle two = reproduce_figure(id, 0);
        for (std::size_t k = 0; k < one.files.size(); ++k) {
            const auto& [name, text] = one.files[k];
            if (name != two.files[k].first || text != two.files[k].second) ++differing;
            if (name.size() < 13 || name.compare(name.size() - 13, 13, "_spectrum.csv") != 0) continue;
            ++grids;
            std::istringstream in(text);
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) lowest = std::min(lowest, std::stod(line.substr(line.rfind(',') + 1)));
        }
    }
    ok = ok && grids > 0 && lowest >= 0.0 && differing == 0;
    d += std::to_string(grids) + " spectrum grids, min S_F " + num(lowest) + "; " + std::to_string(differing) +
         " files differ between runs; ";

    // net damping changes sign between the red and blue sidebands
    for (Mechanism m : {Mechanism::MCM, Mechanism::CMI}) {
        SystemParams red = oracle::fig2(m), blue = oracle::fig2(m);
        blue.delta_a = blue.delta_m = -1.0;
        const double nr = rates(red).net(), nb = rates(blue).net();
        ok = ok && nr > 0.0 && nb < 0.0;
        d += std::string(to_string(m)) + " net " + num(nr) + " / " + num(nb) + "; ";
    }

    // occupancy inversion identity
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double gm = 1e-3 + u(rng);
        const double gp = gm * u(rng);
        const double gc = std::pow(10.0, -2.0 - 8.0 * u(rng));
        const double nbar = gp / gc * std::pow(10.0, 3.0 * u(rng));
        const double n = steady_occupancy(gc, nbar, gm, gp);
        worst = std::max(worst, std::abs(bath_occupancy_from(n, gc, gm, gp) - nbar) / nbar);
    }
    ok = ok && worst <= 1e-12;
    d += "inversion max rel err " + num(worst);
    return {ok, d};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expect_red;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        const std::string flag = "--expect-red=";
        if (a.rfind(flag, 0) == 0) {
            std::stringstream ss(a.substr(flag.size()));
            for (std::string item; std::getline(ss, item, ',');)
                if (!item.empty()) expect_red.insert(std::stoi(item));
        } else {
            std::cerr << "usage: acceptance [--expect-red=N,M,...]\n";
            return 2;
        }
    }

    std::map<int, Verdict> results;
    auto run = [&](int id, const std::function<Verdict()>& fn) {
        try {
            results[id] = fn();
        } catch (const std::exception& e) {
            results[id] = {false, std::string("threw: ") + e.what()};
        }
        std::cout << (results[id].pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << results[id].detail
                  << std::endl;
    };
    run(1, c1);
    run(2, c2);
    run(3, c3);
    const bool c3_centered = results[3].pass;
    run(4, [&] { return c4(c3_centered); });
    run(5, c5);
    run(6, c6);
    run(7, c7);
    run(8, c8);
    run(9, c9);

    std::set<int> red;
    for (const auto& [id, v] : results)
        if (!v.pass) red.insert(id);
    std::cout << "passed " << results.size() - red.size() << " of " << results.size() << "\n";
    if (argc > 1) {
        if (red != expect_red) {
            std::cout << "red set differs from the expected red set\n";
            return 1;
        }
        return 0;
    }
    return red.empty() ? 0 : 1;
}
