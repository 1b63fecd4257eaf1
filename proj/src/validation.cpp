#include "magcool/validation.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "magcool/config.hpp"
#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "magcool/figures.hpp"
#include "magcool/lyapunov.hpp"
#include "magcool/spectra.hpp"
#include "magcool/sweep.hpp"

namespace magcool {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

SystemParams fig2_params() {
    const FigurePreset f = figure_preset("fig2");
    for (const auto& s : f.series)
        if (s.name == "cmi_spectrum") return parse_config(s.config).params;
    throw DomainError("fig2 preset lacks the CMI spectrum series");
}

CheckResult reduction(unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> j(0.001, 0.3), g(0.1, 5.0), d(-3.0, 3.0), w(-4.0, 4.0);
    double worst = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        SystemParams p;
        p.J_mc = j(rng);
        p.gamma_m = g(rng);
        p.gamma_a = g(rng);
        p.delta_m = d(rng);
        p.delta_a = d(rng);
        for (int k = 0; k < 50; ++k) {
            const double omega = w(rng);
            const double ref = mcm_psd(p, omega);
            worst = std::max(worst, std::abs(psd_general(p, omega) - ref) / ref);
        }
    }
    return {"general spectrum reduces to the MCM Lorentzian", worst < 1e-10, "max rel. error " + fmt(worst)};
}

CheckResult lyapunov_vs_rate(const SystemParams& fig2) {
    SystemParams p = fig2;
    p.set_quality_factor(1e7);
    const LyapunovResult ly = lyapunov_steady(p);
    const CoolingReport rep = evaluate_cooling(p);
    const double rel = std::abs(ly.n_c - rep.n_c) / ly.n_c;
    const bool ok = rel < 0.15 && ly.physicality >= -1e-10;
    return {"Lyapunov n_c agrees with the rate formula (15%)", ok,
            "Lyapunov " + fmt(ly.n_c) + ", formula " + fmt(rep.n_c) + ", physicality " + fmt(ly.physicality)};
}

CheckResult sweep_consistency(const SystemParams& fig2, int threads) {
    SweepSpec spec;
    spec.key = "gamma_a";
    spec.values = make_grid(0.5, 5.0, 10, Scale::Log);
    spec.base = fig2;
    const SweepResult r = run_sweep(spec, threads);
    int mismatches = 0;
    for (const auto& row : r.rows) {
        if (row.status == RowStatus::Unstable) continue;
        SystemParams p = fig2;
        set_parameter(p, spec.key, row.value);
        const CoolingReport fresh = evaluate_cooling(p);
        if (fresh.gamma_minus != row.report.gamma_minus || fresh.gamma_plus != row.report.gamma_plus ||
            !(fresh.n_c == row.report.n_c || (std::isnan(fresh.n_c) && std::isnan(row.report.n_c))))
            ++mismatches;
    }
    return {"sweep rows equal point evaluations", mismatches == 0, std::to_string(mismatches) + " mismatches"};
}

CheckResult nonnegative(const SystemParams& fig2, int threads) {
    double lowest = 0.0;
    for (Mechanism m : {Mechanism::MCM, Mechanism::CMI}) {
        SystemParams p = fig2;
        p.mechanism = m;
        const SpectrumResult s = psd_grid(p, -5.0, 5.0, 1001, threads);
        for (double v : s.values) lowest = std::min(lowest, v);
    }
    return {"spectra are nonnegative", lowest >= 0.0, "min value " + fmt(lowest)};
}

CheckResult inversion(unsigned seed) {
    std::mt19937_64 rng(seed + 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double gm = 1e-3 + u(rng);
        const double gp = gm * u(rng);
        const double gc = std::pow(10.0, -2.0 - 8.0 * u(rng));
        // Keep the thermal inflow gc * nbar at least Gamma_+; below that the
        // inversion loses digits to cancellation, not to algebra.
        const double nbar = gp / gc * std::pow(10.0, 3.0 * u(rng));
        const double n = steady_occupancy(gc, nbar, gm, gp);
        worst = std::max(worst, std::abs(bath_occupancy_from(n, gc, gm, gp) - nbar) / nbar);
    }
    return {"occupancy formula inverts to the bath occupancy", worst < 1e-12, "max rel. error " + fmt(worst)};
}

CheckResult volume_invariance() {
    const PhysicalConstants c;
    DeviceGeometry g;
    const double omega_a = 2.0 * std::numbers::pi * 10e9;
    const auto a = derive_couplings(c, g, omega_a);
    g.sphere_diameter *= 2.0;
    const auto b = derive_couplings(c, g, omega_a);
    const double rel = std::abs(a.g_amc - b.g_amc) / a.g_amc;
    return {"g_amc is independent of the sphere volume", rel < 1e-12, "rel. change " + fmt(rel)};
}

}  // namespace

std::vector<CheckResult> run_validation(unsigned seed, int threads) {
    std::vector<CheckResult> out;
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, std::string("threw: ") + e.what()});
        }
    };
    const SystemParams fig2 = fig2_params();
    guarded("reduction", [&] { return reduction(seed); });
    guarded("lyapunov", [&] { return lyapunov_vs_rate(fig2); });
    guarded("sweep", [&] { return sweep_consistency(fig2, threads); });
    guarded("nonnegative", [&] { return nonnegative(fig2, threads); });
    guarded("inversion", [&] { return inversion(seed); });
    guarded("volume", [&] { return volume_invariance(); });
    return out;
}

}  // namespace magcool
