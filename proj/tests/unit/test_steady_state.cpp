#include <doctest.h>

#include <cmath>
#include <random>

#include "magcool/errors.hpp"
#include "magcool/steady_state.hpp"
#include "oracles.hpp"

using namespace magcool;

namespace {

const cplx I(0.0, 1.0);

// Steady-state equations written out from the mean-field Heisenberg equations.
std::array<cplx, 3> equations(const SystemParams& p, cplx W, cplx E, double G, cplx a, cplx m, cplx c) {
    const cplx ka(p.gamma_a / 2.0, p.delta_a);
    const cplx km(p.gamma_m / 2.0, p.delta_m);
    const cplx kc(p.gamma_c / 2.0, 1.0);
    const double x = 2.0 * c.real();
    return {-ka * a - I * G * x * m + W - 2.0 * I * p.eps_a * std::conj(a),
            -km * m - I * G * x * a + E,
            -kc * c - I * G * (a * std::conj(m) + std::conj(a) * m)};
}

}  // namespace

TEST_SUITE("steady_state") {

TEST_CASE("cavity-only steady state solves its equation") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        SystemParams p;
        p.gamma_a = 1.0 + std::abs(u(rng)) * 3.0;
        p.delta_a = 2.0 * u(rng);
        p.eps_a = 0.4 * p.parametric_threshold() * std::polar(1.0, 3.0 * u(rng));
        const cplx W(u(rng) * 10.0, u(rng) * 10.0);
        const SteadyState s = solve_mcm(p, W);
        const auto f = equations(p, W, 0.0, 0.0, s.a0, 0.0, 0.0);
        CHECK(std::abs(f[0]) < 1e-12 * (1.0 + std::abs(W)));
        CHECK(s.m0 == cplx(0.0));
        CHECK(s.c0 == cplx(0.0));
    }
}

TEST_CASE("parametric threshold is refused") {
    SystemParams p;
    p.gamma_a = 2.0;
    p.delta_a = 0.0;
    p.eps_a = 0.5;  // 4|eps|^2 = 1 = |gamma_a/2|^2
    CHECK_THROWS_AS(solve_mcm(p, 1.0), ThresholdError);
    CHECK_THROWS_AS(check_parametric_threshold(p), ThresholdError);
}

TEST_CASE("three-mode steady state is self-consistent") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        SystemParams p;
        p.gamma_a = 0.5 + 3.0 * u(rng);
        p.gamma_m = 0.5 + 3.0 * u(rng);
        p.delta_a = -2.0 + 4.0 * u(rng);
        p.delta_m = -2.0 + 4.0 * u(rng);
        p.gamma_c = 1e-3;
        const cplx W(5.0 * u(rng), 5.0 * u(rng));
        const cplx E(5.0 * u(rng), 0.0);
        const double G = 1e-3 * u(rng);
        const SteadyState s = solve_cmi(p, W, E, G);
        const auto f = equations(p, W, E, G, s.a0, s.m0, s.c0);
        CHECK(std::abs(f[0]) < 1e-9);
        CHECK(std::abs(f[1]) < 1e-9);
        CHECK(std::abs(f[2]) < 1e-9);
        CHECK(s.residual < 1e-10);
        CHECK(cmi_residual(p, W, E, G, s.a0, s.m0, s.c0) == doctest::Approx(s.residual).epsilon(1e-6).scale(1e-12));
    }
}

TEST_CASE("zero coupling decouples the modes") {
    SystemParams p;
    p.eps_a = 0.2;
    const cplx W(3.0, -1.0), E(2.0, 0.5);
    const SteadyState s = solve_cmi(p, W, E, 0.0);
    const SteadyState a = solve_mcm(p, W);
    CHECK(std::abs(s.a0 - a.a0) < 1e-10);
    CHECK(std::abs(s.m0 - E / cplx(p.gamma_m / 2.0, p.delta_m)) < 1e-10);
    CHECK(std::abs(s.c0) < 1e-12);
}

TEST_CASE("steady state is continuous in the drive") {
    SystemParams p;
    p.gamma_c = 1e-2;
    const SteadyState s1 = solve_cmi(p, 4.0, 3.0, 5e-4);
    const SteadyState s2 = solve_cmi(p, 4.0 + 1e-6, 3.0, 5e-4);
    CHECK(std::abs(s1.a0 - s2.a0) < 1e-5);
    CHECK(std::abs(s1.c0 - s2.c0) < 1e-5);
}

TEST_CASE("effective couplings follow the steady amplitudes") {
    SteadyState s;
    s.a0 = {3.0, 4.0};
    s.m0 = {0.0, 2.0};
    s.c0 = {0.25, 1.0};
    const EffectiveCouplings j = effective_couplings(s, 0.1);
    CHECK(j.J_ac == doctest::Approx(0.2));
    CHECK(j.J_mc == doctest::Approx(0.5));
    CHECK(j.J_am == doctest::Approx(0.05));
}

TEST_CASE("drift rows come in conjugate pairs") {
    const SystemParams p = oracle::fig2();
    for (bool cm : {false, true}) {
        const DriftModel m = build_drift(p, cm);
        const int n = m.dimension;
        CHECK(n == (cm ? 6 : 4));
        for (int r = 0; r < n; r += 2)
            for (int c = 0; c < n; c += 2) {
                CHECK(std::abs(m.drift(r + 1, c + 1) - std::conj(m.drift(r, c))) < 1e-15);
                CHECK(std::abs(m.drift(r + 1, c) - std::conj(m.drift(r, c + 1))) < 1e-15);
            }
    }
}

TEST_CASE("subsystem drift matches the hand-written Langevin drift") {
    const SystemParams p = oracle::fig2();
    const DriftModel m = build_drift(p, false);
    CHECK((m.drift - oracle::drift4(p)).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::MatrixXcd D = m.noise_map.cast<cplx>() * m.input_correlations * m.noise_map.cast<cplx>();
    CHECK((D - oracle::diffusion4(p)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("MCM drift drops the cavity couplings") {
    const SystemParams p = oracle::fig2(Mechanism::MCM);
    const DriftModel m = build_drift(p, true);
    CHECK(m.drift(0, 4) == cplx(0.0));
    CHECK(m.drift(0, 2) == cplx(0.0));
    CHECK(m.drift(2, 4) != cplx(0.0));
}

TEST_CASE("stability verdicts") {
    SystemParams p = oracle::fig2();
    const StabilityReport ok = assert_stable(build_drift(p, true));
    CHECK(ok.stable);
    CHECK(ok.margin > 0.0);
    CHECK(ok.eigenvalue_real_parts.size() == 6);
    p.eps_a = 2.0 * p.parametric_threshold();
    const StabilityReport bad = stability(build_drift(p, false));
    CHECK_FALSE(bad.stable);
    CHECK(bad.worst_eigenvalue.real() > 0.0);
    CHECK_THROWS_AS(assert_stable(build_drift(p, false)), InstabilityError);
}

}
