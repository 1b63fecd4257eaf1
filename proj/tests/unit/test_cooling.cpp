#include <doctest.h>

#include <cmath>
#include <random>

#include "magcool/cooling.hpp"
#include "magcool/errors.hpp"
#include "oracles.hpp"

using namespace magcool;

TEST_SUITE("cooling") {

TEST_CASE("MCM rates at the Fig. 2 point") {
    const SystemParams p = oracle::fig2(Mechanism::MCM);
    const RatePair r = rates(p);
    CHECK(r.cooling == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(r.heating == doctest::Approx(0.001).epsilon(1e-12));
    // n_c = (gamma_c nbar + G+) / (gamma_c + Gnet)
    const double expect = (1e-7 * 1.87e5 + 0.001) / (1e-7 + 0.004);
    CHECK(evaluate_cooling(p).n_c == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("blue detuning gives negative net damping") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.delta_m = -1.0;
    const CoolingReport r = evaluate_cooling(p);
    CHECK(r.gamma_net < 0.0);
    CHECK(r.runaway);
    CHECK(std::isnan(r.n_c));
    CHECK_THROWS_AS(steady_occupancy(p, r.gamma_minus, r.gamma_plus), RunawayError);
}

TEST_CASE("no optical damping leaves the bath occupancy") {
    CHECK(steady_occupancy(1e-3, 42.0, 0.0, 0.0) == doctest::Approx(42.0));
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.J_mc = 0.0;
    CHECK(evaluate_cooling(p).n_c == doctest::Approx(p.nbar_c).epsilon(1e-12));
}

TEST_CASE("occupancy formula inverts") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double gm = 1e-3 + u(rng);
        const double gp = gm * u(rng);
        const double gc = std::pow(10.0, -2.0 - 8.0 * u(rng));
        const double nbar = gp / gc * std::pow(10.0, 3.0 * u(rng));
        const double n = steady_occupancy(gc, nbar, gm, gp);
        CHECK(bath_occupancy_from(n, gc, gm, gp) == doctest::Approx(nbar).epsilon(1e-12));
    }
}

TEST_CASE("occupancy falls with the quality factor when it is above the optical floor") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double gm = 1e-3 + u(rng);
        const double gp = gm * u(rng) * 0.99;
        const double floor = gp / (gm - gp);
        const double nbar = floor * (1.0 + 100.0 * u(rng)) + 1.0;
        const double q1 = std::pow(10.0, 2.0 + 10.0 * u(rng));
        const double q2 = q1 * (1.0 + 10.0 * u(rng));
        CHECK(steady_occupancy(1.0 / q2, nbar, gm, gp) <= steady_occupancy(1.0 / q1, nbar, gm, gp));
    }
}

TEST_CASE("rate-equation trajectory") {
    const SystemParams p = oracle::fig2(Mechanism::MCM);
    const double n0 = p.nbar_c;
    const RatePair r = rates(p);
    const double n_inf = steady_occupancy(p, r.cooling, r.heating);
    const double rate = p.gamma_c + r.net();
    const OccupancyTrajectory t = occupancy_dynamics(p, n0, {0.0, std::log(2.0) / rate, 1e6});
    CHECK(t.occupancies[0] == doctest::Approx(n0));
    CHECK(t.occupancies[1] == doctest::Approx(n_inf + 0.5 * (n0 - n_inf)).epsilon(1e-12));
    CHECK(t.occupancies[2] == doctest::Approx(n_inf).epsilon(1e-10));

    const OccupancyTrajectory flat = occupancy_dynamics(p, n_inf, {0.0, 10.0, 1000.0});
    for (double n : flat.occupancies) CHECK(n == doctest::Approx(n_inf).epsilon(1e-12));
}

TEST_CASE("crossing time") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.set_quality_factor(1e11);
    const RatePair r = rates(p);
    const double n_inf = steady_occupancy(p, r.cooling, r.heating);
    REQUIRE(n_inf < 1.0);
    const double rate = p.gamma_c + r.net();
    const double expect = std::log((p.nbar_c - n_inf) / (1.0 - n_inf)) / rate;
    const auto t = crossing_time(p, p.nbar_c);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(expect).epsilon(1e-12));

    p.set_quality_factor(1e5);
    CHECK_FALSE(crossing_time(p, p.nbar_c).has_value());
}

TEST_CASE("threshold has a closed form without heating") {
    // G+ = 0: n_c = gamma_c nbar / (gamma_c + G-) = 1  =>  Q = (nbar - 1) / G-
    SystemParams p;
    p.mechanism = Mechanism::MCM;
    p.nbar_c = 1e4;
    p.gamma_c = 1e-7;
    const RatePair r{0.004, 0.0};
    const ThresholdResult t = qc_threshold(p, r, {2.0, 13.0, 1e-9});
    CHECK(t.q_threshold == doctest::Approx((p.nbar_c - 1.0) / 0.004).epsilon(1e-7));
    CHECK(t.log10_low <= std::log10(t.q_threshold));
    CHECK(t.log10_high >= std::log10(t.q_threshold));
    CHECK(t.residual < 1e-6);
}

TEST_CASE("threshold bracket keeps the crossing inside") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    const ThresholdResult t = qc_threshold(p);
    SystemParams lo = p, hi = p;
    lo.set_quality_factor(std::pow(10.0, t.log10_low));
    hi.set_quality_factor(std::pow(10.0, t.log10_high));
    CHECK(evaluate_cooling(lo).n_c >= 1.0);
    CHECK(evaluate_cooling(hi).n_c <= 1.0);
    CHECK(t.log10_high - t.log10_low <= 1e-3);
}

TEST_CASE("threshold reports a missing crossing") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.delta_m = 0.2;  // optical floor G+ / Gnet is about 2
    try {
        qc_threshold(p);
        FAIL("expected a bracket error");
    } catch (const BracketError& e) {
        CHECK(e.n_at_high > 1.0);
    }
}

}
