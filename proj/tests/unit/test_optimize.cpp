#include <doctest.h>

#include <cmath>
#include <numbers>

#include "magcool/errors.hpp"
#include "magcool/optimize.hpp"
#include "oracles.hpp"

using namespace magcool;

TEST_SUITE("optimize") {

TEST_CASE("no free parameters returns the base") {
    const SystemParams p = oracle::fig2();
    const OptimizationResult r = optimize_interference(p, {});
    CHECK(r.converged);
    CHECK(r.optimal == p);
    CHECK(r.objective_value == r.base_value);
}

TEST_CASE("squeezing phase optimum sits near 94 degrees") {
    const SystemParams p = oracle::fig2();
    OptimizerOptions o;
    o.threads = 2;
    const OptimizationResult r = optimize_interference(p, {FreeParam::PhiS}, Objective::HeatingRatio, o);
    CHECK(r.objective_value <= r.base_value);
    CHECK(r.converged);
    const double deg = r.optimal.phi_s * 180.0 / std::numbers::pi;
    const double off = std::fmod(std::abs(deg - 94.0), 180.0);
    CHECK(std::min(off, 180.0 - off) < 10.0);
    CHECK(r.optimal.phi_s >= 0.0);
    CHECK(r.optimal.phi_s < 2.0 * std::numbers::pi);
}

TEST_CASE("bounds are respected") {
    const SystemParams p = oracle::fig2();
    OptimizerOptions o;
    o.grid_points = 4;
    o.threads = 2;
    const OptimizationResult r =
        optimize_interference(p, {FreeParam::Rs, FreeParam::EpsA}, Objective::Occupancy, o);
    CHECK(r.objective_value <= r.base_value);
    CHECK(r.optimal.r_s >= 0.0);
    CHECK(r.optimal.r_s <= 3.0);
    CHECK(std::abs(r.optimal.eps_a) <= 0.95 * p.parametric_threshold() + 1e-12);
    CHECK(std::isfinite(objective_value(r.optimal, Objective::Occupancy)));
}

TEST_CASE("objective is infinite where the cooling fails") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.delta_m = -1.0;
    CHECK(std::isinf(objective_value(p, Objective::Occupancy)));
    p = oracle::fig2();
    p.eps_a = 5.0;
    CHECK(std::isinf(objective_value(p, Objective::HeatingRatio)));
}

TEST_CASE("unstable base is refused") {
    SystemParams p = oracle::fig2(Mechanism::MCM);
    p.delta_m = -1.0;
    CHECK_THROWS_AS(optimize_interference(p, {FreeParam::PhiS}), InstabilityError);
}

TEST_CASE("names") {
    CHECK(parse_free_param("J_am") == FreeParam::Jam);
    CHECK(parse_objective("stokes") == Objective::StokesPsd);
    CHECK_THROWS_AS(parse_free_param("gamma_a"), ConfigError);
    CHECK_THROWS_AS(parse_objective("speed"), ConfigError);
    CHECK_THROWS_AS(optimize_interference(oracle::fig2(), {FreeParam::Rs, FreeParam::Rs}), ConfigError);
}

TEST_CASE("result serialization uses degrees") {
    const SystemParams p = oracle::fig2();
    const auto j = to_json(optimize_interference(p, {}), Objective::Occupancy);
    CHECK(j["optimal"]["phi_s"].get<double>() == doctest::Approx(94.0));
    CHECK(j["objective"] == "n_c");
}

}
