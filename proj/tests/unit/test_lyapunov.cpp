#include <doctest.h>

#include <cmath>

#include "magcool/errors.hpp"
#include "magcool/lyapunov.hpp"
#include "oracles.hpp"

using namespace magcool;

namespace {

SystemParams weak_point() {
    SystemParams p = oracle::fig2();
    p.gamma_c = 1e-3;
    p.nbar_c = 100.0;
    return p;
}

}  // namespace

TEST_SUITE("lyapunov") {

TEST_CASE("decoupled mechanical mode stays thermal") {
    SystemParams p = oracle::fig2();
    p.J_ac = p.J_mc = 0.0;
    p.gamma_c = 1e-3;
    p.nbar_c = 250.0;
    const LyapunovResult r = lyapunov_steady(p);
    CHECK(r.n_c == doctest::Approx(250.0).epsilon(1e-9));
    CHECK(r.physicality >= -1e-10);
    CHECK((r.covariance - r.covariance.transpose()).norm() < 1e-9 * r.covariance.norm());
}

TEST_CASE("covariance solves the Lyapunov equation") {
    const SystemParams p = weak_point();
    const LyapunovResult r = lyapunov_steady(p);
    const QuadratureModel q = to_quadratures(build_drift(p, true));
    const Eigen::MatrixXd res = q.drift * r.covariance + r.covariance * q.drift.transpose() + q.diffusion;
    CHECK(res.norm() < 1e-8 * (1.0 + r.covariance.norm()));
}

TEST_CASE("weak coupling agrees with the rate formula") {
    for (Mechanism m : {Mechanism::MCM, Mechanism::CMI}) {
        SystemParams p = oracle::fig2(m);
        p.set_quality_factor(1e7);
        const double ly = lyapunov_steady(p).n_c;
        const double rate = evaluate_cooling(p).n_c;
        CHECK(std::abs(ly - rate) / ly < 0.15);
    }
}

TEST_CASE("single mode decay") {
    // One damped mode: A = -g/2, D = g (nbar + 1/2).
    Eigen::MatrixXd A(1, 1), D(1, 1), V0(1, 1);
    A << -0.5;
    D << 1.0 * (3.0 + 0.5);
    V0 << 20.5;
    const auto out = integrate_covariance(A, D, V0, {0.0, 1.0, 5.0});
    const double v_inf = 3.5;
    for (std::size_t k = 0; k < 3; ++k) {
        const double t = std::vector<double>{0.0, 1.0, 5.0}[k];
        CHECK(out[k](0, 0) == doctest::Approx(v_inf + (20.5 - v_inf) * std::exp(-t)).epsilon(1e-8));
    }
}

TEST_CASE("steady covariance is a fixed point of the integrator") {
    const SystemParams p = weak_point();
    const LyapunovResult r = lyapunov_steady(p);
    const QuadratureModel q = to_quadratures(build_drift(p, true));
    const auto out = integrate_covariance(q.drift, q.diffusion, r.covariance, {0.0, 50.0});
    CHECK((out[1] - r.covariance).norm() < 1e-8 * r.covariance.norm());
}

TEST_CASE("covariance dynamics follow the rate equation") {
    for (Mechanism m : {Mechanism::MCM, Mechanism::CMI}) {
        const SystemParams p = [&] {
            SystemParams s = weak_point();
            s.mechanism = m;
            return s;
        }();
        const std::vector<double> times{0.0, 100.0, 300.0, 1000.0, 3000.0};
        const OccupancyTrajectory ly = lyapunov_dynamics(p, initial_covariance(p, p.nbar_c), times);
        const OccupancyTrajectory rate = occupancy_dynamics(p, p.nbar_c, times);
        REQUIRE(ly.occupancies.size() == times.size());
        for (std::size_t k = 0; k < times.size(); ++k)
            CHECK(std::abs(ly.occupancies[k] - rate.occupancies[k]) / rate.occupancies[k] < 0.2);
    }
}

TEST_CASE("initial state has the requested occupancy") {
    const SystemParams p = weak_point();
    const Eigen::MatrixXd v0 = initial_covariance(p, 37.0);
    CHECK(mode_occupancy(v0, 2) == doctest::Approx(37.0));
    CHECK(physicality_margin(v0) >= -1e-10);
}

TEST_CASE("unphysical initial covariance is refused") {
    const SystemParams p = weak_point();
    Eigen::MatrixXd v0 = initial_covariance(p, 5.0);
    v0(4, 4) = 0.1;
    v0(5, 5) = 0.1;
    CHECK_THROWS_AS(lyapunov_dynamics(p, v0, {0.0, 1.0}), DomainError);
}

TEST_CASE("unstable drift is refused") {
    SystemParams p = weak_point();
    p.delta_a = p.delta_m = -1.0;
    p.J_ac = p.J_mc = 0.5;
    p.gamma_c = 1e-9;
    CHECK_THROWS_AS(lyapunov_steady(p), Error);
}

}
