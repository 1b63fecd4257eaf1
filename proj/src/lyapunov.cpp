#include "magcool/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "magcool/errors.hpp"

namespace magcool {

namespace odeint = boost::numeric::odeint;

namespace {

Eigen::MatrixXcd quadrature_transform(int n) {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; k += 2) {
        U(k, k) = r;
        U(k, k + 1) = r;
        U(k + 1, k) = cplx(0.0, -r);
        U(k + 1, k + 1) = cplx(0.0, r);
    }
    return U;
}

Eigen::MatrixXd symplectic_form(int n) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; k += 2) {
        omega(k, k + 1) = 1.0;
        omega(k + 1, k) = -1.0;
    }
    return omega;
}

}  // namespace

QuadratureModel to_quadratures(const DriftModel& model) {
    const int n = model.dimension;
    const Eigen::MatrixXcd U = quadrature_transform(n);
    const Eigen::MatrixXcd A = U * model.drift * U.adjoint();
    const Eigen::MatrixXcd B = model.noise_map.cast<cplx>();
    const Eigen::MatrixXcd sym = 0.5 * (model.input_correlations + model.input_correlations.transpose());
    const Eigen::MatrixXcd D = U * B * sym * B.transpose() * U.transpose();
    return {A.real(), 0.5 * (D.real() + D.real().transpose())};
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D) {
    const Eigen::Index n = A.rows();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    // vec(A V + V A^T) = (I (x) A + A (x) I) vec(V), column-major vec.
    Eigen::MatrixXd kron_sum = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            kron_sum.block(i * n, j * n, n, n) += eye(i, j) * A + A(i, j) * eye;
        }
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);
    const Eigen::VectorXd v = kron_sum.fullPivLu().solve(rhs);
    Eigen::MatrixXd V = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
    return 0.5 * (V + V.transpose());
}

double mode_occupancy(const Eigen::MatrixXd& V, int mode) {
    const int k = 2 * mode;
    return 0.5 * (V(k, k) + V(k + 1, k + 1) - 1.0);
}

double physicality_margin(const Eigen::MatrixXd& V) {
    const Eigen::Index n = V.rows();
    const Eigen::MatrixXcd H = V.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form(static_cast<int>(n)).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

LyapunovResult lyapunov_steady(const SystemParams& params) {
    const DriftModel model = build_drift(params, true);
    LyapunovResult r;
    r.stability = assert_stable(model);
    const QuadratureModel q = to_quadratures(model);
    r.covariance = solve_lyapunov(q.drift, q.diffusion);
    r.n_c = mode_occupancy(r.covariance, 2);
    r.physicality = physicality_margin(r.covariance);
    return r;
}

Eigen::MatrixXd initial_covariance(const SystemParams& params, double n0) {
    if (!(n0 >= 0.0)) throw DomainError("initial occupancy must be nonnegative");
    const DriftModel sub = build_drift(params, false);
    assert_stable(sub);
    const QuadratureModel q = to_quadratures(sub);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(6, 6);
    V.topLeftCorner(4, 4) = solve_lyapunov(q.drift, q.diffusion);
    V(4, 4) = V(5, 5) = n0 + 0.5;
    return V;
}

std::vector<Eigen::MatrixXd> integrate_covariance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D,
                                                  const Eigen::MatrixXd& v0, const std::vector<double>& times,
                                                  const IntegratorOptions& opt) {
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw DomainError("integrate_covariance: times must be sorted and nonnegative");
    const Eigen::Index n = A.rows();
    using state_type = std::vector<double>;

    auto rhs = [&](const state_type& x, state_type& dxdt, double) {
        const Eigen::Map<const Eigen::MatrixXd> V(x.data(), n, n);
        Eigen::Map<Eigen::MatrixXd> dV(dxdt.data(), n, n);
        dV = A * V + V * A.transpose() + D;
    };

    auto stepper = odeint::make_controlled(opt.absolute_tolerance, opt.relative_tolerance,
                                           odeint::runge_kutta_dopri5<state_type>());

    state_type x(v0.data(), v0.data() + n * n);
    double t = 0.0;
    // Explicit-scheme stability bound as the first guess.
    double dt = 0.1 / std::max(1.0, A.cwiseAbs().maxCoeff());
    std::vector<Eigen::MatrixXd> out;
    out.reserve(times.size());
    for (double target : times) {
        while (t < target) {
            double step = std::min(dt, target - t);
            const bool last = step == target - t;
            const double t_before = t;
            if (stepper.try_step(rhs, x, t, step) == odeint::success) {
                // try_step advanced t and proposed the next step size
                dt = last ? std::max(dt, step) : step;
                if (last) t = target;
            } else {
                dt = step;
                const double floor = 1e-14 * std::max(1.0, std::abs(t_before));
                if (dt < floor) {
                    std::ostringstream os;
                    os << "covariance integrator step size underflow at t = " << t_before << " (dt = " << dt << ")";
                    throw IntegratorError(os.str());
                }
            }
        }
        out.push_back(Eigen::Map<const Eigen::MatrixXd>(x.data(), n, n));
    }
    return out;
}

OccupancyTrajectory lyapunov_dynamics(const SystemParams& params, const Eigen::MatrixXd& v0,
                                      const std::vector<double>& times, const IntegratorOptions& opt) {
    const DriftModel model = build_drift(params, true);
    assert_stable(model);
    if (v0.rows() != 6 || v0.cols() != 6) throw DomainError("lyapunov_dynamics: V0 must be 6x6");
    if (physicality_margin(v0) < -1e-10) throw DomainError("lyapunov_dynamics: V0 violates V + i Omega/2 >= 0");
    const QuadratureModel q = to_quadratures(model);
    const auto covs = integrate_covariance(q.drift, q.diffusion, v0, times, opt);

    OccupancyTrajectory traj;
    traj.method = TrajectoryMethod::Lyapunov;
    traj.times = times;
    for (const auto& V : covs) traj.occupancies.push_back(mode_occupancy(V, 2));
    return traj;
}

}  // namespace magcool
