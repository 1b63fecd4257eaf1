#pragma once

// Full-covariance description of the linearized three-mode system. Works in the
// quadrature basis x = (o + o+)/sqrt2, p = -i(o - o+)/sqrt2 where the vacuum
// variance is 1/2, so the CM occupancy is (<x_c^2> + <p_c^2> - 1)/2.

#include <vector>

#include <Eigen/Dense>

#include "magcool/cooling.hpp"
#include "magcool/steady_state.hpp"

namespace magcool {

struct QuadratureModel {
    Eigen::MatrixXd drift;      // A
    Eigen::MatrixXd diffusion;  // D, symmetrized input noise
};

QuadratureModel to_quadratures(const DriftModel& model);

/// Solves A V + V A^T + D = 0.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion);

/// Occupancy of mode `mode` (0 cavity, 1 magnon, 2 CM) from a quadrature covariance.
double mode_occupancy(const Eigen::MatrixXd& covariance, int mode);

/// Smallest eigenvalue of V + i Omega / 2; nonnegative for a physical Gaussian state.
double physicality_margin(const Eigen::MatrixXd& covariance);

struct LyapunovResult {
    Eigen::MatrixXd covariance;
    double n_c = 0.0;
    double physicality = 0.0;
    StabilityReport stability;
};

/// Steady covariance of the full 6x6 system; refuses an unstable drift.
LyapunovResult lyapunov_steady(const SystemParams& params);

/// Cavity and magnon in their CM-free steady state, CM thermal with occupancy n0.
Eigen::MatrixXd initial_covariance(const SystemParams& params, double n0);

struct IntegratorOptions {
    double relative_tolerance = 1e-10;
    double absolute_tolerance = 1e-10;
};

/// Integrates dV/dt = A V + V A^T + D with adaptive Dormand-Prince steps and
/// returns V at each requested time (sorted, >= 0, measured from V0 at t = 0).
std::vector<Eigen::MatrixXd> integrate_covariance(const Eigen::MatrixXd& drift, const Eigen::MatrixXd& diffusion,
                                                  const Eigen::MatrixXd& v0, const std::vector<double>& times,
                                                  const IntegratorOptions& options = {});

OccupancyTrajectory lyapunov_dynamics(const SystemParams& params, const Eigen::MatrixXd& v0,
                                      const std::vector<double>& times, const IntegratorOptions& options = {});

}  // namespace magcool
