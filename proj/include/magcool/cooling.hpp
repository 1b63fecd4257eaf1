#pragma once

#include <optional>
#include <vector>

#include "magcool/model.hpp"
#include "magcool/spectra.hpp"

namespace magcool {

struct CoolingReport {
    double gamma_minus = 0.0;
    double gamma_plus = 0.0;
    double gamma_net = 0.0;
    double n_c = 0.0;  // NaN when gamma_c + gamma_net <= 0
    bool stable = false;
    bool runaway = false;
    Mechanism mechanism = Mechanism::CMI;
    SystemParams params;
};

/// Gamma_- = S_F(+1), Gamma_+ = S_F(-1) from the mechanism's spectrum source.
RatePair rates(const SystemParams& params);

/// n_c = (gamma_c nbar_c + Gamma_+) / (gamma_c + Gamma_-  - Gamma_+). Throws RunawayError
/// when the denominator is not positive.
double steady_occupancy(const SystemParams& params, double gamma_minus, double gamma_plus);
double steady_occupancy(double gamma_c, double nbar_c, double gamma_minus, double gamma_plus);

/// Inverse of the occupancy formula for the bath occupancy nbar_c.
double bath_occupancy_from(double n_c, double gamma_c, double gamma_minus, double gamma_plus);

/// Rates plus occupancy. Instability propagates as InstabilityError; runaway
/// heating is reported through `runaway` rather than thrown.
CoolingReport evaluate_cooling(const SystemParams& params);

enum class TrajectoryMethod { RateEquation, Lyapunov };

struct OccupancyTrajectory {
    std::vector<double> times;  // omega_c^-1 units
    std::vector<double> occupancies;
    TrajectoryMethod method = TrajectoryMethod::RateEquation;
};

/// Closed-form n(t) = n_inf + (n0 - n_inf) exp(-(gamma_c + Gamma_net) t).
OccupancyTrajectory occupancy_dynamics(const SystemParams& params, double n0, const std::vector<double>& times);

/// First time (omega_c^-1 units) the rate-equation trajectory reaches `level`,
/// or nullopt if it never does.
std::optional<double> crossing_time(const SystemParams& params, double n0, double level = 1.0);

/// Time grids may be given in seconds; convert with the run's omega_c.
inline double seconds_to_natural(const SystemParams& p, double seconds) { return seconds * p.omega_c; }
inline double natural_to_seconds(const SystemParams& p, double t) { return t / p.omega_c; }

struct ThresholdResult {
    double q_threshold = 0.0;
    double log10_low = 0.0;
    double log10_high = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |n_c(q_threshold) - 1|
};

struct ThresholdOptions {
    double log10_low = 2.0;
    double log10_high = 13.0;
    double tolerance_decades = 1e-3;
};

/// Quality factor Q_c = 1/gamma_c at which n_c crosses 1, by bisection in log10 Q_c.
/// Gamma_+- do not depend on Q_c and are computed once.
ThresholdResult qc_threshold(const SystemParams& params, const ThresholdOptions& options = {});
ThresholdResult qc_threshold(const SystemParams& params, const RatePair& cached_rates,
                             const ThresholdOptions& options = {});

}  // namespace magcool
