#include "magcool/cooling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "magcool/errors.hpp"

namespace magcool {

RatePair rates(const SystemParams& params) {
    if (params.mechanism == Mechanism::MCM) return {psd(params, 1.0), psd(params, -1.0)};
    const ForceSpectrum spectrum(params);
    return {spectrum(1.0), spectrum(-1.0)};
}

double steady_occupancy(double gamma_c, double nbar_c, double gamma_minus, double gamma_plus) {
    const double damping = gamma_c + gamma_minus - gamma_plus;
    if (!(damping > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "no steady state: gamma_c + Gamma_net = " << damping << " <= 0 (gamma_c = " << gamma_c
           << ", Gamma_- = " << gamma_minus << ", Gamma_+ = " << gamma_plus << ")";
        throw RunawayError(os.str());
    }
    return (gamma_c * nbar_c + gamma_plus) / damping;
}

double steady_occupancy(const SystemParams& p, double gamma_minus, double gamma_plus) {
    return steady_occupancy(p.gamma_c, p.nbar_c, gamma_minus, gamma_plus);
}

double bath_occupancy_from(double n_c, double gamma_c, double gamma_minus, double gamma_plus) {
    return (n_c * (gamma_c + gamma_minus - gamma_plus) - gamma_plus) / gamma_c;
}

CoolingReport evaluate_cooling(const SystemParams& params) {
    CoolingReport r;
    r.params = params;
    r.mechanism = params.mechanism;
    const RatePair g = rates(params);
    r.stable = true;
    r.gamma_minus = g.cooling;
    r.gamma_plus = g.heating;
    r.gamma_net = g.cooling - g.heating;
    if (params.gamma_c + r.gamma_net > 0.0) {
        r.n_c = steady_occupancy(params, g.cooling, g.heating);
    } else {
        r.runaway = true;
        r.n_c = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

namespace {

struct RateEquation {
    double damping;
    double n_inf;
};

RateEquation rate_equation(const SystemParams& p) {
    const RatePair g = rates(p);
    return {p.gamma_c + g.net(), steady_occupancy(p, g.cooling, g.heating)};
}

}  // namespace

OccupancyTrajectory occupancy_dynamics(const SystemParams& params, double n0, const std::vector<double>& times) {
    if (!(n0 >= 0.0)) throw DomainError("initial occupancy must be nonnegative");
    const RateEquation eq = rate_equation(params);
    OccupancyTrajectory traj;
    traj.method = TrajectoryMethod::RateEquation;
    traj.times = times;
    traj.occupancies.reserve(times.size());
    for (double t : times) traj.occupancies.push_back(eq.n_inf + (n0 - eq.n_inf) * std::exp(-eq.damping * t));
    return traj;
}

std::optional<double> crossing_time(const SystemParams& params, double n0, double level) {
    const RateEquation eq = rate_equation(params);
    if (n0 <= level) return 0.0;
    if (eq.n_inf >= level) return std::nullopt;
    return std::log((n0 - eq.n_inf) / (level - eq.n_inf)) / eq.damping;
}

ThresholdResult qc_threshold(const SystemParams& params, const ThresholdOptions& options) {
    return qc_threshold(params, rates(params), options);
}

ThresholdResult qc_threshold(const SystemParams& params, const RatePair& g, const ThresholdOptions& opt) {
    if (!(opt.log10_low < opt.log10_high)) throw DomainError("qc_threshold: bracket low must be below high");
    auto occupancy_at = [&](double log10_q) {
        return steady_occupancy(std::pow(10.0, -log10_q), params.nbar_c, g.cooling, g.heating);
    };

    const double n_low = occupancy_at(opt.log10_low);
    const double n_high = occupancy_at(opt.log10_high);
    if (!(n_low > 1.0 && n_high < 1.0)) {
        std::ostringstream os;
        os.precision(6);
        os << "qc_threshold: n_c does not cross 1 inside log10 Q_c in [" << opt.log10_low << ", " << opt.log10_high
           << "]: n_c(low) = " << n_low << ", n_c(high) = " << n_high;
        throw BracketError(os.str(), n_low, n_high);
    }

    ThresholdResult r;
    double lo = opt.log10_low;
    double hi = opt.log10_high;
    while (hi - lo > opt.tolerance_decades) {
        const double mid = 0.5 * (lo + hi);
        if (occupancy_at(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
        ++r.iterations;
    }
    r.log10_low = lo;
    r.log10_high = hi;
    const double center = 0.5 * (lo + hi);
    r.q_threshold = std::pow(10.0, center);
    r.residual = std::abs(occupancy_at(center) - 1.0);
    return r;
}

}  // namespace magcool
