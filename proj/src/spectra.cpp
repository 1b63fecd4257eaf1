#include "magcool/spectra.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "magcool/errors.hpp"
#include "magcool/io.hpp"
#include "magcool/parallel.hpp"

namespace magcool {

namespace {

constexpr cplx I{0.0, 1.0};

double wrap_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    return phi < 0.0 ? phi + two_pi : phi;
}

PathDecomposition decompose(cplx ccm, cplx mcm, cplx combined) {
    PathDecomposition d;
    d.ccm = ccm;
    d.mcm = mcm;
    d.combined = combined;
    d.magnitude_ratio = std::abs(ccm) > 0.0 ? std::abs(mcm) / std::abs(ccm) : INFINITY;
    d.phase_difference = (std::abs(ccm) > 0.0 && std::abs(mcm) > 0.0) ? wrap_phase(std::arg(mcm) - std::arg(ccm)) : 0.0;
    return d;
}

}  // namespace

Susceptibilities susceptibilities(const SystemParams& p, double omega) {
    auto inv_da = [&](double w) { return cplx(p.gamma_a / 2.0, -(w - p.delta_a)); };
    auto dm = [&](double w) { return 1.0 / cplx(p.gamma_m / 2.0, -(w - p.delta_m)); };
    auto dressed = [&](double w) { return 1.0 / (inv_da(w) + p.J_am * p.J_am * dm(w)); };

    Susceptibilities s;
    s.D_a = 1.0 / inv_da(omega);
    s.D_m = dm(omega);
    s.D_c = 1.0 / cplx(p.gamma_c / 2.0, -(omega - 1.0));
    s.D = dressed(omega);
    s.S0 = 1.0 - 4.0 * std::norm(p.eps_a) * s.D * std::conj(dressed(-omega));
    return s;
}

double mcm_psd(const SystemParams& p, double omega) {
    const double detuning = omega - p.delta_m;
    return p.J_mc * p.J_mc * p.gamma_m / (detuning * detuning + 0.25 * p.gamma_m * p.gamma_m);
}

RatePair mcm_rates(const SystemParams& p, double omega) { return {mcm_psd(p, omega), mcm_psd(p, -omega)}; }

ForceSpectrum::ForceSpectrum(const SystemParams& params, ThermalWeighting weighting)
    : params_(params.fluctuation_view()), weighting_(weighting), model_(build_drift(params, false)) {
    stability_ = assert_stable(model_);
}

Eigen::Vector4cd ForceSpectrum::force_coefficients(double omega) const {
    Eigen::Matrix4cd resolvent = -I * omega * Eigen::Matrix4cd::Identity() - model_.drift;
    const Eigen::PartialPivLU<Eigen::Matrix4cd> lu(resolvent);
    if (std::abs(lu.determinant()) < 1e-300) {
        std::ostringstream os;
        os << "linear response singular at omega = " << omega;
        throw SingularityError(os.str());
    }
    const Eigen::Matrix4cd response = lu.solve(model_.noise_map.cast<cplx>());
    Eigen::RowVector4cd readout;
    readout << -params_.J_ac, -params_.J_ac, -params_.J_mc, -params_.J_mc;
    return (readout * response).transpose();
}

double ForceSpectrum::operator()(double omega) const {
    const Eigen::Vector4cd cp = force_coefficients(omega);
    const Eigen::Vector4cd cm = force_coefficients(-omega);
    const Eigen::Matrix4cd& C = model_.input_correlations;

    cplx cavity = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) cavity += cp(i) * C(i, j) * cm(j);

    double magnon;
    if (weighting_ == ThermalWeighting::Lumped) {
        magnon = (2.0 * params_.nbar_m + 1.0) * std::norm(cp(2));
    } else {
        magnon = (cp(2) * C(2, 3) * cm(3) + cp(3) * C(3, 2) * cm(2)).real();
    }
    return cavity.real() + magnon;
}

double psd_general(const SystemParams& params, double omega, ThermalWeighting weighting) {
    return ForceSpectrum(params, weighting)(omega);
}

double psd(const SystemParams& params, double omega) {
    if (params.mechanism == Mechanism::MCM) {
        params.validate();
        assert_stable(build_drift(params, false));
        return mcm_psd(params, omega);
    }
    return psd_general(params, omega);
}

SpectrumResult psd_grid(const SystemParams& params, double omega_min, double omega_max, int n_points, int threads) {
    if (n_points < 2) throw DomainError("psd_grid: n_points must be >= 2, got " + std::to_string(n_points));
    if (!(omega_min < omega_max)) {
        std::ostringstream os;
        os << "psd_grid: omega_min (" << omega_min << ") must be < omega_max (" << omega_max << ")";
        throw DomainError(os.str());
    }
    SpectrumResult out;
    out.mechanism = params.mechanism;
    out.parameter_hash = parameter_hash(params);
    out.frequencies.resize(n_points);
    out.values.resize(n_points);
    const double step = (omega_max - omega_min) / (n_points - 1);
    for (int k = 0; k < n_points; ++k) out.frequencies[k] = k + 1 == n_points ? omega_max : omega_min + k * step;

    if (params.mechanism == Mechanism::MCM) {
        params.validate();
        assert_stable(build_drift(params, false));
        for (int k = 0; k < n_points; ++k) out.values[k] = mcm_psd(params, out.frequencies[k]);
        return out;
    }
    const ForceSpectrum spectrum(params);
    parallel_for(out.frequencies.size(), threads, [&](std::size_t k) { out.values[k] = spectrum(out.frequencies[k]); });
    return out;
}

ScatteringAmplitudes cmi_amplitudes(const SystemParams& p, double omega) {
    const Susceptibilities at = susceptibilities(p, omega);
    const Susceptibilities base = susceptibilities(p, std::abs(omega));
    if (std::abs(at.S0) < 1e-12) {
        std::ostringstream os;
        os << "parametric singularity: |S0(" << omega << ")| = " << std::abs(at.S0) << " (eps_a = " << p.eps_a << ")";
        throw SingularityError(os.str());
    }
    const double ch = std::cosh(p.r_s);
    const double sh = std::sinh(p.r_s);
    const cplx phase = std::polar(1.0, -2.0 * p.phi_s);
    const double d2 = std::norm(at.D);

    ScatteringAmplitudes t;
    t.T_a_SFa = (p.J_ac / at.S0) * ((at.D + 2.0 * I * std::conj(p.eps_a) * std::norm(base.D)) * sh * phase +
                                    (at.D - 2.0 * I * p.eps_a * d2) * ch);
    t.T_m_SFa = (p.J_ac / at.S0) * (-std::sqrt(p.gamma_m) * I * p.J_am * at.D_m * (std::conj(at.D) + 2.0 * I * p.eps_a * d2));
    return t;
}

ChannelAmplitudes channel_amplitudes(const SystemParams& params, double omega) {
    const ForceSpectrum spectrum(params);
    const SystemParams& p = spectrum.params();
    const Eigen::Vector4cd c = spectrum.force_coefficients(omega);
    const cplx cavity = c(0) * std::cosh(p.r_s) + c(1) * std::polar(1.0, 2.0 * p.phi_s) * std::sinh(p.r_s);
    return {cavity / std::sqrt(p.gamma_a), c(2) / std::sqrt(p.gamma_m)};
}

InterferenceDiagnostic interference_diagnostic(const SystemParams& params, double omega) {
    SystemParams ccm_only = params;
    ccm_only.J_mc = 0.0;
    SystemParams mcm_only = params;
    mcm_only.J_ac = 0.0;

    const ChannelAmplitudes ccm = channel_amplitudes(ccm_only, omega);
    const ChannelAmplitudes mcm = channel_amplitudes(mcm_only, omega);
    const ChannelAmplitudes both = channel_amplitudes(params, omega);

    InterferenceDiagnostic d;
    d.omega = omega;
    d.cavity = decompose(ccm.cavity, mcm.cavity, both.cavity);
    d.magnon = decompose(ccm.magnon, mcm.magnon, both.magnon);
    return d;
}

}  // namespace magcool
