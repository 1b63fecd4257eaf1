#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "magcool/model.hpp"
#include "magcool/steady_state.hpp"

namespace magcool {

/// Response functions at one frequency (omega_c units).
struct Susceptibilities {
    cplx D_a, D_m, D_c;
    cplx D;   // cavity response dressed by the magnon: 1/D = 1/D_a + J_am^2 D_m
    cplx S0;  // 1 - 4|eps_a|^2 D(w) D*(-w)
};

Susceptibilities susceptibilities(const SystemParams& params, double omega);

struct RatePair {
    double cooling;  // Gamma_-, from S_F(+omega)
    double heating;  // Gamma_+, from S_F(-omega)
    double net() const { return cooling - heating; }
};

/// Closed-form single-channel spectrum J_mc^2 gamma_m / ((w - Delta_m)^2 + (gamma_m/2)^2).
double mcm_psd(const SystemParams& params, double omega);
RatePair mcm_rates(const SystemParams& params, double omega = 1.0);

/// How the magnon bath occupation enters the force spectrum.
///  Separated: n_m + 1 and n_m on their own normal-ordered terms (default).
///  Lumped:    the whole magnon channel carries (2 n_m + 1) |T^m|^2.
enum class ThermalWeighting { Separated, Lumped };

/// Frequency-domain linear response of the force F = -[J_ac (da + da+) + J_mc (dm + dm+)]
/// on the CM mode, with the CM mode itself excluded. Construction validates the
/// parameters and refuses an unstable 4x4 drift.
class ForceSpectrum {
public:
    explicit ForceSpectrum(const SystemParams& params, ThermalWeighting weighting = ThermalWeighting::Separated);

    /// S_F(omega), real.
    double operator()(double omega) const;

    /// c(omega) with F(omega) = sum_k c_k(omega) xi_k(omega) over (a_in, a_in+, m_in, m_in+).
    Eigen::Vector4cd force_coefficients(double omega) const;

    const DriftModel& model() const { return model_; }
    const SystemParams& params() const { return params_; }
    const StabilityReport& stability_report() const { return stability_; }

private:
    SystemParams params_;
    ThermalWeighting weighting_;
    DriftModel model_;
    StabilityReport stability_;
};

/// General-engine spectrum at one frequency.
double psd_general(const SystemParams& params, double omega,
                   ThermalWeighting weighting = ThermalWeighting::Separated);

/// Mechanism-dispatched spectrum: closed form for MCM, general engine for CMI.
double psd(const SystemParams& params, double omega);

struct SpectrumResult {
    std::vector<double> frequencies;
    std::vector<double> values;
    Mechanism mechanism = Mechanism::CMI;
    std::uint64_t parameter_hash = 0;
};

/// Uniform grid, endpoints included. `threads` = 0 picks the hardware count.
SpectrumResult psd_grid(const SystemParams& params, double omega_min, double omega_max, int n_points,
                        int threads = 0);

/// Scattering amplitudes of the cavity dissipation channel in closed form.
/// The magnon-path amplitudes need coefficients that are not given in closed
/// form; they are flagged unavailable and `channel_amplitudes` supplies the
/// engine's equivalent.
struct ScatteringAmplitudes {
    cplx T_a_SFa;
    cplx T_m_SFa;
    bool T_a_SFm_available = false;
    bool T_m_SFm_available = false;
};

/// Evaluated at the signed frequency `omega` (pass -w for the Stokes side).
ScatteringAmplitudes cmi_amplitudes(const SystemParams& params, double omega);

/// Vacuum-referenced amplitude of each dissipation channel in the engine,
/// normalized so that the channel's contribution to S_F is gamma |T|^2
/// (times the thermal factors for the magnon channel).
struct ChannelAmplitudes {
    cplx cavity;  // squeezed cavity channel, cosh/sinh-combined
    cplx magnon;  // coefficient of m_in
};

ChannelAmplitudes channel_amplitudes(const SystemParams& params, double omega);

struct PathDecomposition {
    cplx ccm;       // J_mc = 0
    cplx mcm;       // J_ac = 0
    cplx combined;  // both couplings on; equals ccm + mcm by linearity
    double magnitude_ratio;   // |mcm| / |ccm|
    double phase_difference;  // arg(mcm) - arg(ccm), wrapped to [0, 2 pi)
};

struct InterferenceDiagnostic {
    double omega;
    PathDecomposition cavity;
    PathDecomposition magnon;
};

InterferenceDiagnostic interference_diagnostic(const SystemParams& params, double omega);

}  // namespace magcool
