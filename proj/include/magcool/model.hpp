#pragma once

// Physical constants, device geometry, and the normalized parameter set shared
// by every solver. Inside the library every rate, detuning and coupling is
// measured in units of the CM trap frequency omega_c; SI quantities only appear
// in this header, at the boundary.

#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace magcool {

using cplx = std::complex<double>;

struct PhysicalConstants {
    double gyromagnetic_ratio = 2.0 * std::numbers::pi * 28.0e9;  // rad s^-1 T^-1
    double vacuum_permeability = 1.25663706212e-6;                 // N A^-2
    double spin_density = 4.22e27;                                 // m^-3
    double ground_spin = 2.5;
    double mass_density = 5170.0;                                  // kg m^-3
    double reduced_planck = 1.054571817e-34;                       // J s
    double boltzmann = 1.380649e-23;                               // J K^-1

    void validate() const;
};

struct DeviceGeometry {
    double sphere_diameter = 250e-6;      // m
    double cavity_mode_volume = 1e-7;     // m^3
    double wave_number = 100.0;           // m^-1
    double equilibrium_position = 0.0;    // m
    double trap_frequency = 2.0 * std::numbers::pi * 50e3;  // rad/s
    double bias_field = 0.0;              // T, sets omega_m = gamma * B0
    double drive_power = 0.0;             // W, cavity drive
    double drive_field = 0.0;             // T, amplitude of the direct magnon drive

    /// Throws DomainError on non-positive d, V_a or omega_c, or negative k.
    void validate() const;
    /// Soft violations (d*k >= 0.1 breaks the single Kittel-mode picture).
    std::vector<std::string> warnings() const;
    double sphere_volume() const;
};

struct MicroscopicCouplings {
    double g_am;   // rad/s
    double g_amc;  // rad/s
    double x_zpm;  // m
};

MicroscopicCouplings derive_couplings(const PhysicalConstants& constants, const DeviceGeometry& geom,
                                      double omega_a);

struct DriveAmplitudes {
    double cavity;  // |Omega_a|, rad/s
    double magnon;  // |eps_m|, rad/s
};

/// Drive amplitudes with zero phase. `gamma_a` and `omega_d` in rad/s.
DriveAmplitudes drive_amplitudes(const PhysicalConstants& constants, const DeviceGeometry& geom,
                                 double gamma_a, double omega_d);

/// Bose-Einstein occupancy 1/(exp(hbar*omega/kB*T) - 1). T = 0 gives 0.
double thermal_occupancy(double omega, double temperature, const PhysicalConstants& constants = {});

enum class Mechanism { MCM, CMI };

std::string_view to_string(Mechanism m);
Mechanism parse_mechanism(std::string_view s);

/// Normalized parameters of one run. All rates/detunings/couplings in units of omega_c.
struct SystemParams {
    double omega_c = 2.0 * std::numbers::pi * 50e3;  // rad/s, the unit of everything below
    double delta_a = 1.0;
    double delta_m = 1.0;
    double gamma_a = 8.0 / 3.0;
    double gamma_m = 2.0;
    double gamma_c = 1e-7;
    double nbar_m = 0.0;
    double nbar_c = 0.0;
    double J_ac = 0.0;
    double J_mc = 0.0;
    double J_am = 0.0;
    cplx eps_a{0.0, 0.0};
    double r_s = 0.0;
    double phi_s = 0.0;  // radians
    Mechanism mechanism = Mechanism::CMI;

    void validate() const;

    double quality_factor() const { return 1.0 / gamma_c; }
    void set_quality_factor(double q) { gamma_c = 1.0 / q; }

    /// Parameters as seen by the fluctuation dynamics: MCM drops J_ac and J_am.
    SystemParams fluctuation_view() const;

    /// eps_a = i * Lambda * exp(i theta) / 2.
    static cplx squeezing_from_polar(double lambda, double theta);

    /// n_s = sinh^2 r_s and m_s = sqrt(n_s (n_s + 1)).
    double squeezed_photons() const;
    double squeezed_correlation() const;

    /// |gamma_a/2 + i Delta_a| / 2, the |eps_a| at which the cavity alone goes unstable.
    double parametric_threshold() const;
};

bool operator==(const SystemParams& a, const SystemParams& b);

}  // namespace magcool
