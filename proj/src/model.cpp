#include "magcool/model.hpp"

#include <cmath>
#include <sstream>

#include "magcool/errors.hpp"

namespace magcool {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be positive and finite, got " << v;
        throw DomainError(os.str());
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be nonnegative and finite, got " << v;
        throw DomainError(os.str());
    }
}

}  // namespace

void PhysicalConstants::validate() const {
    require_positive(gyromagnetic_ratio, "gyromagnetic_ratio");
    require_positive(vacuum_permeability, "vacuum_permeability");
    require_positive(spin_density, "spin_density");
    require_positive(ground_spin, "ground_spin");
    require_positive(mass_density, "mass_density");
    require_positive(reduced_planck, "reduced_planck");
    require_positive(boltzmann, "boltzmann");
}

void DeviceGeometry::validate() const {
    require_positive(sphere_diameter, "sphere_diameter");
    require_positive(cavity_mode_volume, "cavity_mode_volume");
    require_positive(trap_frequency, "trap_frequency");
    require_nonnegative(wave_number, "wave_number");
    require_nonnegative(bias_field, "bias_field");
    require_nonnegative(drive_field, "drive_field");
    if (!std::isfinite(equilibrium_position)) throw DomainError("equilibrium_position must be finite");
}

std::vector<std::string> DeviceGeometry::warnings() const {
    std::vector<std::string> out;
    if (sphere_diameter * wave_number >= 0.1) {
        std::ostringstream os;
        os << "sphere_diameter * wave_number = " << sphere_diameter * wave_number
           << " >= 0.1; the uniform Kittel-mode approximation is questionable";
        out.push_back(os.str());
    }
    return out;
}

double DeviceGeometry::sphere_volume() const {
    return std::numbers::pi * sphere_diameter * sphere_diameter * sphere_diameter / 6.0;
}

MicroscopicCouplings derive_couplings(const PhysicalConstants& c, const DeviceGeometry& geom,
                                      double omega_a) {
    c.validate();
    geom.validate();
    require_positive(omega_a, "omega_a");

    const double volume = geom.sphere_volume();
    const double x_zpm = std::sqrt(c.reduced_planck / (2.0 * c.mass_density * volume * geom.trap_frequency));
    const double g_am = 0.5 * c.gyromagnetic_ratio *
                        std::sqrt(c.reduced_planck * omega_a * c.vacuum_permeability / geom.cavity_mode_volume) *
                        std::sqrt(2.0 * c.spin_density * volume * c.ground_spin);
    return {g_am, g_am * geom.wave_number * x_zpm, x_zpm};
}

DriveAmplitudes drive_amplitudes(const PhysicalConstants& c, const DeviceGeometry& geom, double gamma_a,
                                 double omega_d) {
    c.validate();
    geom.validate();
    require_nonnegative(geom.drive_power, "drive_power");
    require_nonnegative(geom.drive_field, "drive_field");
    require_positive(gamma_a, "gamma_a");
    require_positive(omega_d, "omega_d");

    const double cavity = std::sqrt(2.0 * gamma_a * geom.drive_power / (c.reduced_planck * omega_d));
    const double spins = c.spin_density * geom.sphere_volume();
    const double magnon = c.gyromagnetic_ratio * std::sqrt(1.25 * spins) * geom.drive_field;
    return {cavity, magnon};
}

double thermal_occupancy(double omega, double temperature, const PhysicalConstants& c) {
    require_positive(omega, "omega");
    require_nonnegative(temperature, "temperature");
    if (temperature == 0.0) return 0.0;
    const double x = c.reduced_planck * omega / (c.boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

std::string_view to_string(Mechanism m) { return m == Mechanism::MCM ? "MCM" : "CMI"; }

Mechanism parse_mechanism(std::string_view s) {
    if (s == "MCM" || s == "mcm") return Mechanism::MCM;
    if (s == "CMI" || s == "cmi") return Mechanism::CMI;
    throw ConfigError("mechanism must be MCM or CMI, got '" + std::string(s) + "'");
}

void SystemParams::validate() const {
    require_positive(omega_c, "omega_c");
    require_positive(gamma_a, "gamma_a");
    require_positive(gamma_m, "gamma_m");
    require_positive(gamma_c, "gamma_c");
    require_nonnegative(nbar_m, "nbar_m");
    require_nonnegative(nbar_c, "nbar_c");
    require_nonnegative(J_ac, "J_ac");
    require_nonnegative(J_mc, "J_mc");
    require_nonnegative(J_am, "J_am");
    require_nonnegative(r_s, "r_s");
    if (!std::isfinite(delta_a)) throw DomainError("delta_a must be finite");
    if (!std::isfinite(delta_m)) throw DomainError("delta_m must be finite");
    if (!std::isfinite(eps_a.real()) || !std::isfinite(eps_a.imag())) throw DomainError("eps_a must be finite");
    if (!std::isfinite(phi_s)) throw DomainError("phi_s must be finite");
}

SystemParams SystemParams::fluctuation_view() const {
    SystemParams p = *this;
    if (mechanism == Mechanism::MCM) {
        p.J_ac = 0.0;
        p.J_am = 0.0;
    }
    return p;
}

cplx SystemParams::squeezing_from_polar(double lambda, double theta) {
    return cplx(0.0, 1.0) * lambda * std::polar(1.0, theta) / 2.0;
}

double SystemParams::squeezed_photons() const {
    const double s = std::sinh(r_s);
    return s * s;
}

double SystemParams::squeezed_correlation() const {
    const double n = squeezed_photons();
    return std::sqrt(n * (n + 1.0));
}

double SystemParams::parametric_threshold() const { return std::abs(cplx(gamma_a / 2.0, delta_a)) / 2.0; }

bool operator==(const SystemParams& a, const SystemParams& b) {
    return a.omega_c == b.omega_c && a.delta_a == b.delta_a && a.delta_m == b.delta_m && a.gamma_a == b.gamma_a &&
           a.gamma_m == b.gamma_m && a.gamma_c == b.gamma_c && a.nbar_m == b.nbar_m && a.nbar_c == b.nbar_c &&
           a.J_ac == b.J_ac && a.J_mc == b.J_mc && a.J_am == b.J_am && a.eps_a == b.eps_a && a.r_s == b.r_s &&
           a.phi_s == b.phi_s && a.mechanism == b.mechanism;
}

}  // namespace magcool
