#pragma once

#include <complex>
#include <numbers>
#include <optional>

namespace optocorr {

// Internal frequency unit is rad/us: omega_m/2pi = 24 MHz becomes ~150.8.
// Temperatures are in kelvin, powers in watt.
namespace units {

inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J / K
inline constexpr double kSpeedOfLight = 299792458.0; // m / s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// rad/us <-> rad/s
inline constexpr double kPerMicrosecond = 1.0e6;

/// nu [MHz] (the "omega/2pi" convention) -> angular frequency [rad/us].
constexpr double from_mhz(double nu_mhz) { return kTwoPi * nu_mhz; }
constexpr double to_mhz(double omega) { return omega / kTwoPi; }

constexpr double from_hz(double nu_hz) { return kTwoPi * nu_hz * 1.0e-6; }
constexpr double to_hz(double omega) { return omega / kTwoPi * 1.0e6; }

/// rad/us -> rad/s
constexpr double to_si(double omega) { return omega * kPerMicrosecond; }
constexpr double from_si(double omega_si) { return omega_si / kPerMicrosecond; }

}  // namespace units

/// Parameters of the linearized model, in rad/us (temperature in K).
/// The effective detunings and couplings are the dressed quantities that
/// enter the drift matrix directly.
struct SystemParams {
    double omega_m = 0.0;
    double gamma_m = 0.0;
    double f = 0.0;  // atomic ensemble decay rate
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double delta1_eff = 0.0;
    double delta2_eff = 0.0;
    double delta_at = 0.0;
    double g1_eff = 0.0;
    double g2_eff = 0.0;
    double j_ac_mag = 0.0;
    double phi = 0.0;  // stored as given
    double j_ab = 0.0;
    double temperature = 0.0;

    /// phi reduced to [0, 2pi).
    double normalized_phi() const;

    bool operator==(const SystemParams&) const = default;
};

/// Throws ParameterError naming the first violated constraint.
void validate(const SystemParams& p);

/// Validating constructor: returns p unchanged or throws ParameterError.
SystemParams make_system_params(const SystemParams& p);

/// The reference operating point used throughout the results section:
/// omega_m/2pi = 24 MHz, gamma_m/2pi = 100 Hz, f/2pi = 1 MHz,
/// kappa_1 = kappa_2 = 2f, T = 10 mK, phi = pi/2, G_1/2pi = 2 MHz,
/// G_2/2pi = 4 MHz, |J_ac|/2pi = 12 MHz, J_ab/2pi = 1 MHz,
/// Delta'_1 = Delta'_2 = omega_m, Delta_at = -omega_m.
SystemParams reference_params();

/// Bare drive-side parameters used by the mean-field solver.
struct RawDriveParams {
    double g1 = 0.0;  // single-photon optomechanical couplings, rad/us
    double g2 = 0.0;
    std::complex<double> drive_e1{};  // rad/us
    std::complex<double> drive_e2{};
    double delta1_bare = 0.0;
    double delta2_bare = 0.0;
    std::optional<double> power1;  // W
    std::optional<double> power2;
    std::optional<double> omega_l;  // laser angular frequency, rad/us
};

void validate(const RawDriveParams& raw);

/// Bose-Einstein occupation of the mechanical bath. omega_m in rad/us,
/// temperature in K. Exactly 0 at T = 0.
double thermal_occupation(double omega_m, double temperature);

/// E = sqrt(2 P kappa / (hbar omega_l)). kappa and omega_l in rad/us,
/// power in W, result in rad/us. Throws ParameterError for power < 0 or
/// non-positive kappa / omega_l.
double drive_amplitude(double power, double kappa, double omega_l);

}  // namespace optocorr
