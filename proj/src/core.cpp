#include "optocorr/core.hpp"

#include <cmath>
#include <string>

#include "optocorr/errors.hpp"

namespace optocorr {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double SystemParams::normalized_phi() const {
    double r = std::fmod(phi, units::kTwoPi);
    if (r < 0.0) r += units::kTwoPi;
    // fmod of a value just below -2pi*k can round up to exactly 2pi
    if (r >= units::kTwoPi) r = 0.0;
    return r;
}

void validate(const SystemParams& p) {
    const std::pair<const char*, double> all[] = {
        {"omega_m", p.omega_m},       {"gamma_m", p.gamma_m},
        {"f", p.f},                   {"kappa1", p.kappa1},
        {"kappa2", p.kappa2},         {"delta1_eff", p.delta1_eff},
        {"delta2_eff", p.delta2_eff}, {"delta_at", p.delta_at},
        {"g1_eff", p.g1_eff},         {"g2_eff", p.g2_eff},
        {"j_ac_mag", p.j_ac_mag},     {"phi", p.phi},
        {"j_ab", p.j_ab},             {"temperature", p.temperature},
    };
    for (const auto& [name, value] : all) {
        require(finite(value), std::string(name) + " must be finite");
    }
    require(p.omega_m > 0.0, "omega_m must be > 0");
    require(p.gamma_m > 0.0, "gamma_m must be > 0");
    require(p.f > 0.0, "f must be > 0");
    require(p.kappa1 > 0.0, "kappa1 must be > 0");
    require(p.kappa2 > 0.0, "kappa2 must be > 0");
    require(p.g1_eff >= 0.0, "g1_eff must be >= 0");
    require(p.g2_eff >= 0.0, "g2_eff must be >= 0");
    require(p.j_ac_mag >= 0.0, "j_ac_mag must be >= 0");
    require(p.j_ab >= 0.0, "j_ab must be >= 0");
    require(p.temperature >= 0.0, "temperature must be >= 0");
}

SystemParams make_system_params(const SystemParams& p) {
    validate(p);
    return p;
}

SystemParams reference_params() {
    using units::from_hz;
    using units::from_mhz;
    SystemParams p;
    p.omega_m = from_mhz(24.0);
    p.gamma_m = from_hz(100.0);
    p.f = from_mhz(1.0);
    p.kappa1 = 2.0 * p.f;
    p.kappa2 = p.kappa1;
    p.delta1_eff = p.omega_m;
    p.delta2_eff = p.omega_m;
    p.delta_at = -p.omega_m;
    p.g1_eff = from_mhz(2.0);
    p.g2_eff = from_mhz(4.0);
    p.j_ac_mag = from_mhz(12.0);
    p.phi = std::numbers::pi / 2.0;
    p.j_ab = from_mhz(1.0);
    p.temperature = 10.0e-3;
    return p;
}

void validate(const RawDriveParams& raw) {
    require(finite(raw.g1) && raw.g1 >= 0.0, "g1 must be finite and >= 0");
    require(finite(raw.g2) && raw.g2 >= 0.0, "g2 must be finite and >= 0");
    require(finite(raw.drive_e1.real()) && finite(raw.drive_e1.imag()),
            "drive_e1 must be finite");
    require(finite(raw.drive_e2.real()) && finite(raw.drive_e2.imag()),
            "drive_e2 must be finite");
    require(finite(raw.delta1_bare), "delta1_bare must be finite");
    require(finite(raw.delta2_bare), "delta2_bare must be finite");
    if (raw.power1) require(*raw.power1 >= 0.0, "power1 must be >= 0");
    if (raw.power2) require(*raw.power2 >= 0.0, "power2 must be >= 0");
    if (raw.power1 || raw.power2) {
        require(raw.omega_l && *raw.omega_l > 0.0,
                "omega_l must be given and > 0 when a drive power is set");
    }
}

double thermal_occupation(double omega_m, double temperature) {
    if (temperature <= 0.0) return 0.0;
    const double x = units::kHbar * units::to_si(omega_m) /
                     (units::kBoltzmann * temperature);
    return 1.0 / std::expm1(x);
}

double drive_amplitude(double power, double kappa, double omega_l) {
    require(power >= 0.0, "drive power must be >= 0");
    require(kappa > 0.0, "kappa must be > 0");
    require(omega_l > 0.0, "omega_l must be > 0");
    const double e_si = std::sqrt(2.0 * power * units::to_si(kappa) /
                                  (units::kHbar * units::to_si(omega_l)));
    return units::from_si(e_si);
}

}  // namespace optocorr
