#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "optocorr/core.hpp"
#include "optocorr/errors.hpp"

using namespace optocorr;

TEST_CASE("thermal occupation limits and reference point") {
    const double omega_m = units::from_mhz(24.0);
    CHECK(thermal_occupation(omega_m, 0.0) == 0.0);

    // hbar omega / k_B T = ln 2 -> n = 1
    const double t_ln2 =
        units::kHbar * units::to_si(omega_m) / (units::kBoltzmann * std::numbers::ln2);
    CHECK(thermal_occupation(omega_m, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));

    // 30-digit evaluation of the Bose-Einstein formula with CODATA constants.
    CHECK(thermal_occupation(omega_m, 10e-3) ==
          doctest::Approx(8.19152100448840517630).epsilon(1e-12));
}

TEST_CASE("thermal occupation is increasing in T and decreasing in omega") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> freq(1.0, 100.0);  // MHz
    std::uniform_real_distribution<double> temp(1e-4, 10.0);  // K
    for (int k = 0; k < 200; ++k) {
        const double w = units::from_mhz(freq(rng));
        const double t = temp(rng);
        CHECK(thermal_occupation(w, t * 1.01) > thermal_occupation(w, t));
        CHECK(thermal_occupation(w * 1.01, t) < thermal_occupation(w, t));
    }
}

TEST_CASE("drive amplitude") {
    const double kappa = units::from_mhz(2.0);
    const double omega_l = units::from_mhz(300e6);  // 300 THz
    CHECK(drive_amplitude(0.0, kappa, omega_l) == 0.0);
    const double e = drive_amplitude(1e-3, kappa, omega_l);
    CHECK(drive_amplitude(2e-3, kappa, omega_l) == doctest::Approx(std::sqrt(2.0) * e).epsilon(1e-14));
    // independent 30-digit evaluation, in 1/us
    CHECK(e == doctest::Approx(355575.056648192765).epsilon(1e-12));

    CHECK_THROWS_AS(drive_amplitude(-1.0, kappa, omega_l), ParameterError);
    CHECK_THROWS_AS(drive_amplitude(1e-3, 0.0, omega_l), ParameterError);
    CHECK_THROWS_AS(drive_amplitude(1e-3, kappa, -1.0), ParameterError);
}

TEST_CASE("frequency conversion round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_nu(-3.0, 9.0);
    for (int k = 0; k < 1000; ++k) {
        const double nu = std::pow(10.0, log_nu(rng));
        CHECK(std::abs(units::to_mhz(units::from_mhz(nu)) - nu) <= 1e-12 * nu);
        CHECK(std::abs(units::to_hz(units::from_hz(nu)) - nu) <= 1e-12 * nu);
    }
    CHECK(units::from_mhz(24.0) == doctest::Approx(150.79644737231007));
}

TEST_CASE("parameter validation") {
    const SystemParams ok = reference_params();
    CHECK_NOTHROW(validate(ok));
    CHECK(make_system_params(ok) == ok);

    auto rejects = [&](auto mutate, const char* field) {
        SystemParams p = ok;
        mutate(p);
        try {
            validate(p);
            FAIL("accepted invalid ", field);
        } catch (const ParameterError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    rejects([](SystemParams& p) { p.omega_m = 0.0; }, "omega_m");
    rejects([](SystemParams& p) { p.gamma_m = -1.0; }, "gamma_m");
    rejects([](SystemParams& p) { p.f = 0.0; }, "f must");
    rejects([](SystemParams& p) { p.kappa1 = 0.0; }, "kappa1");
    rejects([](SystemParams& p) { p.kappa2 = -2.0; }, "kappa2");
    rejects([](SystemParams& p) { p.g1_eff = -1.0; }, "g1_eff");
    rejects([](SystemParams& p) { p.g2_eff = -1.0; }, "g2_eff");
    rejects([](SystemParams& p) { p.j_ac_mag = -1.0; }, "j_ac_mag");
    rejects([](SystemParams& p) { p.j_ab = -1.0; }, "j_ab");
    rejects([](SystemParams& p) { p.temperature = -1e-3; }, "temperature");
    rejects([](SystemParams& p) { p.phi = std::nan(""); }, "phi");

    SystemParams detuned = ok;
    detuned.delta_at = -5.0 * ok.omega_m;  // detunings may have any sign
    CHECK_NOTHROW(validate(detuned));

    RawDriveParams raw;
    raw.g1 = -1.0;
    CHECK_THROWS_AS(validate(raw), ParameterError);
    raw.g1 = 1.0;
    raw.power1 = 1e-3;
    CHECK_THROWS_AS(validate(raw), ParameterError);  // no laser frequency
    raw.omega_l = 1.0;
    CHECK_NOTHROW(validate(raw));
}

TEST_CASE("phi normalization keeps the stored value") {
    SystemParams p = reference_params();
    p.phi = -std::numbers::pi / 2.0;
    CHECK(p.phi == -std::numbers::pi / 2.0);
    CHECK(p.normalized_phi() == doctest::Approx(1.5 * std::numbers::pi));
    p.phi = 5.0 * std::numbers::pi;
    CHECK(p.normalized_phi() == doctest::Approx(std::numbers::pi));
    p.phi = 0.0;
    CHECK(p.normalized_phi() == 0.0);
    for (double phi : {-1e-17, -4.0 * std::numbers::pi, 2.0 * std::numbers::pi}) {
        p.phi = phi;
        CHECK(p.normalized_phi() >= 0.0);
        CHECK(p.normalized_phi() < 2.0 * std::numbers::pi);
    }
}

TEST_CASE("reference point values") {
    const SystemParams p = reference_params();
    CHECK(units::to_mhz(p.omega_m) == doctest::Approx(24.0));
    CHECK(units::to_hz(p.gamma_m) == doctest::Approx(100.0));
    CHECK(units::to_mhz(p.kappa1) == doctest::Approx(2.0));
    CHECK(p.kappa2 == p.kappa1);
    CHECK(p.delta1_eff == p.omega_m);
    CHECK(p.delta_at == -p.omega_m);
    CHECK(units::to_mhz(p.g2_eff) == doctest::Approx(4.0));
    CHECK(units::to_mhz(p.j_ac_mag) == doctest::Approx(12.0));
    CHECK(p.temperature == 0.01);
}
