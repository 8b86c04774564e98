#pragma once

#include <complex>

#include "optocorr/core.hpp"

namespace optocorr {

using cplx = std::complex<double>;

struct EffectiveParams {
    double delta1_eff = 0.0;
    double delta2_eff = 0.0;
    double g1_eff = 0.0;
    double g2_eff = 0.0;
};

/// Mean-field amplitudes of the two cavities, the atomic ensemble and
/// the mechanical mode, together with the dressed parameters they imply.
struct SteadyState {
    cplx alpha1{};
    cplx alpha2{};
    cplx xi{};
    cplx beta{};
    double delta1_eff = 0.0;
    double delta2_eff = 0.0;
    double g1_eff = 0.0;
    double g2_eff = 0.0;
    double residual_norm = 0.0;
    int iterations = 0;
};

struct SteadyStateOptions {
    int max_iter = 10000;
    double damping = 0.5;
    double fallback_damping = 0.1;
    // Absolute target is tolerance * max(1, |E_1|, |E_2|).
    double tolerance = 1e-10;
};

/// Drive amplitudes actually used: derived from the laser power when one
/// is given, otherwise drive_e1 / drive_e2 as stored.
std::pair<cplx, cplx> resolved_drives(const RawDriveParams& raw,
                                      const SystemParams& fixed);

/// Right-hand side of the mean-field fixed-point equations evaluated at
/// (alpha1, alpha2, xi, beta). Only the bare parameters of `fixed` are read
/// (the effective detunings/couplings are ignored).
SteadyState mean_field_map(const SteadyState& x, const RawDriveParams& raw,
                           const SystemParams& fixed);

/// max |x - F(x)| over the four amplitudes.
double mean_field_residual(const SteadyState& x, const RawDriveParams& raw,
                           const SystemParams& fixed);

/// Damped fixed-point iteration started from the decoupled solution.
/// Throws NonConvergence after max_iter iterations.
SteadyState solve_steady_state(const RawDriveParams& raw,
                               const SystemParams& fixed,
                               const SteadyStateOptions& opts = {});

/// Delta'_j = Delta_j + 2 g_j Re(beta),  G_j = g_j |alpha_j|.
EffectiveParams effective_params(const SteadyState& ss,
                                 const RawDriveParams& raw);

/// Copy of `fixed` with the effective detunings and couplings taken from ss.
SystemParams with_effective(const SystemParams& fixed, const SteadyState& ss);

}  // namespace optocorr
