#include "optocorr/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optocorr/errors.hpp"

namespace optocorr {

namespace {

constexpr cplx kI{0.0, 1.0};

double max_diff(const SteadyState& a, const SteadyState& b) {
    return std::max({std::abs(a.alpha1 - b.alpha1), std::abs(a.alpha2 - b.alpha2),
                     std::abs(a.xi - b.xi), std::abs(a.beta - b.beta)});
}

SteadyState blend(const SteadyState& x, const SteadyState& fx, double lambda) {
    SteadyState out;
    out.alpha1 = (1.0 - lambda) * x.alpha1 + lambda * fx.alpha1;
    out.alpha2 = (1.0 - lambda) * x.alpha2 + lambda * fx.alpha2;
    out.xi = (1.0 - lambda) * x.xi + lambda * fx.xi;
    out.beta = (1.0 - lambda) * x.beta + lambda * fx.beta;
    return out;
}

}  // namespace

std::pair<cplx, cplx> resolved_drives(const RawDriveParams& raw,
                                      const SystemParams& fixed) {
    cplx e1 = raw.drive_e1;
    cplx e2 = raw.drive_e2;
    if (raw.power1) e1 = drive_amplitude(*raw.power1, fixed.kappa1, *raw.omega_l);
    if (raw.power2) e2 = drive_amplitude(*raw.power2, fixed.kappa2, *raw.omega_l);
    return {e1, e2};
}

SteadyState mean_field_map(const SteadyState& x, const RawDriveParams& raw,
                           const SystemParams& fixed) {
    const auto [e1, e2] = resolved_drives(raw, fixed);
    const cplx j_ac = std::polar(fixed.j_ac_mag, fixed.phi);
    const double re_beta = x.beta.real();
    const double d1 = raw.delta1_bare + 2.0 * raw.g1 * re_beta;
    const double d2 = raw.delta2_bare + 2.0 * raw.g2 * re_beta;

    SteadyState out;
    out.alpha1 = (e1 - kI * j_ac * x.xi) / (kI * d1 + fixed.kappa1);
    out.alpha2 = e2 / (kI * d2 + fixed.kappa2);
    out.xi = -(kI * std::conj(j_ac) * x.alpha1 + 2.0 * kI * fixed.j_ab * re_beta) /
             (kI * fixed.delta_at + fixed.f);
    out.beta = -(kI * raw.g1 * std::norm(x.alpha1) + kI * raw.g2 * std::norm(x.alpha2) +
                 2.0 * kI * fixed.j_ab * x.xi.real()) /
               (kI * fixed.omega_m + fixed.gamma_m);
    return out;
}

double mean_field_residual(const SteadyState& x, const RawDriveParams& raw,
                           const SystemParams& fixed) {
    return max_diff(x, mean_field_map(x, raw, fixed));
}

SteadyState solve_steady_state(const RawDriveParams& raw, const SystemParams& fixed,
                               const SteadyStateOptions& opts) {
    validate(raw);
    for (double rate : {fixed.omega_m, fixed.gamma_m, fixed.f, fixed.kappa1, fixed.kappa2}) {
        if (!(rate > 0.0)) throw ParameterError("decay rates and omega_m must be > 0");
    }
    const auto [e1, e2] = resolved_drives(raw, fixed);
    const double target =
        opts.tolerance * std::max({1.0, std::abs(e1), std::abs(e2)});

    SteadyState x;
    x.alpha1 = e1 / (cplx{fixed.kappa1, raw.delta1_bare});
    x.alpha2 = e2 / (cplx{fixed.kappa2, raw.delta2_bare});

    double lambda = opts.damping;
    SteadyState fx = mean_field_map(x, raw, fixed);
    double residual = max_diff(x, fx);
    int iter = 0;
    while (residual > target) {
        if (iter >= opts.max_iter) {
            std::ostringstream msg;
            msg << "steady state did not converge after " << iter
                << " iterations (residual " << residual << ")";
            throw NonConvergence(msg.str(), residual, iter);
        }
        SteadyState next = blend(x, fx, lambda);
        SteadyState fnext = mean_field_map(next, raw, fixed);
        const double r_next = max_diff(next, fnext);
        if (!std::isfinite(r_next)) {
            throw NonConvergence("steady state iteration diverged", residual, iter);
        }
        if (r_next > residual && lambda > opts.fallback_damping) {
            lambda = opts.fallback_damping;
        }
        x = next;
        fx = fnext;
        residual = r_next;
        ++iter;
    }

    const EffectiveParams eff = effective_params(x, raw);
    x.delta1_eff = eff.delta1_eff;
    x.delta2_eff = eff.delta2_eff;
    x.g1_eff = eff.g1_eff;
    x.g2_eff = eff.g2_eff;
    x.residual_norm = residual;
    x.iterations = iter;
    return x;
}

EffectiveParams effective_params(const SteadyState& ss, const RawDriveParams& raw) {
    EffectiveParams eff;
    eff.delta1_eff = raw.delta1_bare + 2.0 * raw.g1 * ss.beta.real();
    eff.delta2_eff = raw.delta2_bare + 2.0 * raw.g2 * ss.beta.real();
    eff.g1_eff = raw.g1 * std::abs(ss.alpha1);
    eff.g2_eff = raw.g2 * std::abs(ss.alpha2);
    return eff;
}

SystemParams with_effective(const SystemParams& fixed, const SteadyState& ss) {
    SystemParams p = fixed;
    p.delta1_eff = ss.delta1_eff;
    p.delta2_eff = ss.delta2_eff;
    p.g1_eff = ss.g1_eff;
    p.g2_eff = ss.g2_eff;
    return p;
}

}  // namespace optocorr
