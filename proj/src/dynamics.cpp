#include "optocorr/dynamics.hpp"

#include <cmath>
#include <string>

#include "optocorr/errors.hpp"

namespace optocorr {

std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::c1: return "c1";
        case Mode::c2: return "c2";
        case Mode::a: return "a";
        case Mode::b: return "b";
    }
    return "?";
}

Mode parse_mode(std::string_view name) {
    for (Mode m : kAllModes) {
        if (mode_name(m) == name) return m;
    }
    throw ConfigError("unknown mode '" + std::string(name) + "'");
}

DriftMatrix build_drift(const SystemParams& p) {
    const int x1 = block_offset(Mode::c1), y1 = x1 + 1;
    const int x2 = block_offset(Mode::c2), y2 = x2 + 1;
    const int qa = block_offset(Mode::a), pa = qa + 1;
    const int q = block_offset(Mode::b), pm = q + 1;

    const double js = p.j_ac_mag * std::sin(p.phi);
    const double jc = p.j_ac_mag * std::cos(p.phi);

    Mat8 a = Mat8::Zero();
    // cavity 1
    a(x1, x1) = -p.kappa1;
    a(x1, y1) = p.delta1_eff;
    a(x1, qa) = js;
    a(x1, pa) = jc;
    a(y1, x1) = -p.delta1_eff;
    a(y1, y1) = -p.kappa1;
    a(y1, qa) = -jc;
    a(y1, pa) = js;
    a(y1, q) = -2.0 * p.g1_eff;
    // cavity 2
    a(x2, x2) = -p.kappa2;
    a(x2, y2) = p.delta2_eff;
    a(y2, x2) = -p.delta2_eff;
    a(y2, y2) = -p.kappa2;
    a(y2, q) = -2.0 * p.g2_eff;
    // atomic ensemble
    a(qa, x1) = -js;
    a(qa, y1) = jc;
    a(qa, qa) = -p.f;
    a(qa, pa) = p.delta_at;
    a(pa, x1) = -jc;
    a(pa, y1) = -js;
    a(pa, qa) = -p.delta_at;
    a(pa, pa) = -p.f;
    a(pa, q) = -2.0 * p.j_ab;
    // mechanics
    a(q, q) = -p.gamma_m;
    a(q, pm) = p.omega_m;
    a(pm, x1) = -2.0 * p.g1_eff;
    a(pm, x2) = -2.0 * p.g2_eff;
    a(pm, qa) = -2.0 * p.j_ab;
    a(pm, q) = -p.omega_m;
    a(pm, pm) = -p.gamma_m;
    return {a};
}

DiffusionMatrix build_diffusion(const SystemParams& p, double n_th) {
    if (!(n_th >= 0.0)) throw ParameterError("n_th must be >= 0");
    const double mech = p.gamma_m * (2.0 * n_th + 1.0);
    Eigen::Matrix<double, 8, 1> diag;
    diag << p.kappa1, p.kappa1, p.kappa2, p.kappa2, p.f, p.f, mech, mech;
    return {diag.asDiagonal()};
}

double default_margin(const SystemParams& p) { return 1e-9 * p.omega_m; }

StabilityVerdict assess_stability(const DriftMatrix& a, double margin_tol) {
    if (!a.m.allFinite()) throw NumericError("drift matrix has non-finite entries");
    Eigen::EigenSolver<Mat8> solver(a.m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration failed for the drift matrix");
    }
    StabilityVerdict v;
    v.max_real_part = solver.eigenvalues().real().maxCoeff();
    v.spectral_margin = -v.max_real_part;
    v.stable = v.max_real_part < -margin_tol;
    return v;
}

}  // namespace optocorr
