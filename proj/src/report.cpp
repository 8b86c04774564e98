#include "optocorr/report.hpp"

namespace optocorr {

PointMeasures measure_covariance(const CovarianceMatrix& cov) {
    PointMeasures m;
    m.cov = cov;
    for (std::size_t k = 0; k < kCanonicalPairs.size(); ++k) {
        const Mat4 v4 = extract_submatrix(cov.m, kCanonicalPairs[k]);
        m.e_n[k] = log_negativity(v4);
        m.d_g[k] = gaussian_discord(v4);
    }
    m.r_tau = residual_contangle_min(extract_submatrix(cov.m, ModeTriple{}));
    m.uncertainty_min_eig = uncertainty_min_eigenvalue(cov.m);
    return m;
}

CorrelationReport analyze(const SystemParams& p) {
    validate(p);
    CorrelationReport report;
    report.params = p;
    report.n_th = thermal_occupation(p.omega_m, p.temperature);
    const DriftMatrix a = build_drift(p);
    report.stability = assess_stability(a, default_margin(p));
    if (!report.stability.stable) return report;
    const DiffusionMatrix d = build_diffusion(p, report.n_th);
    report.measures = measure_covariance(solve_lyapunov(a, d, report.stability));
    return report;
}

}  // namespace optocorr
