#pragma once

#include <array>
#include <optional>

#include "optocorr/lyapunov.hpp"
#include "optocorr/measures.hpp"

namespace optocorr {

/// Everything derived from the covariance matrix at a stable point.
struct PointMeasures {
    CovarianceMatrix cov;
    std::array<double, 3> e_n{};  // kCanonicalPairs order
    std::array<double, 3> d_g{};
    ResidualContangle r_tau;
    double uncertainty_min_eig = 0.0;
};

struct CorrelationReport {
    SystemParams params;
    double n_th = 0.0;
    StabilityVerdict stability;
    std::optional<PointMeasures> measures;  // empty at unstable points
};

/// Full pipeline for one parameter point: n_th, drift, diffusion,
/// stability, Lyapunov solve and all measures. Unstable points yield a
/// report without measures; numeric failures propagate as exceptions.
CorrelationReport analyze(const SystemParams& p);

/// Measures of an already solved covariance matrix.
PointMeasures measure_covariance(const CovarianceMatrix& cov);

}  // namespace optocorr
