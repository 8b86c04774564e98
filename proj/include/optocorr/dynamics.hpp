#pragma once

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "optocorr/core.hpp"

namespace optocorr {

using Mat8 = Eigen::Matrix<double, 8, 8>;

// Quadrature basis order: (x1, y1, x2, y2, q_at, p_at, q, p).
enum class Mode { c1 = 0, c2 = 1, a = 2, b = 3 };

inline constexpr std::array<Mode, 4> kAllModes = {Mode::c1, Mode::c2, Mode::a, Mode::b};

/// First row/column of the mode's 2x2 block: c1 -> 0, c2 -> 2, a -> 4, b -> 6.
constexpr int block_offset(Mode m) { return 2 * static_cast<int>(m); }

std::string_view mode_name(Mode m);

/// Parses "c1", "c2", "a", "b". Throws ConfigError otherwise.
Mode parse_mode(std::string_view name);

struct DriftMatrix {
    Mat8 m;
};

struct DiffusionMatrix {
    Mat8 m;
};

struct StabilityVerdict {
    bool stable = false;
    double max_real_part = 0.0;
    double spectral_margin = 0.0;  // -max_real_part
};

DriftMatrix build_drift(const SystemParams& p);

DiffusionMatrix build_diffusion(const SystemParams& p, double n_th);

/// Default margin used by the pipeline: 1e-9 * omega_m.
double default_margin(const SystemParams& p);

/// stable <=> max Re(eig A) < -margin_tol. Throws NumericError if the
/// eigenvalue iteration fails.
StabilityVerdict assess_stability(const DriftMatrix& a, double margin_tol);

}  // namespace optocorr
