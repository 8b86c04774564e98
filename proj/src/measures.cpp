#include "optocorr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "optocorr/errors.hpp"
#include "optocorr/lyapunov.hpp"

namespace optocorr {

namespace {

constexpr double kDiscriminantTol = 1e-12;
constexpr double kEntropyDomainTol = 1e-12;

// Clamp tiny negative round-off of a quantity that is non-negative in
// exact arithmetic; anything below -tol * scale is a domain error.
double clamp_nonnegative(double x, double scale, const char* what) {
    if (x >= 0.0) return x;
    if (x >= -kDiscriminantTol * std::max(1.0, scale)) return 0.0;
    std::ostringstream msg;
    msg << what << " is negative (" << x << "): covariance matrix is unphysical";
    throw DomainError(msg.str());
}

// Quantities that vanish in exact arithmetic for degenerate (e.g. pure) states
// are set to zero when within a few ulps of ulp_scale.
double round_off_to_zero(double x, double ulp_scale, double clamp_scale, const char* what) {
    if (std::abs(x) <= 64.0 * std::numeric_limits<double>::epsilon() * ulp_scale) return 0.0;
    return clamp_nonnegative(x, clamp_scale, what);
}

// Symplectic eigenvalues from sigma = nu_-^2 + nu_+^2 and det = nu_-^2 nu_+^2.
// A discriminant at round-off level relative to scale^2 is a degenerate pair;
// nu_-^2 comes from det / nu_+^2 to avoid cancellation.
SymplecticSpectrum symplectic_from_sigma(double sigma, double det_v, double scale) {
    const double disc = round_off_to_zero(sigma * sigma - 4.0 * det_v, scale * scale,
                                          sigma * sigma, "symplectic discriminant");
    const double plus2 = 0.5 * (sigma + std::sqrt(disc));
    if (!(plus2 > 0.0)) throw DomainError("covariance matrix is unphysical: sigma <= 0");
    const double minus2 = clamp_nonnegative(det_v, std::abs(sigma), "covariance determinant") / plus2;
    return {std::sqrt(minus2), std::sqrt(plus2)};
}

}  // namespace

std::string pair_label(ModePair pair) {
    return std::string(mode_name(pair.first)) + std::string(mode_name(pair.second));
}

std::string partition_label(const ModeTriple& triple, Partition part) {
    const int lone = static_cast<int>(part);
    std::string label = std::string(mode_name(triple.modes[lone])) + "|";
    for (int k = 0; k < 3; ++k) {
        if (k != lone) label += mode_name(triple.modes[k]);
    }
    return label;
}

Mat4 extract_submatrix(const Mat8& v, ModePair pair) {
    const std::array<int, 2> off = {block_offset(pair.first), block_offset(pair.second)};
    Mat4 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out.block<2, 2>(2 * r, 2 * c) = v.block<2, 2>(off[r], off[c]);
        }
    }
    return out;
}

Mat6 extract_submatrix(const Mat8& v, const ModeTriple& triple) {
    Mat6 out;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out.block<2, 2>(2 * r, 2 * c) =
                v.block<2, 2>(block_offset(triple.modes[r]), block_offset(triple.modes[c]));
        }
    }
    return out;
}

double det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

double det4(const Mat4& m) {
    // Laplace expansion along the first two rows.
    auto top = [&](int i, int j) { return m(0, i) * m(1, j) - m(0, j) * m(1, i); };
    auto bottom = [&](int i, int j) { return m(2, i) * m(3, j) - m(2, j) * m(3, i); };
    return top(0, 1) * bottom(2, 3) - top(0, 2) * bottom(1, 3) + top(0, 3) * bottom(1, 2) +
           top(1, 2) * bottom(0, 3) - top(1, 3) * bottom(0, 2) + top(2, 3) * bottom(0, 1);
}

PairInvariants pair_invariants(const Mat4& v4) {
    PairInvariants inv;
    inv.i1 = det2(v4.topLeftCorner<2, 2>());
    inv.i2 = det2(v4.bottomRightCorner<2, 2>());
    inv.i3 = det2(v4.topRightCorner<2, 2>());
    inv.i4 = det4(v4);
    return inv;
}

double pt_min_symplectic_pair(const Mat4& v4) {
    const PairInvariants inv = pair_invariants(v4);
    return symplectic_from_sigma(inv.i1 + inv.i2 - 2.0 * inv.i3, inv.i4,
                                 inv.i1 + inv.i2 + 2.0 * std::abs(inv.i3))
        .minus;
}

double log_negativity(const Mat4& v4) {
    const double nu = pt_min_symplectic_pair(v4);
    return std::max(0.0, -std::log(2.0 * nu));
}

SymplecticSpectrum symplectic_eigenvalues(const Mat4& v4) {
    const PairInvariants inv = pair_invariants(v4);
    return symplectic_from_sigma(inv.i1 + inv.i2 + 2.0 * inv.i3, inv.i4,
                                 inv.i1 + inv.i2 + 2.0 * std::abs(inv.i3));
}

Mat6 partial_transposition(Partition part) {
    Mat6 p = Mat6::Identity();
    const int lone = static_cast<int>(part);
    p(2 * lone + 1, 2 * lone + 1) = -1.0;
    return p;
}

double pt_min_symplectic(const Mat6& v6, Partition part) {
    const Mat6 p = partial_transposition(part);
    const Mat6 eta = p * v6 * p;
    // |eig(i Omega eta)| = |eig(Omega eta)|
    const Mat6 omega = symplectic_form(3);
    Eigen::EigenSolver<Mat6> solver(omega * eta, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration failed for the partially transposed CM");
    }
    const Eigen::Matrix<double, 6, 1> mags = solver.eigenvalues().cwiseAbs();
    if (!mags.allFinite()) throw NumericError("non-finite symplectic spectrum");
    return mags.minCoeff();
}

double one_vs_rest_contangle(const Mat6& v6, Partition part) {
    const double e = std::max(0.0, -std::log(2.0 * pt_min_symplectic(v6, part)));
    return e * e;
}

ResidualContangle residual_contangle_min(const Mat6& v6) {
    auto pair_block = [&](int i, int j) {
        Mat4 out;
        out.block<2, 2>(0, 0) = v6.block<2, 2>(2 * i, 2 * i);
        out.block<2, 2>(0, 2) = v6.block<2, 2>(2 * i, 2 * j);
        out.block<2, 2>(2, 0) = v6.block<2, 2>(2 * j, 2 * i);
        out.block<2, 2>(2, 2) = v6.block<2, 2>(2 * j, 2 * j);
        return out;
    };
    auto pair_contangle = [&](int i, int j) {
        const double e = log_negativity(pair_block(i, j));
        return e * e;
    };

    ResidualContangle out;
    for (Partition part : kPartitions) {
        const int i = static_cast<int>(part);
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double r = one_vs_rest_contangle(v6, part) - pair_contangle(i, j) -
                         pair_contangle(i, k);
        out.raw[i] = r;
        if (r < -kMonogamyTolerance) {
            out.monogamy_violated = true;
            out.reported[i] = r;
        } else {
            out.reported[i] = std::max(0.0, r);
        }
    }
    out.r_tau_min = *std::min_element(out.reported.begin(), out.reported.end());
    return out;
}

double entropy_function(double x) {
    if (!std::isfinite(x) || x < 0.5 - kEntropyDomainTol) {
        std::ostringstream msg;
        msg << "entropy function argument " << x << " is below 1/2";
        throw DomainError(msg.str());
    }
    if (x <= 0.5) return 0.0;
    const double lo = x - 0.5;
    const double hi = x + 0.5;
    return hi * std::log(hi) - lo * std::log(lo);
}

double gaussian_discord(const Mat4& v4) {
    const PairInvariants inv = pair_invariants(v4);
    const auto [i1, i2, i3, i4] = inv;
    const SymplecticSpectrum nu = symplectic_eigenvalues(v4);

    // Optimal Gaussian measurement on the first mode. The branch test
    // diverges for I3 = 0, which selects the second branch.
    // Round-off scale of the invariants: I4 carries an error of order eps * m^2.
    const double m = i1 + i2 + 2.0 * std::abs(i3);
    double w = 0.0;
    bool first_branch = false;
    if (i3 != 0.0 && 4.0 * i1 - 1.0 > 0.0) {
        const double lhs = 4.0 * (i1 * i2 - i4) * (i1 * i2 - i4) /
                           ((i2 + 4.0 * i4) * (1.0 + 4.0 * i1) * i3 * i3);
        first_branch = lhs <= 1.0;
    }
    if (first_branch) {
        const double c = 4.0 * i3 * i3;
        const double e = (4.0 * i1 - 1.0) * (4.0 * i4 - i2);
        const double root = std::sqrt(round_off_to_zero(c + e, 16.0 * m * m * std::max(1.0, m), i2, "discord radicand"));
        const double t = (2.0 * std::abs(i3) + root) / (4.0 * i1 - 1.0);
        w = t * t;
    } else {
        // (s - sqrt(q)) / (2 I1), rationalized.
        const double s = i1 * i2 + i4 - i3 * i3;
        const double q = s * s - 4.0 * i1 * i2 * i4;
        const double root = std::sqrt(round_off_to_zero(q, m * m * m * m, s * s, "discord radicand"));
        w = 2.0 * i2 * i4 / (s + root);
    }

    const double d = entropy_function(std::sqrt(i1)) - entropy_function(nu.minus) -
                     entropy_function(nu.plus) + entropy_function(std::sqrt(w));
    if (d < 0.0) {
        if (d >= -kMonogamyTolerance) return 0.0;
        std::ostringstream msg;
        msg << "Gaussian discord evaluated negative (" << d << ")";
        throw DomainError(msg.str());
    }
    return d;
}

}  // namespace optocorr
