#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "optocorr/dynamics.hpp"

namespace optocorr {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct ModePair {
    Mode first;
    Mode second;
};

/// The pairs reported for the {c2, a, b} sector, in report order.
inline constexpr std::array<ModePair, 3> kCanonicalPairs = {
    ModePair{Mode::c2, Mode::a}, ModePair{Mode::a, Mode::b}, ModePair{Mode::c2, Mode::b}};

/// "c2a", "ab", "c2b", ...
std::string pair_label(ModePair pair);

struct ModeTriple {
    std::array<Mode, 3> modes{Mode::c2, Mode::a, Mode::b};
};

/// One-vs-two split of a triple; the value is the position of the lone mode.
enum class Partition { first = 0, second = 1, third = 2 };

inline constexpr std::array<Partition, 3> kPartitions = {Partition::first, Partition::second,
                                                         Partition::third};

/// "c2|ab", "a|c2b", "b|c2a" for the default triple.
std::string partition_label(const ModeTriple& triple, Partition part);

Mat4 extract_submatrix(const Mat8& v, ModePair pair);
Mat6 extract_submatrix(const Mat8& v, const ModeTriple& triple);

// Closed-form determinants.
double det2(const Mat2& m);
double det4(const Mat4& m);

/// Local and global invariants of a two-mode CM [[psi1, psi3], [psi3^T, psi2]]:
/// I1 = det psi1, I2 = det psi2, I3 = det psi3, I4 = det V.
struct PairInvariants {
    double i1 = 0.0;
    double i2 = 0.0;
    double i3 = 0.0;
    double i4 = 0.0;
};

PairInvariants pair_invariants(const Mat4& v4);

/// Smaller symplectic eigenvalue of the partially transposed two-mode CM
/// (Sigma = I1 + I2 - 2 I3). Throws DomainError for a discriminant below
/// -1e-12 (relative to max(1, Sigma^2)).
double pt_min_symplectic_pair(const Mat4& v4);

/// E_N = max[0, -ln(2 nu_pt)].
double log_negativity(const Mat4& v4);

struct SymplecticSpectrum {
    double minus = 0.0;
    double plus = 0.0;
};

/// Symplectic eigenvalues of the (untransposed) two-mode CM,
/// Sigma = I1 + I2 + 2 I3.
SymplecticSpectrum symplectic_eigenvalues(const Mat4& v4);

/// Partial transposition for the given one-vs-two split: flips the
/// momentum quadrature of the lone mode.
Mat6 partial_transposition(Partition part);

/// min |eig(i Omega_3 P V6 P)|; the spectrum comes in +- pairs.
double pt_min_symplectic(const Mat6& v6, Partition part);

/// Squared log-negativity (max[0, -ln 2 eta])^2 of the split.
double one_vs_rest_contangle(const Mat6& v6, Partition part);

/// Residuals that fall between -kMonogamyTolerance and 0 are reported as 0.
inline constexpr double kMonogamyTolerance = 1e-9;

struct ResidualContangle {
    std::array<double, 3> raw{};       // C_{i|jk} - C_{i|j} - C_{i|k}, per partition
    std::array<double, 3> reported{};  // raw with round-off negatives clamped
    double r_tau_min = 0.0;            // min of reported
    bool monogamy_violated = false;    // some raw < -kMonogamyTolerance
};

ResidualContangle residual_contangle_min(const Mat6& v6);

/// g(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2), g(1/2) = 0.
/// Throws DomainError for x < 1/2 - 1e-12.
double entropy_function(double x);

/// Gaussian quantum discord of a two-mode CM, optimized over Gaussian
/// measurements on the first mode (the psi1 block):
/// D_G = g(sqrt I1) - g(nu_-) - g(nu_+) + g(sqrt W).
double gaussian_discord(const Mat4& v4);

}  // namespace optocorr
