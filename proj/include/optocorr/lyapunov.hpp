#pragma once

#include "optocorr/dynamics.hpp"

namespace optocorr {

/// Steady-state covariance matrix in the fixed quadrature basis.
struct CovarianceMatrix {
    Mat8 m;
    // ||A V + V A^T + D||_F / (||A||_F ||V||_F + ||D||_F), after symmetrization.
    double residual_norm = 0.0;
};

/// Relative Frobenius residual of the Lyapunov equation for a given V.
double lyapunov_residual(const Mat8& a, const Mat8& v, const Mat8& d);

/// Solves A V + V A^T = -D through the 64x64 vectorized system
/// (I (x) A + A (x) I) vec(V) = -vec(D) with partial pivoting, then
/// symmetrizes. Throws UnstableDrift if A has an eigenvalue with
/// non-negative real part, SingularSystem if the linear solve is singular.
CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d);

/// Same, trusting a verdict the caller already computed.
CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d,
                                const StabilityVerdict& verdict);

/// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega. Non-negative
/// (up to round-off) iff V satisfies the uncertainty principle.
double uncertainty_min_eigenvalue(const Mat8& v);

/// Direct sum of n blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

}  // namespace optocorr
