#include "optocorr/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "optocorr/errors.hpp"

namespace optocorr {

namespace {

using Mat64 = Eigen::Matrix<double, 64, 64>;
using Vec64 = Eigen::Matrix<double, 64, 1>;

// Below this reciprocal condition estimate the Kronecker sum is treated as
// singular (A and -A share an eigenvalue).
constexpr double kMinRcond = 1e-14;

CovarianceMatrix solve_stable(const Mat8& a, const Mat8& d) {
    // vec is column-major: vec(A V) = (I (x) A) vec V, vec(V A^T) = (A (x) I) vec V.
    Mat64 k = Mat64::Zero();
    for (int i = 0; i < 8; ++i) {
        k.block<8, 8>(8 * i, 8 * i) += a;
        for (int j = 0; j < 8; ++j) {
            k.block<8, 8>(8 * i, 8 * j).diagonal().array() += a(i, j);
        }
    }
    const Vec64 rhs = -Eigen::Map<const Vec64>(d.data());

    Eigen::PartialPivLU<Mat64> lu(k);
    // The estimator misses exactly zero pivots, so check the pivots too.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double rcond = std::min(lu.rcond(), pivots.minCoeff() / pivots.maxCoeff());
    if (!(rcond > kMinRcond)) {
        std::ostringstream msg;
        msg << "Lyapunov operator is singular (rcond " << rcond << ")";
        throw SingularSystem(msg.str());
    }
    Vec64 x = lu.solve(rhs);
    // one step of iterative refinement
    x += lu.solve(rhs - k * x);

    CovarianceMatrix cm;
    cm.m = Eigen::Map<const Mat8>(x.data());
    cm.m = (0.5 * (cm.m + cm.m.transpose())).eval();
    if (!cm.m.allFinite()) throw NumericError("Lyapunov solution is not finite");
    cm.residual_norm = lyapunov_residual(a, cm.m, d);
    return cm;
}

}  // namespace

double lyapunov_residual(const Mat8& a, const Mat8& v, const Mat8& d) {
    const double num = (a * v + v * a.transpose() + d).norm();
    const double den = a.norm() * v.norm() + d.norm();
    return den > 0.0 ? num / den : num;
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d) {
    return solve_lyapunov(a, d, assess_stability(a, 0.0));
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d,
                                const StabilityVerdict& verdict) {
    if (!verdict.stable) {
        std::ostringstream msg;
        msg << "drift matrix is not stable (max Re eig = " << verdict.max_real_part << ")";
        throw UnstableDrift(msg.str());
    }
    return solve_stable(a.m, d.m);
}

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

double uncertainty_min_eigenvalue(const Mat8& v) {
    const std::complex<double> half_i{0.0, 0.5};
    const Eigen::Matrix<std::complex<double>, 8, 8> h =
        v.cast<std::complex<double>>() + half_i * symplectic_form(4).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<std::complex<double>, 8, 8>> solver(
        h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigen-decomposition of V + i Omega / 2 failed");
    }
    return solver.eigenvalues().minCoeff();
}

}  // namespace optocorr
