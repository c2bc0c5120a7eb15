#pragma once

#include "pagecurve/operators.hpp"

namespace pagecurve {

// Quadrature covariances of a centered single-mode Gaussian state, in the
// m = omega_0 = 1 convention x, p = (a^dag +/- a)/sqrt(2). Construction
// enforces the purity bound det Sigma >= 1/4 - 1e-12 (vacuum has
// sxx = spp = 1/2).
struct CovarianceState {
    double sxx = 0.5;
    double sxp = 0.0;
    double spp = 0.5;

    CovarianceState(double sxx_, double sxp_, double spp_);
    double det() const { return sxx * spp - sxp * sxp; }
    // tr(a^dag a) = (sxx + spp)/2 - 1/2.
    double mean_occupation() const { return 0.5 * (sxx + spp) - 0.5; }
};

// The fixed symplectic form Omega = [[0, 1], [-1, 0]] (Omega^2 = -1).
Eigen::Matrix2d symplectic_form();

// lambda = sqrt(det Sigma) >= 1/2; the eigenvalues of Sigma Omega are
// {+i lambda, -i lambda}.
double symplectic_eigenvalue(const CovarianceState& sigma);

// Von Neumann entropy in nats:
//   S = (lambda + 1/2) ln(lambda + 1/2) - (lambda - 1/2) ln(lambda - 1/2),
// with the pure-state limit lambda = 1/2 giving exactly 0.
double gaussian_entropy(const CovarianceState& sigma);
double gaussian_entropy_from_symplectic(double lambda);

// Closed-form solution of the covariance equation of motion
//   dSigma/dt = A Sigma + Sigma A^T + D,
//   A = [[-kappa/2, omega0], [-omega0, -kappa/2]],
//   D = ((gamma_minus + gamma_plus)/2) I,  kappa = gamma_minus - gamma_plus,
// namely Sigma(t) = s_inf I + e^{-kappa t} R(t) (Sigma_0 - s_inf I) R(t)^T
// with s_inf = (gamma_minus + gamma_plus)/(2 kappa) and R a rotation by
// omega0 t. Requires gamma_minus > gamma_plus >= 0 and t >= 0.
CovarianceState evolve_covariance(const CovarianceState& sigma0, double omega0,
                                  double gamma_minus, double gamma_plus, double t);

// Fock-basis density matrix of the centered Gaussian state, truncated to
// n_max levels and trace-renormalized. Test bridge between the covariance
// fast path and the dense integrator. Throws LeakageError when the
// pre-truncation tail mass exceeds 1e-8.
DensityMatrix fock_projector_oracle(const CovarianceState& sigma, int n_max);

} // namespace pagecurve
