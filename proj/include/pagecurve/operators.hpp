#pragma once

#include <Eigen/Dense>

#include <complex>

#include "pagecurve/errors.hpp"

namespace pagecurve {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Jump operators and other not-necessarily-Hermitian operators are plain
// dense complex matrices.
using GeneralOperator = ComplexMatrix;

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

// Dense complex square matrix with the Hermiticity contract enforced at
// construction (max|M - M^dag| <= tol, default 1e-12).
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m, double hermiticity_tol = 1e-12);

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    ComplexMatrix m_;
};

// Density matrix: Hermitian within 1e-12, trace 1 within trace_tol,
// minimum eigenvalue >= -positivity_tol (small negative drift allowed).
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, double positivity_tol = 1e-9,
                           double trace_tol = 1e-9);

    const ComplexMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    ComplexMatrix m_;
};

// Qubit basis convention: index 0 is the excited state |1>, the sigma_z = +1
// eigenvector; index 1 is the ground state |0>.
enum class Pauli { x, y, z, plus, minus };
GeneralOperator pauli(Pauli which);

// Truncated bosonic ladder operators in the Fock basis, |0> first.
// lower has sqrt(n) on the first superdiagonal; raise is its adjoint;
// number is diag(0, 1, ..., n_max-1). Requires n_max >= 2.
enum class Ladder { lower, raise, number };
GeneralOperator ladder(int n_max, Ladder which);

// AB - BA. Throws std::invalid_argument on dimension mismatch.
GeneralOperator commutator(const GeneralOperator& a, const GeneralOperator& b);

struct EighResult {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // columns; M = V diag(lambda) V^dag
};

// Hermitian eigendecomposition. Rejects inputs with
// max|M - M^dag| > 1e-10 * max(1, max|M|).
EighResult eigh(const ComplexMatrix& m);

// exp(-beta H)/Z; beta must be finite and >= 0.
DensityMatrix gibbs_state(const HermitianOperator& h, double beta);

// Projector onto the lowest eigenvector; requires a non-degenerate ground
// state (spectral gap above 1e-10 * max(1, max|H|)).
DensityMatrix ground_state_projector(const HermitianOperator& h);

} // namespace pagecurve
