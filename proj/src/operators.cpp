#include "pagecurve/operators.hpp"

#include <cmath>
#include <string>

namespace pagecurve {

namespace {
constexpr Complex kI{0.0, 1.0};
}

double max_abs(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double hermiticity_tol) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
    const double dev = max_abs(m_ - m_.adjoint());
    if (dev > hermiticity_tol)
        throw UnphysicalStateError("HermitianOperator: not Hermitian, max|M - M^dag| = " +
                                   std::to_string(dev));
    m_ = hermitian_part(m_);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double positivity_tol, double trace_tol)
    : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    const double dev = max_abs(m_ - m_.adjoint());
    if (dev > 1e-12)
        throw UnphysicalStateError("DensityMatrix: not Hermitian, max|M - M^dag| = " +
                                   std::to_string(dev));
    m_ = hermitian_part(m_);
    const double tr_err = std::abs(m_.trace().real() - 1.0) + std::abs(m_.trace().imag());
    if (tr_err > trace_tol)
        throw UnphysicalStateError("DensityMatrix: trace deviates from 1 by " +
                                   std::to_string(tr_err));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -positivity_tol)
        throw UnphysicalStateError("DensityMatrix: minimum eigenvalue " +
                                   std::to_string(min_eig) + " below tolerance");
}

GeneralOperator pauli(Pauli which) {
    GeneralOperator m = GeneralOperator::Zero(2, 2);
    switch (which) {
    case Pauli::x:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
    case Pauli::y:
        m(0, 1) = -kI;
        m(1, 0) = kI;
        break;
    case Pauli::z:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    case Pauli::plus: // |1><0|, raising
        m(0, 1) = 1.0;
        break;
    case Pauli::minus: // |0><1|, lowering
        m(1, 0) = 1.0;
        break;
    }
    return m;
}

GeneralOperator ladder(int n_max, Ladder which) {
    if (n_max < 2)
        throw std::invalid_argument("ladder: n_max must be >= 2, got " + std::to_string(n_max));
    GeneralOperator m = GeneralOperator::Zero(n_max, n_max);
    switch (which) {
    case Ladder::lower:
        for (int n = 1; n < n_max; ++n) m(n - 1, n) = std::sqrt(double(n));
        break;
    case Ladder::raise:
        for (int n = 1; n < n_max; ++n) m(n, n - 1) = std::sqrt(double(n));
        break;
    case Ladder::number:
        for (int n = 0; n < n_max; ++n) m(n, n) = double(n);
        break;
    }
    return m;
}

GeneralOperator commutator(const GeneralOperator& a, const GeneralOperator& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
        throw std::invalid_argument("commutator: dimension mismatch");
    return a * b - b * a;
}

EighResult eigh(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eigh: matrix must be square");
    const double tol = 1e-10 * std::max(1.0, max_abs(m));
    if (max_abs(m - m.adjoint()) > tol)
        throw UnphysicalStateError("eigh: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix gibbs_state(const HermitianOperator& h, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("gibbs_state: beta must be finite and >= 0");
    const EighResult eig = eigh(h.matrix());
    const double e_min = eig.eigenvalues.minCoeff();
    RealVector w = (-beta * (eig.eigenvalues.array() - e_min)).exp().matrix();
    w /= w.sum();
    ComplexMatrix rho = eig.eigenvectors * w.cast<Complex>().asDiagonal() *
                        eig.eigenvectors.adjoint();
    return DensityMatrix(hermitian_part(rho));
}

DensityMatrix ground_state_projector(const HermitianOperator& h) {
    const EighResult eig = eigh(h.matrix());
    const double gap_tol = 1e-10 * std::max(1.0, max_abs(h.matrix()));
    if (h.dim() > 1 && eig.eigenvalues(1) - eig.eigenvalues(0) <= gap_tol)
        throw std::invalid_argument("ground_state_projector: degenerate ground state");
    const ComplexVector v = eig.eigenvectors.col(0);
    return DensityMatrix(v * v.adjoint());
}

} // namespace pagecurve
