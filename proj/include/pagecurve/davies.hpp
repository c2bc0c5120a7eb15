#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pagecurve/operators.hpp"

namespace pagecurve {

// Thermal bath in units hbar = k_B = 1. temperature = 0 encodes beta = inf
// and is always handled through the nbar -> 0 limit, never by dividing by T.
struct BathSpec {
    double temperature = 0.0;       // >= 0
    double coupling_strength = 0.0; // gamma > 0, dimensionless rate prefactor

    void validate() const;
    bool zero_temperature() const { return temperature == 0.0; }
    double beta() const; // requires temperature > 0
};

// One dissipation channel of the generator: jump operator A_omega at Bohr
// frequency omega with rate gamma_omega.
struct JumpChannel {
    double bohr_frequency = 0.0;
    GeneralOperator op;
    double rate = 0.0;
};

// Generator of the Markovian master equation
//   rho_dot = -i[H, rho] + sum_omega gamma_omega D[A_omega](rho).
// Construction validates, for every channel: shared dimension, rate >= 0,
// the eigenoperator property [H, A_omega] = -omega A_omega, and (when a bath
// is attached) detailed balance gamma_{-omega}/gamma_omega = exp(-beta omega)
// with gamma_{-omega} = 0 exactly at zero temperature.
class GKLSGenerator {
public:
    GKLSGenerator(HermitianOperator hamiltonian, std::vector<JumpChannel> channels,
                  std::optional<BathSpec> bath = std::nullopt);

    const HermitianOperator& hamiltonian() const { return hamiltonian_; }
    const std::vector<JumpChannel>& channels() const { return channels_; }
    const std::optional<BathSpec>& bath() const { return bath_; }
    Eigen::Index dim() const { return hamiltonian_.dim(); }

    // Cached eigensystem of the Hamiltonian (used by the integrator and for
    // Gibbs-state construction).
    const EighResult& hamiltonian_eigensystem() const { return eig_; }

    // A^dag A per channel, precomputed.
    const std::vector<ComplexMatrix>& dissipator_kernels() const { return kdag_k_; }

private:
    HermitianOperator hamiltonian_;
    std::vector<JumpChannel> channels_;
    std::optional<BathSpec> bath_;
    EighResult eig_;
    std::vector<ComplexMatrix> kdag_k_;
};

// Default frequency-clustering tolerance: 1e-9 * max|H|.
double default_degeneracy_tol(const HermitianOperator& h);

// Decompose a Hermitian coupling operator into eigenoperators of H:
//   A_omega = sum_{eps' - eps = omega} P_eps S P_eps',
// with Bohr frequencies clustered to within degeneracy_tol. The returned
// list satisfies sum_omega A_omega = S, [H, A_omega] = -omega A_omega and
// A_{-omega} = adjoint(A_omega); channels whose operator vanishes are
// dropped. Sorted by ascending omega.
std::vector<std::pair<double, GeneralOperator>> bohr_decompose(const HermitianOperator& h,
                                                               const HermitianOperator& coupling,
                                                               double degeneracy_tol);

// Thermal rate for one Bohr frequency with an Ohmic-type prefactor
// gamma * energy_scale: emission (omega > 0) gets 1 + nbar(|omega|),
// absorption (omega < 0) gets nbar(|omega|); at T = 0 absorption vanishes
// exactly. energy_scale is |omega| in all uses here. omega must be nonzero.
double thermal_rate(double omega, const BathSpec& bath, double energy_scale);

// Full Davies construction: bohr_decompose + thermal rates, with omega = 0
// channels and zero-rate channels pruned.
GKLSGenerator build_generator(const HermitianOperator& h, const HermitianOperator& coupling,
                              const BathSpec& bath,
                              std::optional<double> degeneracy_tol = std::nullopt);

// rho_dot = -i[H, rho] + sum gamma (A rho A^dag - 1/2 {A^dag A, rho}).
// The result is Hermitian and traceless up to roundoff.
ComplexMatrix apply(const GKLSGenerator& gen, const ComplexMatrix& rho);

} // namespace pagecurve
