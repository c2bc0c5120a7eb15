#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pagecurve/davies.hpp"
#include "pagecurve/operators.hpp"

namespace pagecurve {

// Eigenvalues at or below this floor contribute 0 to entropy sums and are
// clipped inside log(rho); 0 ln 0 := 0.
inline constexpr double kClipFloor = 1e-14;

// Per-sample thermodynamic bookkeeping along a trajectory. All entropies in
// nats. entropy_production is empty at T = 0 (where beta is infinite);
// relative_entropy is +infinity on support violation. ill_conditioned marks
// samples whose entropy rate involved clipped eigenvalues carrying weight.
struct ThermoRecord {
    double t = 0.0;
    double entropy = 0.0;
    double energy = 0.0;
    double heat_current = 0.0;
    std::optional<double> entropy_production;
    double relative_entropy = 0.0;
    double landauer_lhs = 0.0; // -T dS/dt
    double landauer_rhs = 0.0; // heat into the bath, -Qdot
    double entropy_rate = 0.0;
    bool ill_conditioned = false;
};

struct PageSummary {
    double t_star = 0.0;
    double S_star = 0.0;
    double energy_fraction = 0.0; // excess energy remaining at t_star
};

// S = -sum lambda_i ln lambda_i over the eigenvalues of rho, in nats.
double von_neumann_entropy(const DensityMatrix& rho);

// Closed-form entanglement entropy of the decaying two-level excitation:
//   S(t) = gamma t e^{-gamma t} - (1 - e^{-gamma t}) ln(1 - e^{-gamma t}),
// with S(0) = 0.
double analytic_qubit_entropy(double gamma, double t);

// Qdot = tr(H L(rho)); only the dissipators contribute.
double heat_current(const GKLSGenerator& gen, const DensityMatrix& rho);

struct EntropyRateResult {
    double value = 0.0;
    bool ill_conditioned = false;
};

// dS/dt = -tr(L(rho) log rho), exact since tr L(rho) = 0. Eigenvalues below
// kClipFloor are clipped; if L(rho) carries weight on the clipped subspace
// the result is flagged ill-conditioned.
EntropyRateResult entropy_rate(const GKLSGenerator& gen, const DensityMatrix& rho);

// sigma = dS/dt - beta Qdot, nonnegative (Spohn); empty at T = 0.
std::optional<double> entropy_production(double s_dot, double q_dot, const BathSpec& bath);

// S(rho|tau) = tr rho (log rho - log tau); +infinity when the support of rho
// is not contained in the support of tau.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& tau);

// Differential Landauer margins: lhs = -T dS/dt (0 at T = 0), rhs = -Qdot.
// The bound lhs <= rhs holds along the evolution.
std::pair<double, double> landauer_margins(double s_dot, double q_dot, const BathSpec& bath);

// All records for one sample. tau is the steady state the relative entropy
// is measured against; the generator must carry a bath.
ThermoRecord make_thermo_record(const GKLSGenerator& gen, const DensityMatrix& rho,
                                const DensityMatrix& tau, double t);

// Location and height of the entropy maximum, refined by quadratic
// interpolation through the three samples bracketing the discrete maximum,
// plus the fraction of excess energy remaining there (the final recorded
// energy serves as the reference). Throws WindowTooShortError when the
// maximum sits on the window boundary or the curve has no interior peak
// standing above the endpoints (plateau).
PageSummary page_summary(const std::vector<std::pair<double, double>>& entropies,
                         const std::vector<std::pair<double, double>>& energies);

} // namespace pagecurve
