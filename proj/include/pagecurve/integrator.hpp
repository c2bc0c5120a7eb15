#pragma once

#include <vector>

#include "pagecurve/davies.hpp"
#include "pagecurve/operators.hpp"

namespace pagecurve {

struct IntegrationControls {
    double t_end = 0.0;
    double dt_init = 0.1;
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    int record_stride = 1;        // samples land on a uniform grid of spacing
                                  // dt_init * record_stride
    double leak_threshold = 1e-6; // abort when the top Fock level exceeds this

    void validate() const;
    double record_interval() const { return dt_init * record_stride; }
};

// Numerical-health fields per recorded sample. trace_error is the raw drift
// |tr rho - 1| before the renormalization applied at recording points.
struct SampleHealth {
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
    double top_level_population = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<SampleHealth> health;
};

// Evolve rho0 under the generator with an adaptive embedded Runge-Kutta
// pair (Dormand-Prince 5(4)). Since every channel is an eigenoperator of H,
// the integration runs in the interaction picture, where the dissipative
// part is time-independent and the Hamiltonian phases are applied exactly
// when samples are recorded. The Hermitian part is enforced after every
// step; the trace is renormalized (and its drift logged) only at recording
// points. Aborts with UnphysicalStateError if a recorded state has an
// eigenvalue below -1e-6, and with LeakageError ("increase n_max") if the
// top-level population exceeds controls.leak_threshold.
Trajectory evolve(const GKLSGenerator& gen, const DensityMatrix& rho0,
                  const IntegrationControls& controls);

// Unique fixed point of the generator, found as the kernel of the vectorized
// superoperator. Requires at least one channel with nonzero rate; throws
// NonUniqueSteadyStateError when the kernel is not one-dimensional.
DensityMatrix steady_state(const GKLSGenerator& gen);

} // namespace pagecurve
