#include "pagecurve/integrator.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "pagecurve/log.hpp"

namespace pagecurve {

namespace {

constexpr Complex kI{0.0, 1.0};

// Dissipative right-hand side in the interaction picture (H - eigenbasis,
// rotating frame): sum_c gamma_c (A rho A^dag - 1/2 {A^dag A, rho}).
class DissipativeRhs {
public:
    DissipativeRhs(const GKLSGenerator& gen, const ComplexMatrix& basis) {
        const Eigen::Index d = basis.rows();
        for (const JumpChannel& ch : gen.channels()) {
            ops_.push_back(basis.adjoint() * ch.op * basis);
            ops_dag_.push_back(ops_.back().adjoint());
            kernels_.push_back(ops_dag_.back() * ops_.back());
            rates_.push_back(ch.rate);
        }
        tmp_.resize(d, d);
    }

    void operator()(const ComplexMatrix& rho, ComplexMatrix& out) {
        out.setZero();
        for (size_t c = 0; c < rates_.size(); ++c) {
            tmp_.noalias() = ops_[c] * rho;
            out.noalias() += rates_[c] * (tmp_ * ops_dag_[c]);
            tmp_.noalias() = kernels_[c] * rho;
            out.noalias() -= (0.5 * rates_[c]) * tmp_;
            tmp_.noalias() = rho * kernels_[c];
            out.noalias() -= (0.5 * rates_[c]) * tmp_;
        }
    }

private:
    std::vector<ComplexMatrix> ops_, ops_dag_, kernels_;
    std::vector<double> rates_;
    ComplexMatrix tmp_;
};

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (5th-order weights minus the embedded 4th-order weights).
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

class Dopri5 {
public:
    Dopri5(DissipativeRhs& rhs, Eigen::Index d, double rel_tol, double abs_tol)
        : rhs_(rhs), rel_tol_(rel_tol), abs_tol_(abs_tol) {
        for (ComplexMatrix* m : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_})
            m->resize(d, d);
    }

    // Advance y from t by at most h_cap; returns the step actually taken.
    // h_natural_ carries the controller's preferred step across calls so
    // that clipping to recording times does not disturb the adaptation.
    double step(ComplexMatrix& y, double t, double h_cap) {
        for (;;) {
            const double h = std::min(h_natural_, h_cap);
            if (!(h > 0.0) || t + h == t)
                throw std::runtime_error("evolve: step size underflow at t = " +
                                         std::to_string(t));
            rhs_(y, k1_);
            ytmp_ = y + h * a21 * k1_;
            rhs_(ytmp_, k2_);
            ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
            rhs_(ytmp_, k3_);
            ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
            rhs_(ytmp_, k4_);
            ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
            rhs_(ytmp_, k5_);
            ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
            rhs_(ytmp_, k6_);
            ynew_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
            rhs_(ynew_, k7_);

            // Scaled max-norm of the embedded error estimate.
            double err = 0.0;
            for (Eigen::Index j = 0; j < y.cols(); ++j)
                for (Eigen::Index i = 0; i < y.rows(); ++i) {
                    const double e = h * std::abs(e1 * k1_(i, j) + e3 * k3_(i, j) +
                                                  e4 * k4_(i, j) + e5 * k5_(i, j) +
                                                  e6 * k6_(i, j) + e7 * k7_(i, j));
                    const double scale =
                        abs_tol_ + rel_tol_ * std::max(std::abs(y(i, j)), std::abs(ynew_(i, j)));
                    err = std::max(err, e / scale);
                }

            const double factor =
                std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            if (err <= 1.0) {
                y.swap(ynew_);
                if (h == h_natural_) h_natural_ *= factor;
                ++accepted_;
                return h;
            }
            h_natural_ = h * factor;
            ++rejected_;
        }
    }

    void set_initial_step(double h) { h_natural_ = h; }
    long accepted() const { return accepted_; }
    long rejected() const { return rejected_; }

private:
    DissipativeRhs& rhs_;
    double rel_tol_, abs_tol_;
    double h_natural_ = 0.0;
    long accepted_ = 0, rejected_ = 0;
    ComplexMatrix k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

void IntegrationControls::validate() const {
    if (!(t_end > 0.0)) throw std::invalid_argument("controls.t_end must be > 0");
    if (!(dt_init > 0.0)) throw std::invalid_argument("controls.dt_init must be > 0");
    if (!(rel_tol > 0.0) || !(rel_tol < 1e-3))
        throw std::invalid_argument("controls.rel_tol must be in (0, 1e-3)");
    if (!(abs_tol > 0.0)) throw std::invalid_argument("controls.abs_tol must be > 0");
    if (record_stride < 1) throw std::invalid_argument("controls.record_stride must be >= 1");
    if (!(leak_threshold > 0.0))
        throw std::invalid_argument("controls.leak_threshold must be > 0");
}

Trajectory evolve(const GKLSGenerator& gen, const DensityMatrix& rho0,
                  const IntegrationControls& controls) {
    controls.validate();
    if (rho0.dim() != gen.dim())
        throw std::invalid_argument("evolve: state dimension mismatch");

    const Eigen::Index d = gen.dim();
    const EighResult& eig = gen.hamiltonian_eigensystem();
    const ComplexMatrix& v = eig.eigenvectors;

    // Recording grid: uniform spacing record_interval, plus t_end itself if
    // the grid misses it.
    std::vector<double> times;
    const double interval = controls.record_interval();
    const auto n_steps = static_cast<long>(std::floor(controls.t_end / interval + 1e-9));
    times.reserve(size_t(n_steps) + 2);
    for (long j = 0; j <= n_steps; ++j) times.push_back(double(j) * interval);
    if (times.back() < controls.t_end * (1.0 - 1e-12)) times.push_back(controls.t_end);

    DissipativeRhs rhs(gen, v);
    Dopri5 stepper(rhs, d, controls.rel_tol, controls.abs_tol);
    stepper.set_initial_step(controls.dt_init);

    ComplexMatrix y = v.adjoint() * rho0.matrix() * v; // interaction picture, H eigenbasis
    Trajectory traj;
    traj.times.reserve(times.size());
    traj.states.reserve(times.size());
    traj.health.reserve(times.size());

    ComplexVector phases(d);
    double t = 0.0;
    for (const double target : times) {
        while (target - t > 1e-14 * std::max(1.0, target)) {
            const double taken = stepper.step(y, t, target - t);
            t += taken;
            y = 0.5 * (y + y.adjoint().eval()); // keep the state exactly Hermitian
        }
        t = target;

        // Rotate back to the lab frame: rho(t) = e^{-iHt} rho_int e^{+iHt}.
        for (Eigen::Index k = 0; k < d; ++k)
            phases(k) = std::exp(-kI * (eig.eigenvalues(k) * target));
        ComplexMatrix rho_lab =
            v * (phases.asDiagonal() * y * phases.conjugate().asDiagonal()) * v.adjoint();
        rho_lab = 0.5 * (rho_lab + rho_lab.adjoint().eval());

        SampleHealth health;
        health.trace_error = std::abs(rho_lab.trace().real() - 1.0);
        const double tr = rho_lab.trace().real();
        rho_lab /= tr;
        y /= tr; // renormalize the integration state too (frame-invariant)

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_lab, Eigen::EigenvaluesOnly);
        health.min_eigenvalue = es.eigenvalues().minCoeff();
        health.top_level_population = rho_lab(d - 1, d - 1).real();

        if (health.min_eigenvalue < -1e-6)
            throw UnphysicalStateError("evolve: positivity violation at t = " +
                                       std::to_string(target) + ", min eigenvalue " +
                                       std::to_string(health.min_eigenvalue));
        if (health.top_level_population > controls.leak_threshold)
            throw LeakageError("evolve: top Fock level population " +
                               std::to_string(health.top_level_population) + " at t = " +
                               std::to_string(target) + " exceeds leak threshold; increase n_max");

        traj.times.push_back(target);
        traj.states.emplace_back(std::move(rho_lab), /*positivity_tol=*/1e-6);
        traj.health.push_back(health);
    }
    log::debug("evolve: %ld accepted / %ld rejected steps over t_end = %g", stepper.accepted(),
               stepper.rejected(), controls.t_end);
    return traj;
}

DensityMatrix steady_state(const GKLSGenerator& gen) {
    bool has_rate = false;
    for (const JumpChannel& ch : gen.channels()) has_rate |= ch.rate > 0.0;
    if (!has_rate)
        throw std::invalid_argument("steady_state: generator needs a channel with nonzero rate");

    const Eigen::Index d = gen.dim();
    const ComplexMatrix& h = gen.hamiltonian().matrix();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    // Column-major vectorization: vec(A X B) = (B^T kron A) vec(X).
    ComplexMatrix superop = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (size_t c = 0; c < gen.channels().size(); ++c) {
        const JumpChannel& ch = gen.channels()[c];
        const ComplexMatrix& k = gen.dissipator_kernels()[c];
        superop.noalias() += ch.rate * kron(ch.op.conjugate(), ch.op);
        superop.noalias() -= (0.5 * ch.rate) * (kron(id, k) + kron(k.transpose(), id));
    }

    Eigen::BDCSVD<ComplexMatrix> svd(superop, Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    const double tol = 1e-10 * sv(0);
    int kernel_dim = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol) ++kernel_dim;
    if (kernel_dim != 1)
        throw NonUniqueSteadyStateError("steady_state: kernel dimension " +
                                        std::to_string(kernel_dim) + ", expected 1");

    ComplexVector vec = svd.matrixV().col(sv.size() - 1);
    ComplexMatrix rho = Eigen::Map<ComplexMatrix>(vec.data(), d, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-10 * max_abs(rho))
        throw NonUniqueSteadyStateError("steady_state: kernel vector has vanishing trace");
    rho /= tr;
    return DensityMatrix(std::move(rho), /*positivity_tol=*/1e-8);
}

} // namespace pagecurve
