#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pagecurve/gaussian.hpp"
#include "pagecurve/integrator.hpp"
#include "pagecurve/thermo.hpp"

using namespace pagecurve;

namespace {

// Independent route for the symplectic eigenvalue: eigen-decompose
// Sigma * Omega numerically and take |Im| of either eigenvalue.
double symplectic_eigenvalue_oracle(const CovarianceState& s) {
    Eigen::Matrix2d m;
    m << s.sxx, s.sxp, s.sxp, s.spp;
    const Eigen::Matrix2d so = m * symplectic_form();
    const Eigen::EigenSolver<Eigen::Matrix2d> es(so);
    return std::abs(es.eigenvalues()(0).imag());
}

// Thermal Fock-sum entropy oracle: -sum p_n ln p_n with
// p_n = nbar^n/(1+nbar)^{n+1}, summed to convergence.
double thermal_entropy_oracle(double nbar) {
    double s = 0.0;
    double p = 1.0 / (1.0 + nbar);
    const double q = nbar / (1.0 + nbar);
    while (p > 1e-300) {
        s -= p * std::log(p);
        p *= q;
    }
    return s;
}

CovarianceState random_valid_covariance(std::mt19937& rng) {
    std::uniform_real_distribution<double> lam_dist(0.5, 1.5);
    std::uniform_real_distribution<double> r_dist(-0.6, 0.6);
    std::uniform_real_distribution<double> th_dist(0.0, 3.14159);
    const double lam = lam_dist(rng), r = r_dist(rng), th = th_dist(rng);
    Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
    d(0, 0) = lam * std::exp(2.0 * r);
    d(1, 1) = lam * std::exp(-2.0 * r);
    Eigen::Matrix2d o;
    o << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const Eigen::Matrix2d m = o * d * o.transpose();
    return CovarianceState(m(0, 0), m(0, 1), m(1, 1));
}

// Measure the covariance matrix of a Fock-basis state with quadrature
// matrices built from the ladder operators.
CovarianceState covariance_of(const DensityMatrix& rho) {
    const int n = int(rho.dim());
    const ComplexMatrix a = ladder(n, Ladder::lower);
    const ComplexMatrix x = (a.adjoint() + a) / std::sqrt(2.0);
    const ComplexMatrix p = Complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0);
    const double sxx = (x * x * rho.matrix()).trace().real();
    const double spp = (p * p * rho.matrix()).trace().real();
    const double sxp = 0.5 * ((x * p + p * x) * rho.matrix()).trace().real();
    return CovarianceState(sxx, sxp, spp);
}

} // namespace

TEST_CASE("symplectic form") {
    const Eigen::Matrix2d omega = symplectic_form();
    CHECK((omega * omega + Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symplectic eigenvalue") {
    CHECK(symplectic_eigenvalue(CovarianceState(0.5, 0.0, 0.5)) == doctest::Approx(0.5));
    // squeezed vacuum stays pure
    CHECK(symplectic_eigenvalue(CovarianceState(1e-3, 0.0, 0.25 / 1e-3)) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(symplectic_eigenvalue(CovarianceState(1.0, 0.0, 1.0)) == doctest::Approx(1.0));

    std::mt19937 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const CovarianceState s = random_valid_covariance(rng);
        CHECK(std::abs(symplectic_eigenvalue(s) - symplectic_eigenvalue_oracle(s)) <= 1e-12);
    }

    CHECK_THROWS_AS(CovarianceState(0.1, 0.0, 0.1), UnphysicalStateError);
    CHECK_THROWS_AS(CovarianceState(-1.0, 0.0, 1.0), UnphysicalStateError);
}

TEST_CASE("gaussian entropy against the thermal Fock oracle") {
    CHECK(gaussian_entropy(CovarianceState(0.5, 0.0, 0.5)) == 0.0); // pure: exactly 0
    CHECK(gaussian_entropy_from_symplectic(0.5) == 0.0);

    // lambda = 1 (nbar = 1/2)
    CHECK(gaussian_entropy(CovarianceState(1.0, 0.0, 1.0)) ==
          doctest::Approx(thermal_entropy_oracle(0.5)).epsilon(1e-12));
    CHECK(gaussian_entropy(CovarianceState(1.0, 0.0, 1.0)) ==
          doctest::Approx(0.95477125244221923).epsilon(1e-12));

    // nbar = 2 -> lambda = 2.5
    CHECK(gaussian_entropy_from_symplectic(2.5) ==
          doctest::Approx(thermal_entropy_oracle(2.0)).epsilon(1e-12));
    CHECK(gaussian_entropy_from_symplectic(2.5) ==
          doctest::Approx(1.9095425048844385).epsilon(1e-12));

    // monotone in lambda
    double prev = 0.0;
    for (double lam = 0.5; lam <= 6.0; lam += 0.01) {
        const double s = gaussian_entropy_from_symplectic(lam);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("evolve_covariance: fixed point, energy decay, purity bound") {
    const CovarianceState vacuum(0.5, 0.0, 0.5);
    for (const double t : {0.0, 1.0, 17.3, 400.0}) {
        const CovarianceState s = evolve_covariance(vacuum, 1.0, 0.01, 0.0, t);
        CHECK(std::abs(s.sxx - 0.5) <= 1e-14);
        CHECK(std::abs(s.sxp) <= 1e-14);
        CHECK(std::abs(s.spp - 0.5) <= 1e-14);
    }

    // exponential energy decay law with E = (sxx + spp)/2 (omega0 = 1)
    const CovarianceState squeezed(1e-3, 0.0, 250.0);
    const double e0 = 0.5 * (squeezed.sxx + squeezed.spp);
    for (const double t : {0.5, 5.0, 50.0, 500.0}) {
        const CovarianceState s = evolve_covariance(squeezed, 1.0, 0.01, 0.0, t);
        const double e = 0.5 * (s.sxx + s.spp);
        CHECK(std::abs((e - 0.5) - std::exp(-0.01 * t) * (e0 - 0.5)) <= 1e-10 * e0);
    }

    // thermal bath: gamma_minus - gamma_plus = kappa, steady variance nbar + 1/2
    const CovarianceState hot = evolve_covariance(vacuum, 1.0, 0.015, 0.005, 1e4);
    CHECK(hot.sxx == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hot.spp == doctest::Approx(1.0).epsilon(1e-10));

    // Heisenberg bound holds along arbitrary valid trajectories
    std::mt19937 rng(13);
    for (int rep = 0; rep < 25; ++rep) {
        const CovarianceState s0 = random_valid_covariance(rng);
        for (double t = 0.0; t <= 300.0; t += 7.3) {
            const CovarianceState s = evolve_covariance(s0, 1.0, 0.02, 0.004, t);
            CHECK(s.det() >= 0.25 - 1e-12);
        }
    }

    CHECK_THROWS_AS(evolve_covariance(vacuum, 1.0, 0.01, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_covariance(vacuum, 1.0, 0.01, 0.02, 1.0), std::invalid_argument);
}

TEST_CASE("page curve shape of the cold squeezed oscillator") {
    const double delta = 0.1, gamma = 0.01;
    const CovarianceState s0(delta, 0.0, 0.25 / delta);
    CHECK(gaussian_entropy(s0) == 0.0);

    std::vector<std::pair<double, double>> entropy, energy;
    int sign_changes = 0;
    double prev_s = 0.0;
    for (double t = 0.0; t <= 2000.0; t += 1.0) {
        const CovarianceState s = evolve_covariance(s0, 1.0, gamma, 0.0, t);
        const double sv = gaussian_entropy(s);
        entropy.emplace_back(t, sv);
        energy.emplace_back(t, 0.5 * (s.sxx + s.spp));
        if (t > 0.0 && (sv - prev_s) < 0 && sign_changes == 0) sign_changes = 1;
        if (t > 0.0 && sign_changes == 1 && (sv - prev_s) > 1e-12) sign_changes = 2;
        prev_s = sv;
    }
    CHECK(sign_changes == 1); // single interior maximum
    CHECK(entropy.back().second <= 1e-6);

    // half-energy Page time: t* ~ ln 2 / kappa within 2%
    const PageSummary page = page_summary(entropy, energy);
    CHECK(std::abs(page.t_star - std::log(2.0) / gamma) <= 0.02 * std::log(2.0) / gamma);
    CHECK(std::abs(page.energy_fraction - 0.5) <= 0.01);
}

TEST_CASE("fock projector oracle: vacuum, thermal, squeezed") {
    // vacuum -> |0><0|
    const DensityMatrix vac = fock_projector_oracle(CovarianceState(0.5, 0.0, 0.5), 10);
    CHECK(std::abs(vac.matrix()(0, 0).real() - 1.0) <= 1e-12);
    CHECK(max_abs(vac.matrix()) <= 1.0 + 1e-12);

    // thermal nbar = 1/2: diagonal geometric distribution
    const DensityMatrix th = fock_projector_oracle(CovarianceState(1.0, 0.0, 1.0), 60);
    const double nbar = 0.5;
    for (int n = 0; n < 8; ++n) {
        const double pn = std::pow(nbar, n) / std::pow(1.0 + nbar, n + 1);
        CHECK(th.matrix()(n, n).real() == doctest::Approx(pn).epsilon(1e-10));
    }
    double offdiag = 0.0;
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(th.matrix()(i, j)));
    CHECK(offdiag <= 1e-12);

    // squeezed vacuum delta = 0.1 stays pure through the basis change
    const DensityMatrix sq = fock_projector_oracle(CovarianceState(0.1, 0.0, 2.5), 48);
    const EighResult eig = eigh(sq.matrix());
    CHECK(eig.eigenvalues.maxCoeff() >= 1.0 - 1e-8);

    // truncation too small for the requested state
    CHECK_THROWS_AS(fock_projector_oracle(CovarianceState(0.05, 0.0, 5.0), 8), LeakageError);
}

TEST_CASE("fock projector oracle reconstructs arbitrary valid covariances") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 20; ++rep) {
        const CovarianceState s = random_valid_covariance(rng);
        const DensityMatrix rho = fock_projector_oracle(s, 128);
        const CovarianceState measured = covariance_of(rho);
        CHECK(std::abs(measured.sxx - s.sxx) <= 1e-6);
        CHECK(std::abs(measured.sxp - s.sxp) <= 1e-6);
        CHECK(std::abs(measured.spp - s.spp) <= 1e-6);
        // entropy agrees with the symplectic formula
        CHECK(std::abs(von_neumann_entropy(rho) - gaussian_entropy(s)) <= 1e-7);
    }
}

TEST_CASE("covariance fast path agrees with the dense Fock integration") {
    const double delta = 0.1, gamma = 0.01;
    const int n_max = 48;
    const HermitianOperator h(ladder(n_max, Ladder::number));
    const HermitianOperator s(ladder(n_max, Ladder::lower) + ladder(n_max, Ladder::raise));
    const GKLSGenerator gen = build_generator(h, s, BathSpec{0.0, gamma});

    const CovarianceState sigma0(delta, 0.0, 0.25 / delta);
    const DensityMatrix rho0 = fock_projector_oracle(sigma0, n_max);

    IntegrationControls controls;
    controls.t_end = 100.0;
    controls.dt_init = 0.1;
    controls.record_stride = 20; // sample every 2 time units
    controls.leak_threshold = 1e-6;
    const Trajectory traj = evolve(gen, rho0, controls);

    for (size_t i = 0; i < traj.times.size(); ++i) {
        const CovarianceState sg =
            evolve_covariance(sigma0, 1.0, gamma, 0.0, traj.times[i]);
        CHECK(std::abs(von_neumann_entropy(traj.states[i]) - gaussian_entropy(sg)) <= 1e-4);
    }
}
