#include "pagecurve/gaussian.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pagecurve {

CovarianceState::CovarianceState(double sxx_, double sxp_, double spp_)
    : sxx(sxx_), sxp(sxp_), spp(spp_) {
    if (!(sxx > 0.0) || !(spp > 0.0) || !std::isfinite(sxp))
        throw UnphysicalStateError("CovarianceState: variances must be positive and finite");
    if (det() < 0.25 - 1e-12)
        throw UnphysicalStateError("CovarianceState: det = " + std::to_string(det()) +
                                   " below the Heisenberg bound 1/4");
}

Eigen::Matrix2d symplectic_form() {
    Eigen::Matrix2d omega;
    omega << 0.0, 1.0, -1.0, 0.0;
    return omega;
}

double symplectic_eigenvalue(const CovarianceState& sigma) {
    return std::sqrt(std::max(sigma.det(), 0.25));
}

double gaussian_entropy_from_symplectic(double lambda) {
    const double nu = lambda - 0.5;
    double s = (lambda + 0.5) * std::log(lambda + 0.5);
    if (nu > 0.0) s -= nu * std::log(nu); // 0 ln 0 := 0 at the pure-state limit
    return std::max(s, 0.0);
}

double gaussian_entropy(const CovarianceState& sigma) {
    return gaussian_entropy_from_symplectic(symplectic_eigenvalue(sigma));
}

CovarianceState evolve_covariance(const CovarianceState& sigma0, double omega0,
                                  double gamma_minus, double gamma_plus, double t) {
    if (!(gamma_minus > gamma_plus) || !(gamma_plus >= 0.0))
        throw std::invalid_argument("evolve_covariance: need gamma_minus > gamma_plus >= 0");
    if (t < 0.0) throw std::invalid_argument("evolve_covariance: t must be >= 0");

    const double kappa = gamma_minus - gamma_plus;
    const double s_inf = (gamma_minus + gamma_plus) / (2.0 * kappa);
    const double u = std::exp(-kappa * t);

    Eigen::Matrix2d delta;
    delta << sigma0.sxx - s_inf, sigma0.sxp, sigma0.sxp, sigma0.spp - s_inf;
    const double c = std::cos(omega0 * t), s = std::sin(omega0 * t);
    Eigen::Matrix2d rot;
    rot << c, s, -s, c;
    const Eigen::Matrix2d sigma = u * (rot * delta * rot.transpose());
    return CovarianceState(s_inf + sigma(0, 0), sigma(0, 1), s_inf + sigma(1, 1));
}

DensityMatrix fock_projector_oracle(const CovarianceState& sigma, int n_max) {
    if (n_max < 2)
        throw std::invalid_argument("fock_projector_oracle: n_max must be >= 2");

    // Williamson form of a single mode: Sigma = O diag(l e^{2r}, l e^{-2r}) O^T
    // with a rotation O, so the state is R(theta) S(r) rho_th(nbar) S(r)^dag
    // R(theta)^dag with nbar = lambda - 1/2.
    Eigen::Matrix2d m;
    m << sigma.sxx, sigma.sxp, sigma.sxp, sigma.spp;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    const double lambda = symplectic_eigenvalue(sigma);
    Eigen::Matrix2d o = es.eigenvectors();
    if (o.determinant() < 0.0) o.col(1) *= -1.0;
    // Conjugation by exp(-i theta a^dag a) maps the Williamson frame to the
    // lab frame when the rotation matrix matches [[cos, sin], [-sin, cos]].
    const double theta = -std::atan2(o(1, 0), o(0, 0));
    const double r = 0.5 * std::log(es.eigenvalues()(0) / lambda);
    const double nbar = std::max(lambda - 0.5, 0.0);

    // Thermal weights p_n = nbar^n / (1 + nbar)^{n+1}, cut once negligible.
    std::vector<double> weights;
    double p = 1.0 / (1.0 + nbar);
    const double q = nbar / (1.0 + nbar);
    while (p > 1e-18 && weights.size() < 100000) {
        weights.push_back(p);
        p *= q;
    }

    // Squeezed number states |psi_n> = S(r)|n> built by recursion with
    // b = cosh(r) a - sinh(r) a^dag:
    //   |psi_0> from b|psi_0> = 0, |psi_n> = b^dag |psi_{n-1}> / sqrt(n).
    // Each b^dag application on the truncated array pulls top-edge error
    // down by one index, so the working array is oversized by the number of
    // applications plus the squeezing spread; the kept n_max block stays
    // clean and the trace deficit remains a conservative tail estimate.
    const double ch = std::cosh(r), sh = std::sinh(r);
    const int spread = int(std::ceil(std::exp(2.0 * std::abs(r))));
    const int n_int = n_max + int(weights.size()) + 8 * spread + 32;

    Eigen::VectorXd psi_prev = Eigen::VectorXd::Zero(n_int);
    psi_prev(0) = 1.0 / std::sqrt(ch);
    for (int k = 2; k < n_int; k += 2)
        psi_prev(k) = (sh / ch) * std::sqrt(double(k - 1) / double(k)) * psi_prev(k - 2);

    ComplexMatrix rho = ComplexMatrix::Zero(n_max, n_max);
    Eigen::VectorXd psi = psi_prev;
    for (size_t n = 0; n < weights.size(); ++n) {
        if (n > 0) {
            Eigen::VectorXd next = Eigen::VectorXd::Zero(n_int);
            for (int k = 0; k < n_int; ++k) {
                double amp = 0.0;
                if (k > 0) amp += ch * std::sqrt(double(k)) * psi_prev(k - 1);
                if (k + 1 < n_int) amp -= sh * std::sqrt(double(k + 1)) * psi_prev(k + 1);
                next(k) = amp / std::sqrt(double(n));
            }
            psi_prev = std::move(next);
            psi = psi_prev;
        }
        const auto head = psi.head(n_max);
        rho.noalias() += weights[n] * (head * head.transpose()).cast<Complex>();
    }

    const double kept = rho.trace().real();
    const double tail = 1.0 - kept;
    if (tail > 1e-8)
        throw LeakageError("fock_projector_oracle: pre-truncation tail mass " +
                           std::to_string(tail) + " exceeds 1e-8; increase n_max");

    // Rotation phases: rho_mn -> e^{-i theta (m - n)} rho_mn.
    if (theta != 0.0) {
        ComplexVector phase(n_max);
        for (int k = 0; k < n_max; ++k) phase(k) = std::exp(Complex(0.0, -theta * k));
        rho = phase.asDiagonal() * rho * phase.conjugate().asDiagonal();
    }
    rho /= kept;
    rho = hermitian_part(rho);
    return DensityMatrix(std::move(rho));
}

} // namespace pagecurve
