#include "pagecurve/thermo.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pagecurve {

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > kClipFloor) s -= lam * std::log(lam);
    }
    return std::max(s, 0.0);
}

double analytic_qubit_entropy(double gamma, double t) {
    if (!(gamma > 0.0)) throw std::invalid_argument("analytic_qubit_entropy: gamma must be > 0");
    if (t < 0.0) throw std::invalid_argument("analytic_qubit_entropy: t must be >= 0");
    const double gt = gamma * t;
    const double q = -std::expm1(-gt); // 1 - e^{-gamma t}, accurate near 0
    double s = gt * std::exp(-gt);
    if (q > 0.0) s -= q * std::log(q);
    return std::max(s, 0.0);
}

double heat_current(const GKLSGenerator& gen, const DensityMatrix& rho) {
    const ComplexMatrix lrho = apply(gen, rho.matrix());
    return (gen.hamiltonian().matrix() * lrho).trace().real();
}

EntropyRateResult entropy_rate(const GKLSGenerator& gen, const DensityMatrix& rho) {
    const ComplexMatrix lrho = apply(gen, rho.matrix());
    const EighResult eig = eigh(rho.matrix());
    // In the eigenbasis of rho only the diagonal of L(rho) meets log rho.
    const ComplexMatrix lrho_eig = eig.eigenvectors.adjoint() * lrho * eig.eigenvectors;
    const double weight_tol = 1e-12 * std::max(1.0, max_abs(lrho));
    EntropyRateResult out;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lam = eig.eigenvalues(i);
        const double w = lrho_eig(i, i).real();
        if (lam < kClipFloor && std::abs(w) > weight_tol) out.ill_conditioned = true;
        out.value -= w * std::log(std::max(lam, kClipFloor));
    }
    return out;
}

std::optional<double> entropy_production(double s_dot, double q_dot, const BathSpec& bath) {
    bath.validate();
    if (bath.zero_temperature()) return std::nullopt;
    return s_dot - bath.beta() * q_dot;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& tau) {
    if (rho.dim() != tau.dim())
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    const EighResult eig_rho = eigh(rho.matrix());
    const EighResult eig_tau = eigh(tau.matrix());
    const ComplexMatrix rho_in_tau =
        eig_tau.eigenvectors.adjoint() * rho.matrix() * eig_tau.eigenvectors;

    double null_mass = 0.0;
    double cross = 0.0; // tr rho log tau over the support of tau
    for (Eigen::Index j = 0; j < eig_tau.eigenvalues.size(); ++j) {
        const double mu = eig_tau.eigenvalues(j);
        const double w = rho_in_tau(j, j).real();
        if (mu <= kClipFloor)
            null_mass += w;
        else
            cross += w * std::log(mu);
    }
    if (null_mass > 1e-12) return std::numeric_limits<double>::infinity();

    double self = 0.0; // tr rho log rho
    for (Eigen::Index i = 0; i < eig_rho.eigenvalues.size(); ++i) {
        const double lam = eig_rho.eigenvalues(i);
        if (lam > kClipFloor) self += lam * std::log(lam);
    }
    return std::max(self - cross, 0.0);
}

std::pair<double, double> landauer_margins(double s_dot, double q_dot, const BathSpec& bath) {
    bath.validate();
    const double lhs = bath.zero_temperature() ? 0.0 : -bath.temperature * s_dot;
    return {lhs, -q_dot};
}

ThermoRecord make_thermo_record(const GKLSGenerator& gen, const DensityMatrix& rho,
                                const DensityMatrix& tau, double t) {
    if (!gen.bath().has_value())
        throw std::logic_error("make_thermo_record: generator carries no bath");
    const BathSpec& bath = *gen.bath();

    ThermoRecord rec;
    rec.t = t;
    rec.entropy = von_neumann_entropy(rho);
    rec.energy = (gen.hamiltonian().matrix() * rho.matrix()).trace().real();
    rec.heat_current = heat_current(gen, rho);
    const EntropyRateResult sdot = entropy_rate(gen, rho);
    rec.entropy_rate = sdot.value;
    rec.ill_conditioned = sdot.ill_conditioned;
    rec.entropy_production = entropy_production(sdot.value, rec.heat_current, bath);
    rec.relative_entropy = relative_entropy(rho, tau);
    std::tie(rec.landauer_lhs, rec.landauer_rhs) =
        landauer_margins(sdot.value, rec.heat_current, bath);
    return rec;
}

namespace {

// Vertex of the quadratic through three points (Lagrange form).
void quadratic_peak(double t0, double y0, double t1, double y1, double t2, double y2,
                    double& t_star, double& y_star) {
    const double d0 = y0 / ((t0 - t1) * (t0 - t2));
    const double d1 = y1 / ((t1 - t0) * (t1 - t2));
    const double d2 = y2 / ((t2 - t0) * (t2 - t1));
    const double a = d0 + d1 + d2;
    const double b = -(d0 * (t1 + t2) + d1 * (t0 + t2) + d2 * (t0 + t1));
    if (a == 0.0) { // collinear samples: keep the discrete maximum
        t_star = t1;
        y_star = y1;
        return;
    }
    t_star = std::clamp(-b / (2.0 * a), t0, t2);
    const double c = d0 * t1 * t2 + d1 * t0 * t2 + d2 * t0 * t1;
    y_star = (a * t_star + b) * t_star + c;
}

double quadratic_at(double t0, double y0, double t1, double y1, double t2, double y2, double t) {
    return y0 * (t - t1) * (t - t2) / ((t0 - t1) * (t0 - t2)) +
           y1 * (t - t0) * (t - t2) / ((t1 - t0) * (t1 - t2)) +
           y2 * (t - t0) * (t - t1) / ((t2 - t0) * (t2 - t1));
}

} // namespace

PageSummary page_summary(const std::vector<std::pair<double, double>>& entropies,
                         const std::vector<std::pair<double, double>>& energies) {
    const size_t n = entropies.size();
    if (n < 3 || energies.size() != n)
        throw std::invalid_argument("page_summary: need >= 3 matching samples");

    size_t imax = 0;
    for (size_t i = 1; i < n; ++i)
        if (entropies[i].second > entropies[imax].second) imax = i;
    if (entropies[imax].second <= 1e-15)
        throw std::invalid_argument("page_summary: entropy is identically zero");
    if (imax == 0 || imax == n - 1)
        throw WindowTooShortError("page_summary: entropy maximum at the window boundary");
    // A plateau (saturation) produces a spurious interior argmax at rounding
    // level; require the peak to stand above both endpoints.
    if (entropies[imax].second - std::max(entropies.front().second, entropies.back().second) <=
        1e-9)
        throw WindowTooShortError("page_summary: no interior entropy maximum (plateau)");

    const auto& [tl, sl] = entropies[imax - 1];
    const auto& [tc, sc] = entropies[imax];
    const auto& [tr, sr] = entropies[imax + 1];
    PageSummary out;
    quadratic_peak(tl, sl, tc, sc, tr, sr, out.t_star, out.S_star);

    const double e_star = quadratic_at(energies[imax - 1].first, energies[imax - 1].second,
                                       energies[imax].first, energies[imax].second,
                                       energies[imax + 1].first, energies[imax + 1].second,
                                       out.t_star);
    const double e0 = energies.front().second;
    const double e_inf = energies.back().second;
    if (std::abs(e0 - e_inf) < 1e-300)
        throw std::invalid_argument("page_summary: no energy decay over the window");
    out.energy_fraction = (e_star - e_inf) / (e0 - e_inf);
    return out;
}

} // namespace pagecurve
