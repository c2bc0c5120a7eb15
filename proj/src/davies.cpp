#include "pagecurve/davies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pagecurve {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void BathSpec::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw std::invalid_argument("bath.temperature must be finite and >= 0");
    if (!(coupling_strength > 0.0) || !std::isfinite(coupling_strength))
        throw std::invalid_argument("bath.coupling_strength must be finite and > 0");
}

double BathSpec::beta() const {
    if (zero_temperature())
        throw std::logic_error("BathSpec::beta called at T = 0");
    return 1.0 / temperature;
}

GKLSGenerator::GKLSGenerator(HermitianOperator hamiltonian, std::vector<JumpChannel> channels,
                             std::optional<BathSpec> bath)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)),
      bath_(std::move(bath)), eig_(eigh(hamiltonian_.matrix())) {
    const Eigen::Index d = hamiltonian_.dim();
    const ComplexMatrix& h = hamiltonian_.matrix();
    const double h_scale = std::max(1.0, max_abs(h));
    for (const JumpChannel& ch : channels_) {
        if (ch.op.rows() != d || ch.op.cols() != d)
            throw std::invalid_argument("GKLSGenerator: channel dimension mismatch");
        if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate))
            throw std::invalid_argument("GKLSGenerator: channel rate must be >= 0");
        // Eigenoperator property [H, A] = -omega A.
        const double residual = max_abs(h * ch.op - ch.op * h + ch.bohr_frequency * ch.op);
        const double tol = 1e-10 * h_scale * std::max(1.0, max_abs(ch.op));
        if (residual > tol)
            throw std::invalid_argument(
                "GKLSGenerator: channel at omega = " + std::to_string(ch.bohr_frequency) +
                " violates the eigenoperator property (residual " + std::to_string(residual) + ")");
    }
    if (bath_.has_value()) {
        bath_->validate();
        // Detailed balance between +-omega partners.
        for (const JumpChannel& ch : channels_) {
            if (ch.bohr_frequency <= 0.0 || ch.rate <= 0.0) continue;
            const double omega = ch.bohr_frequency;
            double partner_rate = 0.0;
            for (const JumpChannel& other : channels_) {
                if (std::abs(other.bohr_frequency + omega) <= 1e-9 * std::max(1.0, omega)) {
                    partner_rate = other.rate;
                    break;
                }
            }
            const double expected =
                bath_->zero_temperature() ? 0.0 : ch.rate * std::exp(-bath_->beta() * omega);
            if (std::abs(partner_rate - expected) > 1e-10 * std::max(1.0, ch.rate))
                throw std::invalid_argument(
                    "GKLSGenerator: detailed balance violated at omega = " + std::to_string(omega));
        }
    }
    kdag_k_.reserve(channels_.size());
    for (const JumpChannel& ch : channels_) kdag_k_.push_back(ch.op.adjoint() * ch.op);
}

double default_degeneracy_tol(const HermitianOperator& h) {
    return 1e-9 * std::max(1.0, max_abs(h.matrix()));
}

std::vector<std::pair<double, GeneralOperator>> bohr_decompose(const HermitianOperator& h,
                                                               const HermitianOperator& coupling,
                                                               double degeneracy_tol) {
    if (h.dim() != coupling.dim())
        throw std::invalid_argument("bohr_decompose: dimension mismatch");
    if (!(degeneracy_tol > 0.0))
        throw std::invalid_argument("bohr_decompose: degeneracy_tol must be > 0");

    const Eigen::Index d = h.dim();
    const EighResult eig = eigh(h.matrix());
    const ComplexMatrix& v = eig.eigenvectors;
    const ComplexMatrix s_eig = v.adjoint() * coupling.matrix() * v;

    // Collect all pairwise Bohr frequencies and cluster them: sort, then
    // merge runs whose consecutive gaps are <= degeneracy_tol, so that
    // floating-point splitting cannot break one physical channel in two.
    struct Pair {
        double omega;
        Eigen::Index i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(size_t(d) * size_t(d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            pairs.push_back({eig.eigenvalues(j) - eig.eigenvalues(i), i, j});
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return a.omega < b.omega; });

    std::vector<std::pair<double, GeneralOperator>> channels;
    const double drop_tol = 1e-13 * std::max(1.0, max_abs(coupling.matrix()));
    size_t begin = 0;
    while (begin < pairs.size()) {
        size_t end = begin + 1;
        while (end < pairs.size() && pairs[end].omega - pairs[end - 1].omega <= degeneracy_tol)
            ++end;
        double omega = 0.0;
        ComplexMatrix a_eig = ComplexMatrix::Zero(d, d);
        for (size_t k = begin; k < end; ++k) {
            omega += pairs[k].omega;
            a_eig(pairs[k].i, pairs[k].j) = s_eig(pairs[k].i, pairs[k].j);
        }
        omega /= double(end - begin);
        if (std::abs(omega) <= degeneracy_tol) omega = 0.0;
        if (max_abs(a_eig) > drop_tol)
            channels.emplace_back(omega, ComplexMatrix(v * a_eig * v.adjoint()));
        begin = end;
    }
    return channels;
}

double thermal_rate(double omega, const BathSpec& bath, double energy_scale) {
    bath.validate();
    if (omega == 0.0)
        throw std::invalid_argument("thermal_rate: omega must be nonzero");
    if (!(energy_scale > 0.0))
        throw std::invalid_argument("thermal_rate: energy_scale must be > 0");
    double nbar = 0.0;
    if (!bath.zero_temperature()) {
        // 1/(e^{beta |omega|} - 1); overflow of expm1 gives inf -> nbar = 0.
        nbar = 1.0 / std::expm1(std::abs(omega) / bath.temperature);
    }
    const double prefactor = bath.coupling_strength * energy_scale;
    return omega > 0.0 ? prefactor * (1.0 + nbar) : prefactor * nbar;
}

GKLSGenerator build_generator(const HermitianOperator& h, const HermitianOperator& coupling,
                              const BathSpec& bath, std::optional<double> degeneracy_tol) {
    bath.validate();
    const double tol = degeneracy_tol.value_or(default_degeneracy_tol(h));
    std::vector<JumpChannel> channels;
    for (auto& [omega, op] : bohr_decompose(h, coupling, tol)) {
        // omega = 0 (dephasing) channels carry no thermal rate here and are
        // pruned, as are channels whose rate vanishes (absorption at T = 0).
        if (omega == 0.0) continue;
        const double rate = thermal_rate(omega, bath, std::abs(omega));
        if (rate == 0.0) continue;
        channels.push_back({omega, std::move(op), rate});
    }
    return GKLSGenerator(h, std::move(channels), bath);
}

ComplexMatrix apply(const GKLSGenerator& gen, const ComplexMatrix& rho) {
    if (rho.rows() != gen.dim() || rho.cols() != gen.dim())
        throw std::invalid_argument("apply: state dimension mismatch");
    const ComplexMatrix& h = gen.hamiltonian().matrix();
    ComplexMatrix out = -kI * (h * rho - rho * h);
    const auto& kernels = gen.dissipator_kernels();
    for (size_t c = 0; c < gen.channels().size(); ++c) {
        const JumpChannel& ch = gen.channels()[c];
        out.noalias() += ch.rate * (ch.op * rho * ch.op.adjoint());
        out.noalias() -= (0.5 * ch.rate) * (kernels[c] * rho + rho * kernels[c]);
    }
    return out;
}

} // namespace pagecurve
