#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pagecurve/matrix_io.hpp"
#include "pagecurve/operators.hpp"

using namespace pagecurve;

namespace {

ComplexMatrix random_hermitian(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    m = hermitian_part(m);
    m /= std::max(1.0, max_abs(m));
    return m;
}

} // namespace

TEST_CASE("pauli matrices and the excited-first basis convention") {
    const GeneralOperator z = pauli(Pauli::z);
    CHECK(z(0, 0) == Complex(1.0)); // <1|sigma_z|1> = +1, excited state first
    CHECK(z(1, 1) == Complex(-1.0));
    CHECK(z(0, 1) == Complex(0.0));

    const GeneralOperator minus = pauli(Pauli::minus);
    CHECK(max_abs(minus * minus) == 0.0); // nilpotent
    CHECK(max_abs(pauli(Pauli::plus) - minus.adjoint()) == 0.0);

    // sigma_pm = (sigma_x +- i sigma_y)/2
    const Complex i(0.0, 1.0);
    CHECK(max_abs(pauli(Pauli::plus) - 0.5 * (pauli(Pauli::x) + i * pauli(Pauli::y))) < 1e-15);
    CHECK(max_abs(pauli(Pauli::minus) - 0.5 * (pauli(Pauli::x) - i * pauli(Pauli::y))) < 1e-15);

    // sigma_minus lowers the excited state onto the ground state
    ComplexVector excited(2);
    excited << 1.0, 0.0;
    const ComplexVector lowered = minus * excited;
    CHECK(std::abs(lowered(1) - 1.0) < 1e-15);
    CHECK(std::abs(lowered(0)) == 0.0);
}

TEST_CASE("ladder operators in the truncated Fock basis") {
    const GeneralOperator num = ladder(3, Ladder::number);
    CHECK(num(0, 0) == Complex(0.0));
    CHECK(num(1, 1) == Complex(1.0));
    CHECK(num(2, 2) == Complex(2.0));

    // a|1> = |0> with coefficient sqrt(1) = 1
    const GeneralOperator a = ladder(4, Ladder::lower);
    ComplexVector fock1 = ComplexVector::Zero(4);
    fock1(1) = 1.0;
    const ComplexVector lowered = a * fock1;
    CHECK(std::abs(lowered(0) - 1.0) < 1e-15);

    // raise is exactly the adjoint of lower
    CHECK(max_abs(ladder(7, Ladder::raise) - ladder(7, Ladder::lower).adjoint()) == 0.0);

    // a^dag a reproduces the number operator (sqrt(n)^2 up to roundoff)
    CHECK(max_abs(ladder(9, Ladder::raise) * ladder(9, Ladder::lower) -
                  ladder(9, Ladder::number)) <= 1e-14);

    CHECK_THROWS_AS(ladder(1, Ladder::lower), std::invalid_argument);
}

TEST_CASE("commutator algebra") {
    CHECK(max_abs(commutator(pauli(Pauli::z), pauli(Pauli::minus)) + 2.0 * pauli(Pauli::minus)) <
          1e-15);
    const GeneralOperator x = pauli(Pauli::x);
    CHECK(max_abs(commutator(x, x)) == 0.0);
    CHECK_THROWS_AS(commutator(pauli(Pauli::x), ladder(3, Ladder::lower)), std::invalid_argument);

    // truncation artifact: [a, a^dag] = 1 except the bottom-right corner
    const int n = 20;
    const GeneralOperator comm = commutator(ladder(n, Ladder::lower), ladder(n, Ladder::raise));
    ComplexMatrix expected = ComplexMatrix::Identity(n, n);
    expected(n - 1, n - 1) = 1.0 - n;
    CHECK(max_abs(comm - expected) < 1e-12);
}

TEST_CASE("eigh on small fixed matrices") {
    const EighResult ez = eigh(pauli(Pauli::z));
    CHECK(ez.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(ez.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));

    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const EighResult ed = eigh(d);
    CHECK(ed.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(ed.eigenvalues(1) == doctest::Approx(2.0));
    CHECK(ed.eigenvalues(2) == doctest::Approx(3.0));
    // permutation eigenvectors: each column has a single unit entry
    for (int c = 0; c < 3; ++c)
        CHECK(ed.eigenvectors.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0));

    const EighResult em = eigh(0.5 * ComplexMatrix::Identity(2, 2));
    CHECK(em.eigenvalues(0) == doctest::Approx(0.5));
    CHECK(em.eigenvalues(1) == doctest::Approx(0.5));

    ComplexMatrix bad(2, 2);
    bad << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(eigh(bad), UnphysicalStateError);
}

TEST_CASE("eigh round-trip property on random Hermitian matrices") {
    std::mt19937 rng(12345);
    for (const int dim : {2, 3, 5, 8, 13, 21, 34, 64}) {
        for (int rep = 0; rep < 4; ++rep) {
            const ComplexMatrix m = random_hermitian(dim, rng);
            const EighResult eig = eigh(m);
            const ComplexMatrix rebuilt = eig.eigenvectors *
                                          eig.eigenvalues.cast<Complex>().asDiagonal() *
                                          eig.eigenvectors.adjoint();
            CHECK(max_abs(rebuilt - m) <= 1e-10 * dim);
            CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors -
                          ComplexMatrix::Identity(dim, dim)) < 1e-12);
            for (int i = 1; i < dim; ++i) CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
        }
    }
}

TEST_CASE("validated operator types") {
    ComplexMatrix ok(2, 2);
    ok << 1.0, Complex(0.0, 2.0), Complex(0.0, -2.0), 3.0;
    const HermitianOperator h(ok);
    CHECK(max_abs(h.matrix() - h.matrix().adjoint()) <= 1e-12);

    ComplexMatrix skew(2, 2);
    skew << 0.0, 1.0, 2.0, 0.0;
    CHECK_THROWS_AS(HermitianOperator{skew}, UnphysicalStateError);

    CHECK_THROWS_AS(DensityMatrix(2.0 * ComplexMatrix::Identity(2, 2)), UnphysicalStateError);
    ComplexMatrix neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, UnphysicalStateError);
    CHECK_NOTHROW(DensityMatrix(0.5 * ComplexMatrix::Identity(2, 2)));
}

TEST_CASE("gibbs state and ground-state projector") {
    const HermitianOperator h(0.5 * pauli(Pauli::z)); // eps0 = 1
    const DensityMatrix tau = gibbs_state(h, 1.0);
    const double z = 1.0 + std::exp(-1.0);
    // excited-first ordering: <1|tau|1> = e^{-1}/(1 + e^{-1})
    CHECK(tau.matrix()(0, 0).real() == doctest::Approx(std::exp(-1.0) / z).epsilon(1e-12));
    CHECK(tau.matrix()(1, 1).real() == doctest::Approx(1.0 / z).epsilon(1e-12));

    const DensityMatrix ground = ground_state_projector(h);
    CHECK(ground.matrix()(1, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(ground.matrix()(0, 0)) < 1e-14);

    CHECK_THROWS_AS(ground_state_projector(HermitianOperator(ComplexMatrix::Identity(2, 2))),
                    std::invalid_argument);
    CHECK_THROWS_AS(gibbs_state(h, -1.0), std::invalid_argument);
}

TEST_CASE("matrix file round trip") {
    std::mt19937 rng(7);
    const ComplexMatrix m = random_hermitian(5, rng);
    const auto path = std::filesystem::temp_directory_path() / "pagecurve_matrix_io_test.json";
    save_matrix(path, m, "fock: index 0 = vacuum");
    const ComplexMatrix loaded = load_matrix(path);
    CHECK(max_abs(loaded - m) == 0.0); // bit-exact through 17-digit JSON doubles
    std::filesystem::remove(path);

    CHECK_THROWS(load_matrix("/nonexistent/path.json"));
}
