// Optical unitaries and the composite family W: analytic amplitude oracles,
// conservation-law block structure, coordinates of M, truncation convergence.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hqc/optics.hpp"

#include <cmath>
#include <random>

#include "support/oracles.hpp"

using namespace hqc;

namespace {

double unitarity_defect(const Op& u) {
    return (u.mat.adjoint() * u.mat - Matrix::Identity(u.space.dim, u.space.dim)).norm();
}

Complex amp(const Op& u, std::initializer_list<int> bra, std::initializer_list<int> ket) {
    const std::vector<int> b(bra), k(ket);
    return u.mat(basis_index(u.space, b), basis_index(u.space, k));
}

} // namespace

TEST_CASE("coordinate layout of M") {
    const ModelSpec two = two_qubit_model(8);
    CHECK(coord_count(two) == 12); // M ~ C^6
    const char* expected[12] = {"alpha1_re", "alpha1_im", "beta1_re",  "beta1_im",
                                "lambda1_re", "lambda1_im", "mu1_re",  "mu1_im",
                                "alpha2_re", "alpha2_im", "beta2_re",  "beta2_im"};
    for (int c = 0; c < 12; ++c) {
        CHECK(coord_name(two, c) == expected[c]);
        CHECK(coord_index(two, expected[c]) == c);
    }
    CHECK_THROWS_AS(coord_index(two, "mu7_re"), ValidationError);
    CHECK_THROWS_AS(coord_name(two, 12), ValidationError);

    const ModelSpec three = n_qubit_model(3, 4);
    CHECK(coord_count(three) == 20); // M ~ C^(4n-2), n = 3
    CHECK(coord_name(three, 12) == "lambda2_re");
    CHECK(coord_name(three, 16) == "alpha3_re");

    // The factor chain owns one complex pair each, in order.
    const auto chain = factor_chain(three);
    CHECK(chain.size() == 10);
    CHECK(chain[0].kind == FactorKind::displacement);
    CHECK(chain[2].kind == FactorKind::beam_splitter);
    CHECK(chain[2].partner == 3);
    CHECK(chain[9].kind == FactorKind::squeeze);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        CHECK(chain[k].pair_index == static_cast<int>(k));
    }
}

TEST_CASE("expm_antihermitian contract") {
    const ModeSpace s = make_space(1, 4);
    CHECK((expm_antihermitian(Op::zero(s)).mat - Matrix::Identity(4, 4)).norm() == 0.0);

    // exp(i pi N) on cutoff 4 is diag(1, -1, 1, -1).
    const Op x{s, Complex(0.0, M_PI) * number_op(s, 1).mat};
    const Op u = expm_antihermitian(x);
    Matrix expect = Matrix::Zero(4, 4);
    expect.diagonal() << 1.0, -1.0, 1.0, -1.0;
    CHECK((u.mat - expect).cwiseAbs().maxCoeff() < 1e-13);

    // Hermitian input violates the contract.
    CHECK_THROWS_AS(expm_antihermitian(number_op(s, 1)), ValidationError);
}

TEST_CASE("displacement amplitudes match the analytic coherent state") {
    const ModeSpace s = make_space(1, 32);
    CHECK((displacement(s, 1, 0.0).mat - Matrix::Identity(32, 32)).norm() == 0.0);

    const Op d1 = displacement(s, 1, 1.0);
    CHECK(std::abs(amp(d1, {0}, {0}) - std::exp(-0.5)) < 1e-8); // <0|D(1)|0> = e^{-1/2}
    CHECK(unitarity_defect(d1) < 1e-12);

    // Whole first column against the closed form.
    const Complex alpha(0.3, -0.4);
    const Op d = displacement(s, 1, alpha);
    const Vector oracle = oracles::coherent_column(alpha, 32);
    CHECK((d.mat.col(0) - oracle).cwiseAbs().maxCoeff() < 1e-12);

    // D(alpha)^dag = D(-alpha)
    CHECK((d.mat.adjoint() - displacement(s, 1, -alpha).mat).norm() < 1e-12);

    CHECK_THROWS_AS(displacement(s, 2, alpha), ValidationError);
}

TEST_CASE("squeeze parity and vacuum amplitude") {
    const ModeSpace s = make_space(1, 48);
    CHECK((squeeze(s, 1, 0.0).mat - Matrix::Identity(48, 48)).norm() == 0.0);

    for (Complex beta : {Complex(0.3, 0.0), Complex(0.1, -0.4), Complex(0.0, 0.7)}) {
        const Op sq = squeeze(s, 1, beta);
        // The generator couples n to n +/- 2 only, so S never connects |0> to odd levels.
        for (int odd = 1; odd < 48; odd += 2) {
            CHECK(sq.mat(odd, 0) == Complex(0.0, 0.0));
        }
        CHECK(unitarity_defect(sq) < 1e-12);
    }

    // <0|S(r)|0> = 1/sqrt(cosh r) for real r.
    const double r = 0.3;
    CHECK(std::abs(amp(squeeze(s, 1, r), {0}, {0}) - 1.0 / std::sqrt(std::cosh(r))) < 1e-8);

    // Cutoff-doubling oracle: the amplitude is already stable at this size.
    const ModeSpace s2 = make_space(1, 96);
    CHECK(std::abs(amp(squeeze(s, 1, r), {0}, {0}) - amp(squeeze(s2, 1, r), {0}, {0})) < 1e-12);
}

TEST_CASE("beam splitter: exact number conservation and the 2x2 block") {
    const ModeSpace s = make_space(2, 8);
    CHECK((beam_splitter(s, 1, 2, 0.0).mat - Matrix::Identity(64, 64)).norm() == 0.0);

    const Op u = beam_splitter(s, 1, 2, Complex(0.2, 0.35));
    const Op total = number_op(s, 1) + number_op(s, 2);
    CHECK(commutator(u, total).mat.cwiseAbs().maxCoeff() == 0.0); // exact block structure
    CHECK(unitarity_defect(u) < 1e-12);

    // Real lambda = pi/4 rotates the single-excitation block.
    const Op q = beam_splitter(s, 1, 2, M_PI / 4.0);
    const double c = std::cos(M_PI / 4.0), sn = std::sin(M_PI / 4.0);
    CHECK(std::abs(amp(q, {1, 0}, {1, 0}) - c) < 1e-14);
    CHECK(std::abs(amp(q, {0, 1}, {1, 0}) - (-sn)) < 1e-14);
    CHECK(std::abs(amp(q, {1, 0}, {0, 1}) - sn) < 1e-14);

    // Independent 2x2 oracle for generic complex lambda.
    const Complex lambda(0.4, -0.25);
    const Op g = beam_splitter(s, 1, 2, lambda);
    Matrix block(2, 2); // basis (|0,1>, |1,0>)
    block << 0.0, -std::conj(lambda), lambda, 0.0;
    const Matrix eblock = oracles::eigen_expm_antihermitian(block);
    CHECK(std::abs(amp(g, {0, 1}, {0, 1}) - eblock(0, 0)) < 1e-13);
    CHECK(std::abs(amp(g, {1, 0}, {0, 1}) - eblock(1, 0)) < 1e-13);
    CHECK(std::abs(amp(g, {0, 1}, {1, 0}) - eblock(0, 1)) < 1e-13);

    CHECK_THROWS_AS(beam_splitter(s, 1, 1, lambda), ValidationError);
    CHECK_THROWS_AS(beam_splitter(s, 1, 3, lambda), ValidationError);
}

TEST_CASE("two-mode squeeze: exact difference conservation and vacuum amplitude") {
    const ModeSpace small = make_space(2, 8);
    CHECK((two_mode_squeeze(small, 1, 2, 0.0).mat - Matrix::Identity(64, 64)).norm() == 0.0);

    const Op v = two_mode_squeeze(small, 1, 2, Complex(0.15, 0.3));
    const Op diff = number_op(small, 1) - number_op(small, 2);
    CHECK(commutator(v, diff).mat.cwiseAbs().maxCoeff() == 0.0);
    CHECK(unitarity_defect(v) < 1e-12);

    // <0,0|V(r)|0,0> = 1/cosh(r) at cutoff 48.
    const ModeSpace s = make_space(2, 48);
    const double r = 0.3;
    CHECK(std::abs(amp(two_mode_squeeze(s, 1, 2, r), {0, 0}, {0, 0}) - 1.0 / std::cosh(r)) <
          1e-8);
}

TEST_CASE("displacement composition law up to a phase") {
    const ModeSpace s = make_space(1, 48);
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 4; ++trial) {
        const Complex a(oracles::uniform01(gen) - 0.5, oracles::uniform01(gen) - 0.5);
        const Complex b(oracles::uniform01(gen) - 0.5, oracles::uniform01(gen) - 0.5);
        const Complex left = (displacement(s, 1, a) * displacement(s, 1, b)).mat(0, 0);
        const Complex right = displacement(s, 1, a + b).mat(0, 0);
        CHECK(std::abs(std::abs(left) - std::abs(right)) < 1e-8);
    }
}

TEST_CASE("truncation convergence: low matrix elements stable from cutoff 24 to 48") {
    const Complex p1(0.5, 0.0), p2(0.35, -0.35);
    auto low_block_gap = [](const Op& big, const Op& small_op, int modes) {
        double worst = 0.0;
        const int occ_max = 2;
        std::vector<int> bra(static_cast<std::size_t>(modes)), ket(bra);
        const long reps = modes == 1 ? 3 : 9;
        for (long r = 0; r < reps; ++r) {
            for (long c = 0; c < reps; ++c) {
                for (int m = 0; m < modes; ++m) {
                    bra[static_cast<std::size_t>(m)] =
                        static_cast<int>(r / (m == 0 ? (modes == 1 ? 1 : 3) : 1) % (occ_max + 1));
                    ket[static_cast<std::size_t>(m)] =
                        static_cast<int>(c / (m == 0 ? (modes == 1 ? 1 : 3) : 1) % (occ_max + 1));
                }
                const Complex x = big.mat(basis_index(big.space, bra), basis_index(big.space, ket));
                const Complex y =
                    small_op.mat(basis_index(small_op.space, bra), basis_index(small_op.space, ket));
                worst = std::max(worst, std::abs(x - y));
            }
        }
        return worst;
    };

    const ModeSpace c24 = make_space(1, 24), c48 = make_space(1, 48);
    CHECK(low_block_gap(displacement(c48, 1, p2), displacement(c24, 1, p2), 1) < 1e-8);
    CHECK(low_block_gap(squeeze(c48, 1, p1), squeeze(c24, 1, p1), 1) < 1e-8);

    const ModeSpace t24 = make_space(2, 24), t48 = make_space(2, 48);
    CHECK(low_block_gap(beam_splitter(t48, 1, 2, p2), beam_splitter(t24, 1, 2, p2), 2) < 1e-8);
    CHECK(low_block_gap(two_mode_squeeze(t48, 1, 2, p2), two_mode_squeeze(t24, 1, 2, p2), 2) <
          1e-8);
}

TEST_CASE("composite W: identity at the origin, factor reduction, unitarity") {
    const ModelSpec spec = two_qubit_model(16);
    const ModeSpace space = spec.space();

    const Op w0 = composite_w(spec, origin_point(spec));
    CHECK((w0.mat - Matrix::Identity(space.dim, space.dim)).norm() == 0.0);

    // Only alpha1 nonzero: W reduces to the single displacement factor.
    ParamPoint p = origin_point(spec);
    p.coords(0) = 0.2;
    p.coords(1) = -0.1;
    const Op w = composite_w(spec, p);
    CHECK((w.mat - displacement(space, 1, Complex(0.2, -0.1)).mat).norm() < 1e-14);

    // Generic point: unitary within 1e-11.
    std::mt19937_64 gen(29);
    const ParamPoint q = oracles::random_point(spec, 0.3, gen);
    CHECK(unitarity_defect(composite_w(spec, q)) < 1e-11);

    // Model/point mismatch is rejected.
    const ModelSpec other = n_qubit_model(3, 4);
    CHECK_THROWS_AS(composite_w(other, q), ValidationError);
}

TEST_CASE("n_qubit(2) composite agrees with the two_qubit preset") {
    const ModelSpec two = two_qubit_model(10);
    ModelSpec n2 = n_qubit_model(2, 10);
    std::mt19937_64 gen(31);
    ParamPoint p = oracles::random_point(two, 0.3, gen);
    ParamPoint q = p;
    q.model = ModelKind::n_qubit;
    CHECK((composite_w(two, p).mat - composite_w(n2, q).mat).norm() == 0.0);
}

TEST_CASE("unitarity holds at the dimension budget") {
    // Two-mode factors at cutoff 64 live on a dim-4096 space; sector blocks stay small.
    const ModeSpace s = make_space(2, 64);
    CHECK(unitarity_defect(beam_splitter(s, 1, 2, Complex(0.3, 0.2))) < 1e-11);
    CHECK(unitarity_defect(two_mode_squeeze(s, 1, 2, Complex(0.25, -0.2))) < 1e-11);
}

TEST_CASE("vacuum frame columns are the qubit basis states") {
    const ModelSpec spec = two_qubit_model(16);
    const Frame v = vacuum_frame(spec);
    CHECK(v.columns.cols() == 4);
    CHECK((v.columns.adjoint() * v.columns - Matrix::Identity(4, 4)).norm() == 0.0);
    // Lexicographic order |00>, |01>, |10>, |11>.
    CHECK(v.columns(0, 0) == Complex(1.0, 0.0));
    CHECK(v.columns(1, 1) == Complex(1.0, 0.0));
    CHECK(v.columns(16, 2) == Complex(1.0, 0.0));
    CHECK(v.columns(17, 3) == Complex(1.0, 0.0));

    CHECK(vacuum_frame(n_qubit_model(3, 4)).columns.cols() == 8);
}

TEST_CASE("parameter magnitude validation") {
    const ModelSpec spec = two_qubit_model(8);
    ParamPoint p = origin_point(spec);
    CHECK(validate_point(spec, p).empty());

    p.coords(2) = 1.2; // |beta1| above the warn limit
    const auto warnings = validate_point(spec, p);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("beta1") != std::string::npos);

    p.coords(2) = 2.5; // past the hard limit
    CHECK_THROWS_AS(validate_point(spec, p), ValidationError);
}
