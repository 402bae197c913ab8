// Truncated Fock space: indexing, ladder algebra, Weyl generators, protection.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hqc/fock.hpp"

#include <array>
#include <cmath>

using namespace hqc;

namespace {

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// ||P (x - y) P||_max on the protected subspace.
double protected_gap(const Op& x, const Op& y, const Op& p) {
    return max_abs((p * (x - y) * p).mat);
}

} // namespace

TEST_CASE("make_space dimensions and budget") {
    CHECK(make_space(1, 16).dim == 16);
    CHECK(make_space(2, 8).dim == 64);
    CHECK(make_space(3, 4).dim == 64);
    CHECK(make_space(3, 16).dim == 4096); // exactly at the default budget

    CHECK_THROWS_AS(make_space(0, 4), ValidationError);
    CHECK_THROWS_AS(make_space(2, 1), ValidationError);
    CHECK_THROWS_AS(make_space(4, 16), ResourceError);
    CHECK_THROWS_AS(make_space(2, 8, 63), ResourceError);
    // Budget errors name the offending dimension.
    try {
        make_space(2, 70);
        CHECK(false);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("70^2") != std::string::npos);
    }
}

TEST_CASE("basis indexing is the positional map, mode 1 most significant") {
    const ModeSpace s = make_space(3, 4);
    const std::array<int, 3> occ{1, 2, 3};
    CHECK(basis_index(s, occ) == 1 * 16 + 2 * 4 + 3);
    CHECK(occupation_of(s, 27) == std::vector<int>{1, 2, 3});

    // Bijective on [0, dim).
    for (long idx = 0; idx < s.dim; ++idx) {
        CHECK(basis_index(s, occupation_of(s, idx)) == idx);
    }
    CHECK(mode_occupation(s, 1, 27) == 1);
    CHECK(mode_occupation(s, 3, 27) == 3);

    CHECK_THROWS_AS(basis_index(s, std::array<int, 2>{0, 0}), ValidationError);
    CHECK_THROWS_AS(basis_index(s, std::array<int, 3>{0, 0, 4}), ValidationError);
    CHECK_THROWS_AS(occupation_of(s, 64), ValidationError);
}

TEST_CASE("annihilator acts as sqrt(n) lowering") {
    const ModeSpace s = make_space(1, 16);
    const Op a = annihilator(s, 1);

    const StateVector one = basis_state(s, std::array<int, 1>{1});
    const StateVector zero = basis_state(s, std::array<int, 1>{0});
    CHECK((apply(a, one).amplitudes - zero.amplitudes).norm() == 0.0);

    CHECK(apply(a, zero).amplitudes.norm() == 0.0); // a|0> = 0

    const StateVector four = basis_state(s, std::array<int, 1>{4});
    const Vector expect = 2.0 * basis_state(s, std::array<int, 1>{3}).amplitudes;
    CHECK((apply(a, four).amplitudes - expect).norm() == 0.0); // a|4> = 2|3>

    CHECK_THROWS_AS(annihilator(s, 2), ValidationError);
}

TEST_CASE("creator is the exact adjoint and truncates the top level") {
    const ModeSpace s = make_space(1, 16);
    const Op a = annihilator(s, 1);
    const Op ad = creator(s, 1);

    CHECK(max_abs((ad - adjoint(a)).mat) == 0.0); // entrywise, no tolerance
    CHECK(max_abs((adjoint(adjoint(ad)) - ad).mat) == 0.0);

    const StateVector zero = basis_state(s, std::array<int, 1>{0});
    CHECK((apply(ad, zero).amplitudes - basis_state(s, std::array<int, 1>{1}).amplitudes).norm() ==
          0.0);

    const StateVector three = basis_state(s, std::array<int, 1>{3});
    const Vector expect = 2.0 * basis_state(s, std::array<int, 1>{4}).amplitudes;
    CHECK((apply(ad, three).amplitudes - expect).norm() == 0.0); // a^dag|3> = 2|4>

    const StateVector top = basis_state(s, std::array<int, 1>{15});
    CHECK(apply(ad, top).amplitudes.norm() == 0.0); // truncation boundary

    CHECK_THROWS_AS(creator(s, 0), ValidationError);
}

TEST_CASE("number operator is diagonal and equals creator*annihilator") {
    const ModeSpace s = make_space(1, 16);
    const Op n = number_op(s, 1);
    CHECK(n.mat(3, 3) == Complex(3.0, 0.0)); // N|3> = 3|3>
    CHECK(n.mat(0, 0) == Complex(0.0, 0.0));

    // The product keeps the full diagonal (no boundary anomaly for N).
    const Op prod = creator(s, 1) * annihilator(s, 1);
    CHECK(max_abs((n - prod).mat) < 1e-13);

    const ModeSpace s2 = make_space(2, 8);
    const Op n2 = number_op(s2, 2);
    const StateVector v = basis_state(s2, std::array<int, 2>{1, 2});
    CHECK((apply(n2, v).amplitudes - 2.0 * v.amplitudes).norm() == 0.0);
}

TEST_CASE("canonical commutation relations on protected states") {
    const ModeSpace s = make_space(2, 8);
    const Op p1 = protected_projector(s, 1);

    for (int i = 1; i <= 2; ++i) {
        const Op a_i = annihilator(s, i);
        const Op n_i = number_op(s, i);
        // [a_i, a_j^dag] = delta_ij on margin-1 protected states
        for (int j = 1; j <= 2; ++j) {
            const Op c = commutator(a_i, creator(s, j));
            const Op expect = i == j ? Op::identity(s) : Op::zero(s);
            // sqrt(n)^2 rounds one ulp away from n, so same-mode entries sit at
            // ~1e-15 rather than exact zero; cross-mode entries are exact.
            if (i == j) {
                CHECK(protected_gap(c, expect, p1) < 1e-13);
            } else {
                CHECK(protected_gap(c, expect, p1) == 0.0);
            }
        }
        // [N, a^dag] = a^dag and [N, a] = -a under protection
        CHECK(protected_gap(commutator(n_i, creator(s, i)), creator(s, i), p1) < 1e-14);
        CHECK(protected_gap(commutator(n_i, a_i), Complex(-1.0) * a_i, p1) < 1e-14);
    }

    // Cross-mode relations are exact with no protection at all.
    const Op a1 = annihilator(s, 1), a2 = annihilator(s, 2);
    CHECK(max_abs(commutator(a1, a2).mat) == 0.0);
    CHECK(max_abs(commutator(creator(s, 1), creator(s, 2)).mat) == 0.0);
    CHECK(max_abs(commutator(a1, creator(s, 2)).mat) == 0.0);

    const ModeSpace other = make_space(2, 4);
    CHECK_THROWS_AS(commutator(a1, annihilator(other, 1)), ValidationError);
}

TEST_CASE("Schwinger su(2) and su(1,1) relations") {
    const ModeSpace s = make_space(2, 8);
    const Op jp = weyl_generator(s, 1, 2, WeylAlgebra::u_n); // J+ = a1^dag a2
    const Op jm = weyl_generator(s, 2, 1, WeylAlgebra::u_n);
    const Op j3 = Complex(0.5) * (number_op(s, 1) - number_op(s, 2));

    // J generators conserve N1+N2, so protect by total occupation <= cutoff-2.
    const Op pt = total_occupation_projector(s, s.cutoff - 2);
    CHECK(protected_gap(commutator(j3, jp), jp, pt) < 1e-14);
    CHECK(protected_gap(commutator(j3, jm), Complex(-1.0) * jm, pt) < 1e-14);
    CHECK(protected_gap(commutator(jp, jm), Complex(2.0) * j3, pt) < 1e-14);

    const Op kp = weyl_generator(s, 1, 2, WeylAlgebra::u_n1_1); // K+ = a1^dag a2^dag
    const Op km = weyl_generator(s, 2, 1, WeylAlgebra::u_n1_1); // K- = a2 a1
    const Op k3 = Complex(0.5) * (number_op(s, 1) + number_op(s, 2) + Op::identity(s));

    const Op p1 = protected_projector(s, 1);
    CHECK(protected_gap(commutator(k3, kp), kp, p1) < 1e-14);
    CHECK(protected_gap(commutator(k3, km), Complex(-1.0) * km, p1) < 1e-14);
    CHECK(protected_gap(commutator(kp, km), Complex(-2.0) * k3, p1) < 1e-13);
}

TEST_CASE("weyl_generator matches the ladder-operator products") {
    const ModeSpace s = make_space(2, 8);
    CHECK(max_abs((weyl_generator(s, 1, 2, WeylAlgebra::u_n) -
                   creator(s, 1) * annihilator(s, 2)).mat) == 0.0);
    CHECK(max_abs((weyl_generator(s, 1, 2, WeylAlgebra::u_n1_1) -
                   creator(s, 1) * creator(s, 2)).mat) == 0.0);
    CHECK(max_abs((weyl_generator(s, 2, 1, WeylAlgebra::u_n1_1) -
                   annihilator(s, 2) * annihilator(s, 1)).mat) == 0.0);
    // E_nn = a_n^dag a_n + 1
    CHECK(max_abs((weyl_generator(s, 2, 2, WeylAlgebra::u_n1_1) -
                   (number_op(s, 2) + Op::identity(s))).mat) == 0.0);
    // Diagonal u(n) generator is the number operator.
    CHECK(max_abs((weyl_generator(s, 1, 1, WeylAlgebra::u_n) - number_op(s, 1)).mat) == 0.0);

    CHECK_THROWS_AS(weyl_generator(s, 0, 1, WeylAlgebra::u_n), ValidationError);
    CHECK_THROWS_AS(weyl_generator(s, 1, 3, WeylAlgebra::u_n), ValidationError);
}

TEST_CASE("u(n) and u(n-1,1) commutation relations under protection") {
    const ModeSpace s = make_space(3, 5);
    const Op p2 = protected_projector(s, 2); // products raise a mode by at most 2

    SUBCASE("u(n)") {
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                for (int k = 1; k <= 3; ++k)
                    for (int l = 1; l <= 3; ++l) {
                        const Op lhs = commutator(weyl_generator(s, i, j, WeylAlgebra::u_n),
                                                  weyl_generator(s, k, l, WeylAlgebra::u_n));
                        Op rhs = Op::zero(s);
                        if (j == k) rhs = rhs + weyl_generator(s, i, l, WeylAlgebra::u_n);
                        if (l == i) rhs = rhs - weyl_generator(s, k, j, WeylAlgebra::u_n);
                        CHECK(protected_gap(lhs, rhs, p2) < 1e-13);
                    }
    }

    SUBCASE("u(n-1,1) with eta = diag(1,...,1,-1)") {
        auto eta = [&](int a, int b) { return a != b ? 0.0 : (a == 3 ? -1.0 : 1.0); };
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                for (int k = 1; k <= 3; ++k)
                    for (int l = 1; l <= 3; ++l) {
                        const Op lhs =
                            commutator(weyl_generator(s, i, j, WeylAlgebra::u_n1_1),
                                       weyl_generator(s, k, l, WeylAlgebra::u_n1_1));
                        Op rhs = Op::zero(s);
                        if (eta(j, k) != 0.0) {
                            rhs = rhs + Complex(eta(j, k)) * weyl_generator(s, i, l,
                                                                            WeylAlgebra::u_n1_1);
                        }
                        if (eta(l, i) != 0.0) {
                            rhs = rhs - Complex(eta(l, i)) * weyl_generator(s, k, j,
                                                                            WeylAlgebra::u_n1_1);
                        }
                        CHECK(protected_gap(lhs, rhs, p2) < 1e-13);
                    }
    }
}

TEST_CASE("protected_projector extremes") {
    const ModeSpace s = make_space(1, 4);
    CHECK(max_abs((protected_projector(s, 0) - Op::identity(s)).mat) == 0.0);

    const Op p1 = protected_projector(s, 1);
    for (long idx = 0; idx < s.dim; ++idx) {
        CHECK(p1.mat(idx, idx) == Complex(idx <= 2 ? 1.0 : 0.0, 0.0));
    }

    const Op vac = protected_projector(s, s.cutoff - 1);
    CHECK(vac.mat(0, 0) == Complex(1.0, 0.0));
    CHECK(vac.mat.cwiseAbs().sum() == 1.0); // vacuum alone

    CHECK_THROWS_AS(protected_projector(s, 4), ValidationError);
    CHECK_THROWS_AS(protected_projector(s, -1), ValidationError);
}

TEST_CASE("tensor embedding agrees with direct multimode construction") {
    const ModeSpace s = make_space(3, 3);
    const ModeSpace local = make_space(1, 3);

    for (int mode = 1; mode <= 3; ++mode) {
        const Matrix embedded = embed_one_mode(s, mode, annihilator(local, 1).mat);
        CHECK(max_abs(embedded - annihilator(s, mode).mat) == 0.0);
    }

    // Two-mode embedding, including the non-adjacent (1,3) pair.
    const ModeSpace local2 = make_space(2, 3);
    const Matrix k_local = (creator(local2, 1) * creator(local2, 2)).mat;
    for (auto [a, b] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
        const Matrix embedded = embed_two_mode(s, a, b, k_local);
        const Matrix direct = (creator(s, a) * creator(s, b)).mat;
        CHECK(max_abs(embedded - direct) == 0.0);
    }

    CHECK_THROWS_AS(embed_two_mode(s, 1, 1, k_local), ValidationError);
    CHECK_THROWS_AS(embed_one_mode(s, 1, k_local), ValidationError);
}
