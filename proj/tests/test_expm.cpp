// Matrix exponential core: Pade value, blockwise tangent, sector splitting.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hqc/expm.hpp"

#include <random>

#include "support/oracles.hpp"

using namespace hqc;

TEST_CASE("exp(0) is the identity, exactly") {
    const Matrix z = Matrix::Zero(12, 12);
    CHECK((expm_pade(z) - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("expm matches the eigendecomposition oracle for anti-Hermitian input") {
    std::mt19937_64 gen(41);
    for (long n : {4L, 32L, 96L, 256L}) {
        const Matrix x = oracles::random_antihermitian(n, gen, 0.7);
        const Matrix u = expm_pade(x);
        CHECK((u.adjoint() * u - Matrix::Identity(n, n)).norm() < 1e-12);
        CHECK((u - oracles::eigen_expm_antihermitian(x)).norm() < 1e-12);
    }
}

TEST_CASE("scaling path: large-norm input still matches the oracle") {
    std::mt19937_64 gen(7);
    const Matrix x = oracles::random_antihermitian(24, gen, 30.0); // forces several squarings
    const Matrix u = expm_pade(x);
    CHECK((u.adjoint() * u - Matrix::Identity(24, 24)).norm() < 1e-11);
    CHECK((u - oracles::eigen_expm_antihermitian(x)).norm() < 5e-11);
}

TEST_CASE("tangent equals the explicit block-augmented exponential") {
    std::mt19937_64 gen(11);
    const long n = 20;
    const Matrix a = oracles::random_antihermitian(n, gen, 0.8);
    const Matrix da = oracles::random_antihermitian(n, gen, 1.0);

    auto [value, tangent] = expm_pade_tangent(a, da);
    CHECK((value - expm_pade(a)).norm() < 1e-14);

    Matrix aug = Matrix::Zero(2 * n, 2 * n);
    aug.topLeftCorner(n, n) = a;
    aug.bottomRightCorner(n, n) = a;
    aug.topRightCorner(n, n) = da;
    const Matrix eaug = expm_pade(aug);
    CHECK((eaug.topLeftCorner(n, n) - value).norm() < 1e-13);
    CHECK((eaug.topRightCorner(n, n) - tangent).norm() < 1e-12);
    CHECK(eaug.bottomLeftCorner(n, n).norm() == 0.0);
}

TEST_CASE("tangent matches finite differences of the exponential") {
    std::mt19937_64 gen(13);
    const long n = 16;
    const Matrix a = oracles::random_antihermitian(n, gen, 0.6);
    const Matrix da = oracles::random_antihermitian(n, gen, 1.0);
    auto [value, tangent] = expm_pade_tangent(a, da);
    (void)value;

    const double h = 1e-4;
    const Matrix fd = (expm_pade(a + 2.0 * h * da) * (-1.0) + 8.0 * expm_pade(a + h * da) -
                       8.0 * expm_pade(a - h * da) + expm_pade(a - 2.0 * h * da)) /
                      (12.0 * h);
    CHECK((tangent - fd).norm() / tangent.norm() < 1e-9);
}

TEST_CASE("derivative of exp at zero is the tangent itself") {
    std::mt19937_64 gen(17);
    const Matrix da = oracles::random_antihermitian(10, gen, 1.0);
    auto [value, tangent] = expm_pade_tangent(Matrix::Zero(10, 10), da);
    CHECK((value - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((tangent - da).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sectored exponential preserves the block structure exactly") {
    // Two interleaved sectors; off-sector entries must stay identically zero.
    const long n = 10;
    std::mt19937_64 gen(19);
    std::vector<int> sectors(n);
    for (long i = 0; i < n; ++i) sectors[static_cast<std::size_t>(i)] = static_cast<int>(i % 2);

    Matrix g = Matrix::Zero(n, n);
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) {
            if ((r % 2) == (c % 2)) {
                g(r, c) = Complex(2.0 * oracles::uniform01(gen) - 1.0,
                                  2.0 * oracles::uniform01(gen) - 1.0);
            }
        }
    }
    g = antihermitian_part(g);

    const Matrix e = expm_sectored(g, sectors);
    CHECK((e - expm_pade(g)).norm() < 1e-13);
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) {
            if ((r % 2) != (c % 2)) CHECK(e(r, c) == Complex(0.0, 0.0));
        }
    }

    const Matrix dg = antihermitian_part(g * Complex(0.0, 0.3));
    auto [sv, sd] = expm_sectored_tangent(g, dg, sectors);
    auto [pv, pd] = expm_pade_tangent(g, dg);
    CHECK((sv - pv).norm() < 1e-13);
    CHECK((sd - pd).norm() < 1e-12);

    CHECK_THROWS_AS(expm_sectored(g, std::vector<int>(3, 0)), ValidationError);
}

TEST_CASE("antihermitian_part is exact and idempotent") {
    std::mt19937_64 gen(23);
    Matrix x(6, 6);
    for (long r = 0; r < 6; ++r)
        for (long c = 0; c < 6; ++c)
            x(r, c) = Complex(oracles::uniform01(gen), oracles::uniform01(gen));

    const Matrix s = antihermitian_part(x);
    CHECK((s + s.adjoint()).cwiseAbs().maxCoeff() == 0.0); // bitwise anti-Hermitian
    CHECK((antihermitian_part(s) - s).cwiseAbs().maxCoeff() == 0.0);
    CHECK(antihermitian_defect(s) == 0.0);
    CHECK(antihermitian_defect(x) > 0.0);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(expm_pade(Matrix::Zero(2, 3)), ValidationError);
    CHECK_THROWS_AS(expm_pade_tangent(Matrix::Zero(2, 2), Matrix::Zero(3, 3)), ValidationError);
}
