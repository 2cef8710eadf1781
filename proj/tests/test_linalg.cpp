#include <gtest/gtest.h>

#include <random>

#include "twisted/linalg.hpp"

using namespace twisted;

TEST(Eigh, ResidualAndOrthonormality) {
    std::mt19937_64 rng(1);
    for (int n : {1, 2, 5, 17, 40}) {
        const auto a = random_hermitian(n, rng);
        const auto ed = eigh(a);
        EXPECT_LE(ed.residual, 1e-11 * std::max(1.0, a.norm()));
        EXPECT_LE((ed.vectors.adjoint() * ed.vectors - CMatrix::Identity(n, n)).norm(), 1e-11);
        EXPECT_TRUE(std::is_sorted(ed.values.data(), ed.values.data() + n));
    }
}

TEST(Eigh, AgreesWithEigenSolver) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_hermitian(12, rng);
        const Eigen::SelfAdjointEigenSolver<CMatrix> ref(a, Eigen::EigenvaluesOnly);
        EXPECT_LE((eigvalsh(a) - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Eigh, KnownSpectra) {
    CMatrix pauli_y(2, 2);
    pauli_y << 0, Complex(0, -1), Complex(0, 1), 0;
    const auto ev = eigvalsh(pauli_y);
    EXPECT_NEAR(ev(0), -1.0, 1e-15);
    EXPECT_NEAR(ev(1), 1.0, 1e-15);
    // path graph on n vertices: 2 cos(pi k / (n + 1))
    const int n = 9;
    CMatrix path = CMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) path(i, i + 1) = path(i + 1, i) = 1.0;
    const auto pv = eigvalsh(path);
    for (int k = 1; k <= n; ++k) EXPECT_NEAR(pv(n - k), 2 * std::cos(std::numbers::pi * k / (n + 1)), 1e-13);
}

TEST(Eigh, DeterministicAndValidating) {
    std::mt19937_64 rng(3);
    const auto a = random_hermitian(15, rng);
    const auto x = eigh(a), y = eigh(a);
    EXPECT_EQ(x.values, y.values);
    EXPECT_EQ(x.vectors, y.vectors);
    CMatrix bad = a;
    bad(0, 1) += 1.0;
    EXPECT_THROW((void)eigh(bad), std::invalid_argument);
    EXPECT_THROW((void)eigh(CMatrix::Zero(2, 3)), ShapeError);
}

TEST(Linalg, MatrixFunctionAndKron) {
    std::mt19937_64 rng(4);
    const auto a = random_hermitian(6, rng);
    const CMatrix sq = matrix_function(a, [](double x) { return x * x; });
    EXPECT_LE((sq - a * a).norm(), 1e-11);
    const CMatrix i2 = CMatrix::Identity(2, 2);
    EXPECT_EQ(kron(i2, a).rows(), 12);
    EXPECT_LE((kron(i2, a).block(6, 6, 6, 6) - a).norm(), 0.0);
    EXPECT_EQ(kernel_dimension((RVector(3) << 0.0, 1e-12, 1.0).finished(), 1e-9), 2);
}

TEST(Linalg, RandomUnitaryIsUnitary) {
    std::mt19937_64 rng(5);
    for (int n : {1, 3, 8}) {
        const auto u = random_unitary(n, rng);
        EXPECT_LE((u.adjoint() * u - CMatrix::Identity(n, n)).norm(), 1e-12);
    }
}
