#include <gtest/gtest.h>

#include <random>

#include "twisted/spectral.hpp"

using namespace twisted;

namespace {

CMatrix diag(std::initializer_list<double> v) {
    RVector d(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) d(i++) = x;
    return d.cast<Complex>().asDiagonal();
}

// eta from the heat integral with the t-integral done in closed form per eigenvalue:
// (1/sqrt(pi)) int_0^T l e^{-t l^2} t^{-1/2} dt / 2 = sign(l) erf(|l| sqrt(T)) / 2
double eta_truncated_oracle(const RVector& ev, double t_max) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) s += 0.5 * (ev(i) > 0 ? 1.0 : -1.0) * std::erf(std::fabs(ev(i)) * std::sqrt(t_max));
    return s;
}

}  // namespace

TEST(Eta, ClosedFormValues) {
    EXPECT_EQ(eta_closed_form(diag({1, -2, 3})), 0.5);
    EXPECT_EQ(eta_closed_form(diag({1, -2, 3}), 1e-9, EtaNormalization::full), 1.0);
    EXPECT_EQ(eta_closed_form(diag({0, 1, 2})), 1.0);
    EXPECT_EQ(eta_closed_form(diag({1e-12, -1, 1})), 0.0);
    EXPECT_EQ(eta_closed_form(CMatrix(CMatrix::Zero(3, 3))), 0.0);
    EXPECT_THROW(parse_eta_normalization("double"), std::invalid_argument);
}

TEST(Eta, QuadratureMatchesClosedForm) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 40; ++i) {
        const auto a = random_hermitian(8, rng);
        const auto ev = eigvalsh(a);
        const auto q = eta_quadrature(ev);
        EXPECT_NEAR(q.eta, eta_closed_form(ev), 1e-6);
        EXPECT_LE(q.tail_bound, 1e-10);
    }
}

TEST(Eta, QuadratureAtFixedCutoffMatchesErfOracle) {
    // tail erfc(2 * sqrt(4)) / 2 ~ 8e-9 stays visible against the erf oracle
    const RVector ev = (RVector(4) << 2.0, -3.0, 4.5, 5.0).finished();
    const double t_max = 4.0;
    const auto q = eta_quadrature(ev, t_max, 64, 1e-9, 1e-6);
    EXPECT_GT(std::fabs(q.eta - eta_closed_form(ev)), 1e-9);
    EXPECT_NEAR(q.eta, eta_truncated_oracle(ev, t_max), 1e-9);
    EXPECT_THROW(eta_quadrature(ev, 0.01), std::domain_error);
}

TEST(Eta, OddAndConjugationInvariant) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 30; ++i) {
        const auto a = random_hermitian(7, rng);
        const auto u = random_unitary(7, rng);
        EXPECT_EQ(eta_closed_form(CMatrix(-a)), -eta_closed_form(a));
        EXPECT_EQ(eta_closed_form(CMatrix(u.adjoint() * a * u)), eta_closed_form(a));
    }
}

TEST(Eta, HarperAtZeroFluxIsSymmetric) {
    // the spectrum of the zero-flux Laplacian is symmetric, so eta vanishes
    const auto h = harper_element(Rational(0));
    EXPECT_NEAR(eta_operator_bloch(h, 16).eta, 0.0, 1e-12);
    EXPECT_NEAR(eta_operator_truncation(h, 4).eta, 0.0, 1e-12);
}

TEST(Eta, ShiftedHarperBlochAgreesWithTruncation) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
    const auto h = harper_element(sigma, {1.0, 1.0, 0.0, 0.5});
    const auto b = eta_operator_bloch(h, 32);
    const auto t = eta_operator_truncation(h, 10);
    EXPECT_LE(b.error_bound, 1e-2);
    EXPECT_NEAR(b.eta, t.eta, 0.05);
    EXPECT_GT(b.eta, 0.0);
    EXPECT_THROW(eta_operator_bloch(AlgebraElement::delta(sigma, GroupElement{1, 0}), 8), std::invalid_argument);
}

TEST(SpectralFlow, SingleCrossing) {
    const auto r = spectral_flow(SpectralPath::linear(diag({-0.5}), diag({0.5})));
    EXPECT_EQ(r.tracked, 1);
    EXPECT_EQ(r.formula, 1);
    const auto back = spectral_flow(SpectralPath::linear(diag({0.5, -2}), diag({-0.5, 3})));
    EXPECT_EQ(back.tracked, 0);
    EXPECT_EQ(back.formula, 0);
}

TEST(SpectralFlow, TrackingAgreesWithEndpointFormula) {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        const auto r = spectral_flow(SpectralPath::linear(random_hermitian(6, rng), random_hermitian(6, rng)));
        EXPECT_EQ(r.tracked, r.formula);
    }
}

TEST(SpectralFlow, KernelAtEndpointCountsAsNonNegative) {
    const auto r = spectral_flow(SpectralPath::linear(diag({-1, 2}), diag({0, 2})));
    EXPECT_EQ(r.kernel_end, 1);
    EXPECT_EQ(r.tracked, 1);
    EXPECT_EQ(r.formula, 1);
}

TEST(SpectralFlow, PiecewiseSamples) {
    const auto p = SpectralPath::samples({0.0, 0.5, 1.0}, {diag({-1, -1}), diag({1, -1}), diag({1, 1})});
    EXPECT_EQ(spectral_flow(p).tracked, 2);
    EXPECT_THROW(SpectralPath::samples({0.0, 0.7}, {diag({1}), diag({2})}), std::invalid_argument);
    EXPECT_THROW(SpectralPath::linear(diag({1}), diag({1, 2})), ShapeError);
}

TEST(McKeanSinger, SupertraceEqualsIndex) {
    std::mt19937_64 rng(24);
    for (int rows : {2, 3, 5}) {
        // D+ : C^4 -> C^rows of full rank min(4, rows)
        const CMatrix dp = random_complex_matrix(rows, 4, rng);
        const auto r = mckean_singer(graded_odd(dp), log_grid(1e-3, 1e3, 13));
        EXPECT_EQ(r.index, 4 - rows);
        for (double s : r.supertrace) EXPECT_NEAR(s, 4 - rows, 1e-8);
    }
    CMatrix not_odd = diag({1, 1});
    Eigen::VectorXi z(2);
    z << 1, -1;
    EXPECT_THROW(mckean_singer(HermitianOperator(not_odd, z), {1.0}), std::invalid_argument);
}

TEST(ProductFormula, EtaMultipliesByIndex) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 20; ++i) {
        const auto dl = random_hermitian(4, rng);
        const auto dn = graded_odd(random_complex_matrix(1 + i % 3, 3, rng));
        const auto r = product_eta_check(dl, dn);
        EXPECT_NEAR(r.lhs, r.rhs, 1e-8);
    }
}

TEST(Betti, CycleGraph) {
    const CMatrix d = cycle_incidence(6);
    const auto r = twisted_betti(d.adjoint() * d, d * d.adjoint());
    EXPECT_EQ(r.b_even, 1.0);
    EXPECT_EQ(r.b_odd, 1.0);
    EXPECT_EQ(r.euler(), 0.0);
    EXPECT_THROW(twisted_betti(diag({1e-9, 1}), diag({1})), KernelAmbiguity);
    EXPECT_THROW(twisted_betti(diag({-1, 1}), diag({1})), std::invalid_argument);
}
