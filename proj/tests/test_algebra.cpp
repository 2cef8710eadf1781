#include <gtest/gtest.h>

#include <random>

#include "twisted/algebra.hpp"
#include "twisted/fixtures.hpp"
#include "twisted/traces.hpp"

using namespace twisted;

namespace {

// Twisted convolution written directly from the defining sum.
AlgebraElement convolve_oracle(const AlgebraElement& a, const AlgebraElement& b) {
    const auto& sigma = a.multiplier();
    const auto& G = a.group();
    std::map<GroupElement, Complex> acc;
    for (const auto& [g, x] : a.terms())
        for (const auto& [h, y] : b.terms()) acc[G->multiply(g, h)] += x * y * sigma(g, h).value();
    AlgebraElement out = AlgebraElement::zero(sigma);
    for (const auto& [g, c] : acc) out = out + AlgebraElement::delta(sigma, g, c);
    return out;
}

}  // namespace

TEST(Algebra, ConvolutionMatchesDefiningSum) {
    std::mt19937_64 rng(21);
    for (const auto& fx : fixtures::algebra_fixtures())
        for (int i = 0; i < 100; ++i) {
            const auto a = random_element(fx.sigma, rng), b = random_element(fx.sigma, rng);
            EXPECT_LE((a * b).distance(convolve_oracle(a, b)), 1e-12) << fx.name;
        }
}

TEST(Algebra, StarOfDelta) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
    for (const auto& g : z2->ball(3)) {
        const auto d = AlgebraElement::delta(sigma, g).star();
        const auto ginv = z2->inverse(g);
        EXPECT_LE(std::abs(d.coefficient(ginv) - sigma(g, ginv).conj().value()), 1e-15);
        EXPECT_EQ(d.support_size(), 1u);
    }
}

TEST(Algebra, CommutationRelationOfGenerators) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    for (const auto& theta : {Rational(1, 3), Rational(2, 5)}) {
        const auto sigma = magnetic_multiplier(z2, theta);
        const auto u = AlgebraElement::delta(sigma, {1, 0}), v = AlgebraElement::delta(sigma, {0, 1});
        // U V = e^{2 pi i theta} V U
        EXPECT_LE((u * v).distance(Phase::turns(theta).value() * (v * u)), 1e-14);
    }
}

TEST(Algebra, MixingMultipliersIsRejected) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto a = AlgebraElement::delta(magnetic_multiplier(z2, Rational(1, 3)), {1, 0});
    const auto b = AlgebraElement::delta(trivial_multiplier(z2), {1, 0});
    EXPECT_THROW((void)(a * b), std::invalid_argument);
    EXPECT_THROW((void)(a + b), std::invalid_argument);
}

TEST(Algebra, ProjectiveIsomorphismOnDeltas) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
    const auto z = CoboundaryData::from_entries(z2, {{GroupElement{1, 0}, Rational(1, 5)}, {GroupElement{2, 1}, Rational(1, 2)}});
    const auto sigma_prime = coboundary_twist(sigma, z);
    for (const auto& g : z2->ball(3)) {
        const auto img = apply_projective_iso(z, AlgebraElement::delta(sigma_prime, g), sigma);
        EXPECT_TRUE(img.multiplier().same_as(sigma));
        EXPECT_LE(std::abs(img.coefficient(g) - z(g).value()), 1e-15);
    }
}

TEST(Algebra, NormsAndPowers) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto sigma = magnetic_multiplier(z2, Rational(1, 4));
    const auto a = AlgebraElement::delta(sigma, {1, 0}, Complex(3, 4)) + AlgebraElement::delta(sigma, {0, 0}, 1.0);
    EXPECT_DOUBLE_EQ(a.l1_norm(), 6.0);
    EXPECT_DOUBLE_EQ(a.l2_norm(), std::sqrt(26.0));
    EXPECT_EQ(a.sup_support_length(), 1);
    EXPECT_LE(a.power(3).distance(a * a * a), 1e-12);
    EXPECT_LE(a.power(0).distance(AlgebraElement::unit(sigma)), 0.0);
}

TEST(AlgebraMatrix, ProductAndAdjoint) {
    std::mt19937_64 rng(8);
    const auto z2 = GroupDescriptor::free_abelian(2);
    const auto sigma = magnetic_multiplier(z2, Rational(1, 3));
    auto rnd = [&] {
        AlgebraMatrix m(sigma, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) m(i, j) = random_element(sigma, rng, 2, 3);
        return m;
    };
    for (int k = 0; k < 50; ++k) {
        const auto a = rnd(), b = rnd(), c = rnd();
        EXPECT_LE(((a * b) * c).distance(a * (b * c)), 1e-10);
        EXPECT_LE((a * b).adjoint().distance(b.adjoint() * a.adjoint()), 1e-11);
        EXPECT_LE((AlgebraMatrix::identity(sigma, 2) * a).distance(a), 1e-14);
    }
}
