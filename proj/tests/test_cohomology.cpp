#include <gtest/gtest.h>

#include <random>

#include "twisted/cohomology.hpp"
#include "twisted/fixtures.hpp"

using namespace twisted;

namespace {

const Group& z2() {
    static const auto g = GroupDescriptor::free_abelian(2);
    return g;
}

// signed area of the triangle (p0, p1, p2)
double triangle(const GroupElement& p0, const GroupElement& p1, const GroupElement& p2) {
    return 0.5 * static_cast<double>((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0]));
}

}  // namespace

TEST(GroupCochains, AreaValuesAndFlags) {
    const auto c = area_cochain(z2());
    EXPECT_EQ(c({GroupElement{0, 0}, GroupElement{1, 0}, GroupElement{0, 1}}), Complex(0.5));
    EXPECT_EQ(c({GroupElement{2, 1}, GroupElement{0, 3}, GroupElement{-1, -1}}),
              Complex(triangle(GroupElement{2, 1}, GroupElement{0, 3}, GroupElement{-1, -1})));
    const auto f = check_cochain_flags(c, 300, 1);
    EXPECT_TRUE(f.invariant);
    EXPECT_TRUE(f.alternating);
    EXPECT_THROW(c({GroupElement{0, 0}}), std::invalid_argument);
    EXPECT_THROW(area_cochain(symmetric_group(3)), std::invalid_argument);
}

TEST(GroupCochains, DifferentialSquaresToZero) {
    std::mt19937_64 rng(2);
    for (const auto& g : {z2(), symmetric_group(3)}) {
        for (int degree : {0, 1, 2}) {
            const auto c = random_cochain(g, degree, 99 + static_cast<std::uint64_t>(degree));
            const auto dd = group_differential(group_differential(c));
            const auto pool = g->is_finite() ? g->elements() : g->ball(3);
            for (int i = 0; i < 100; ++i)
                EXPECT_LE(std::abs(dd(random_tuple(pool, static_cast<std::size_t>(degree + 3), rng))), 1e-12);
        }
    }
}

TEST(GroupCochains, AreaAndLinearAreCocycles) {
    std::mt19937_64 rng(3);
    const auto pool = z2()->ball(4);
    const auto da = group_differential(area_cochain(z2()));
    const auto dl = group_differential(linear_cochain(z2(), 1));
    for (int i = 0; i < 200; ++i) {
        EXPECT_LE(std::abs(da(random_tuple(pool, 4, rng))), 1e-12);
        EXPECT_LE(std::abs(dl(random_tuple(pool, 3, rng))), 1e-12);
    }
}

TEST(GroupCochains, RandomCochainIsInvariantAndAlternating) {
    for (const auto& g : {z2(), symmetric_group(3)}) {
        const auto f = check_cochain_flags(random_cochain(g, 2, 5), 300, 6);
        EXPECT_TRUE(f.invariant);
        EXPECT_TRUE(f.alternating);
    }
    // a non-alternating inhomogeneous cochain is detected
    const auto c = from_inhomogeneous(z2(), 1, [](const Tuple& t) { return Complex(static_cast<double>(t[0][0] * t[0][0])); }, "sq");
    EXPECT_FALSE(check_cochain_flags(c, 300, 7).alternating);
    EXPECT_THROW(to_cyclic(c, trivial_multiplier(z2())), std::invalid_argument);
}

TEST(GroupCochains, ByName) {
    EXPECT_EQ(cochain_by_name("linear-z(1)", z2()).name, "linear-z(1)");
    EXPECT_EQ(cochain_by_name("constant", z2(), 2).degree, 2);
    EXPECT_THROW(cochain_by_name("volume", z2()), std::invalid_argument);
    EXPECT_THROW(cochain_by_name("linear-z(2)", z2()), std::invalid_argument);
}

TEST(CyclicCochains, BoundaryMatchesGroupDifferential) {
    std::mt19937_64 rng(4);
    const auto s3 = symmetric_group(3);
    const std::vector<std::pair<GroupCochain, Multiplier>> cases{
        {area_cochain(z2()), magnetic_multiplier(z2(), Rational(1, 3))},
        {random_cochain(z2(), 1, 8), magnetic_multiplier(z2(), Rational(2, 5), Gauge::symmetric)},
        {random_cochain(s3, 2, 9), fixtures::s3_table(s3)},
    };
    for (const auto& [c, sigma] : cases) {
        const auto lhs = cyclic_boundary(to_cyclic(c, sigma));
        const auto rhs = to_cyclic(group_differential(c), sigma);
        const auto pool = sigma.group()->is_finite() ? sigma.group()->elements() : sigma.group()->ball(3);
        for (int i = 0; i < 200; ++i) {
            const auto t = i % 2 ? random_closed_tuple(sigma.group(), pool, static_cast<std::size_t>(c.degree + 2), rng)
                                 : random_tuple(pool, static_cast<std::size_t>(c.degree + 2), rng);
            EXPECT_LE(std::abs(lhs.on_basis(t) - rhs.on_basis(t)), 1e-12) << c.name;
        }
    }
}

TEST(CyclicCochains, CyclicSymmetryOfAreaCochain) {
    // tau(a1, a2, a0) = tau(a0, a1, a2) in degree 2
    std::mt19937_64 rng(5);
    const auto sigma = magnetic_multiplier(z2(), Rational(1, 3));
    const auto tau = to_cyclic(area_cochain(z2()), sigma);
    const auto pool = z2()->ball(3);
    for (int i = 0; i < 200; ++i) {
        const auto t = random_closed_tuple(z2(), pool, 3, rng);
        EXPECT_LE(std::abs(tau.on_basis({t[1], t[2], t[0]}) - tau.on_basis(t)), 1e-12);
    }
}

TEST(CyclicCochains, MultilinearEvaluation) {
    std::mt19937_64 rng(6);
    const auto sigma = magnetic_multiplier(z2(), Rational(1, 4));
    const auto tau = to_cyclic(linear_cochain(z2(), 0), sigma);
    AlgebraElement a(sigma), b(sigma);
    for (const auto& g : z2()->ball(1)) {
        a.add_term(g, random_complex(rng));
        b.add_term(g, random_complex(rng));
    }
    Complex expect = 0.0;
    for (const auto& [g, x] : a.terms())
        for (const auto& [h, y] : b.terms()) expect += x * y * tau.on_basis({g, h});
    EXPECT_LE(std::abs(tau({a, b}) - expect), 1e-13);
    EXPECT_THROW(tau({a}), std::invalid_argument);
}

TEST(CyclicCochains, RegularTraceIsClosed) {
    const auto sigma = magnetic_multiplier(z2(), Rational(1, 3));
    const auto b = cyclic_boundary(regular_cyclic(sigma));
    for (const auto& g : z2()->ball(2))
        for (const auto& h : z2()->ball(2)) EXPECT_LE(std::abs(b.on_basis({g, h})), 1e-15);
}

TEST(CyclicCochains, InjectivityWitness) {
    const auto sigma = magnetic_multiplier(z2(), Rational(1, 3));
    const auto c = area_cochain(z2());
    const auto tau = to_cyclic(c, sigma);
    const Tuple path{GroupElement{2, 0}, GroupElement{1, 3}};
    const auto w = injectivity_witness(z2(), path);
    EXPECT_NEAR(std::abs(tau.on_basis(w)), std::abs(c({z2()->identity(), path[0], path[1]})), 1e-12);
    EXPECT_NEAR(std::abs(tau.on_basis(w)), 3.0, 1e-12);
}

TEST(Sobolev, NormOfDelta) {
    const auto sigma = magnetic_multiplier(z2(), Rational(1, 3));
    EXPECT_DOUBLE_EQ(sobolev_norm(AlgebraElement::delta(sigma, GroupElement{3, -2}), 1.0), 6.0);
    EXPECT_DOUBLE_EQ(sobolev_norm(AlgebraElement::delta(sigma, GroupElement{3, -2}, 2.0), 2.0), 72.0);
    EXPECT_THROW(sobolev_norm(AlgebraElement::unit(sigma), -1.0), std::invalid_argument);
}

TEST(Sobolev, DerivationChainIdentityAndBound) {
    std::mt19937_64 rng(7);
    const auto sigma = magnetic_multiplier(z2(), Rational(2, 7));
    for (int i = 0; i < 10; ++i) {
        const auto a = random_element(sigma, rng, 3);
        const auto p = derivation_chain(a, 3, 3);
        EXPECT_TRUE(p.exact_identity);
        for (int j = 0; j <= 3; ++j) {
            double expect = 0.0;
            for (const auto& [g, c] : a.terms()) expect += std::norm(c) * std::pow(static_cast<double>(z2()->word_length(g)), 2.0 * j);
            EXPECT_NEAR(p.derivation_norms[static_cast<std::size_t>(j)], std::sqrt(expect), 1e-10);
        }
        EXPECT_LE(p.bound_ratio, p.constant_cauchy_schwarz + 1e-12);
        EXPECT_DOUBLE_EQ(p.constant_cauchy_schwarz, std::sqrt(20.0));
        EXPECT_DOUBLE_EQ(p.constant_max_binomial, 3.0);
    }
    EXPECT_THROW(derivation_chain(AlgebraElement::delta(sigma, GroupElement{3, 3}), 1, 4), std::invalid_argument);
}

TEST(Growth, PolynomialDegrees) {
    EXPECT_NEAR(growth_fit(linear_cochain(z2(), 0), 8).degree, 1.0, 0.25);
    EXPECT_NEAR(growth_fit(area_cochain(z2()), 6).degree, 2.0, 0.35);
    EXPECT_NEAR(class_growth_fit(z2(), GroupElement{1, 1}, 6).degree, 0.0, 1e-12);
    EXPECT_NEAR(growth_fit_values({1, 4, 9, 16, 25}).degree, 2.0, 1e-12);
    EXPECT_THROW(growth_fit(constant_cochain(z2(), 1, 0.0), 4), std::invalid_argument);
}
