#include <gtest/gtest.h>

#include <random>

#include "twisted/fixtures.hpp"
#include "twisted/multiplier.hpp"

using namespace twisted;

namespace {

const Group& z2() {
    static const auto g = GroupDescriptor::free_abelian(2);
    return g;
}

// Landau magnetic phase written out by hand: theta * a_1 * b_2.
Rational landau_oracle(const Rational& theta, const GroupElement& a, const GroupElement& b) {
    return (theta * Rational(a[0] * b[1])).mod1();
}

}  // namespace

TEST(Multiplier, MagneticValuesAtHalfFlux) {
    const auto landau = magnetic_multiplier(z2(), Rational(1, 2));
    const auto sym = magnetic_multiplier(z2(), Rational(1, 2), Gauge::symmetric);
    EXPECT_EQ(landau({1, 0}, {0, 1}), Phase::turns(Rational(1, 2)));
    EXPECT_EQ(sym({1, 0}, {0, 1}), Phase::turns(Rational(1, 4)));
    EXPECT_EQ(sym({0, 1}, {1, 0}), Phase::turns(Rational(-1, 4)));
}

TEST(Multiplier, LandauMatchesOracle) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> c(-9, 9);
    for (const auto& theta : {Rational(1, 3), Rational(2, 7), Rational(-5, 11)}) {
        const auto s = magnetic_multiplier(z2(), theta);
        for (int i = 0; i < 500; ++i) {
            const GroupElement a{c(rng), c(rng)}, b{c(rng), c(rng)};
            EXPECT_EQ(s(a, b), Phase::turns(landau_oracle(theta, a, b)));
        }
    }
}

TEST(Multiplier, CocycleCheckOnConstructors) {
    const auto s3 = symmetric_group(3);
    for (const auto& m : {magnetic_multiplier(z2(), Rational(1, 3)), magnetic_multiplier(z2(), Rational(3, 8), Gauge::symmetric),
                          power_family(magnetic_multiplier(z2(), Rational(1, 5)), Rational(2, 3)),
                          conjugate(magnetic_multiplier(z2(), Rational(1, 3))), fixtures::s3_table(s3),
                          coboundary(fixtures::s3_twist(s3))}) {
        const auto rep = verify_cocycle(m, 500, 9);
        EXPECT_TRUE(rep.pass) << m.key() << ": " << rep.detail;
    }
}

TEST(Multiplier, CorruptedTableHasWitness) {
    const auto s3 = symmetric_group(3);
    const auto rep = verify_cocycle(fixtures::corrupted_s3_table(s3), 1, 1);
    ASSERT_FALSE(rep.pass);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_TRUE(rep.exhaustive);
    const auto& w = *rep.witness;
    const auto m = fixtures::corrupted_s3_table(s3);
    const auto lhs = m(w[0], w[1]) * m(s3->multiply(w[0], w[1]), w[2]);
    const auto rhs = m(w[1], w[2]) * m(w[0], s3->multiply(w[1], w[2]));
    EXPECT_FALSE(lhs == rhs);
}

TEST(Multiplier, GaugeChangeRelatesLandauAndSymmetric) {
    for (const auto& theta : {Rational(1, 3), Rational(1, 2), Rational(4, 9)})
        EXPECT_TRUE(is_cohomologous_via(magnetic_multiplier(z2(), theta, Gauge::symmetric), magnetic_multiplier(z2(), theta),
                                        CoboundaryData::gauge_change(z2(), theta)));
}

TEST(Multiplier, HalfFluxIsNotTrivializedByRandomCochains) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::int64_t> c(-3, 3), n(0, 7);
    const auto half = magnetic_multiplier(z2(), Rational(1, 2));
    for (int i = 0; i < 50; ++i) {
        std::map<GroupElement, Rational> entries;
        for (int k = 0; k < 6; ++k) entries[GroupElement{c(rng), c(rng)}] = Rational(n(rng), 8);
        entries.erase(GroupElement{0, 0});
        EXPECT_FALSE(is_cohomologous_via(half, trivial_multiplier(z2()), CoboundaryData::from_entries(z2(), entries)));
    }
    // commutator phase is a class invariant: -1 at theta = 1/2
    EXPECT_EQ(commutator_phase(half), Phase::turns(Rational(1, 2)));
}

TEST(Multiplier, GeometricMatchesClosedFormAndIgnoresBasePoint) {
    for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
        LatticeGeometricData d;
        d.theta = Rational(2, 5);
        d.gauge = gauge;
        const auto ref = magnetic_multiplier(z2(), d.theta, gauge);
        for (std::int64_t x : {-4, 0, 3})
            for (std::int64_t y : {-1, 2}) {
                d.base_point = {Rational(x), Rational(y)};
                EXPECT_TRUE(equal_on_comparison_set(geometric_multiplier(z2(), d), ref)) << gauge_name(gauge) << x << "," << y;
            }
    }
}

TEST(Multiplier, GeometricFluxConsistency) {
    LatticeGeometricData d;
    d.theta = Rational(1, 3);
    for (std::int64_t x = -2; x <= 2; ++x)
        for (std::int64_t y = -2; y <= 2; ++y) EXPECT_EQ(d.plaquette_flux({Rational(x), Rational(y)}), d.theta);
    EXPECT_FALSE(d.consistency_violation().has_value());
}

TEST(Multiplier, PowerFamilyComposition) {
    const auto base = magnetic_multiplier(z2(), Rational(1, 3));
    EXPECT_TRUE(equal_on_comparison_set(power_family(base, Rational(0)), trivial_multiplier(z2())));
    EXPECT_TRUE(equal_on_comparison_set(power_family(base, Rational(1, 2)), magnetic_multiplier(z2(), Rational(1, 6))));
    EXPECT_TRUE(equal_on_comparison_set(multiply(power_family(base, Rational(1, 4)), power_family(base, Rational(3, 4))), base));
    EXPECT_TRUE(equal_on_comparison_set(multiply(base, conjugate(base)), trivial_multiplier(z2())));
}

TEST(Multiplier, CoboundaryOfCharacterIsTrivial) {
    const auto chi = CoboundaryData::zk_character(z2(), {Rational(1, 7), Rational(3, 5)});
    EXPECT_TRUE(equal_on_comparison_set(coboundary(chi), trivial_multiplier(z2())));
    const auto z = CoboundaryData::from_entries(z2(), {{GroupElement{1, 0}, Rational(1, 4)}});
    EXPECT_FALSE(equal_on_comparison_set(coboundary(z), trivial_multiplier(z2())));
}

TEST(Multiplier, CoboundaryTwistIsSigmaTimesDz) {
    const auto base = magnetic_multiplier(z2(), Rational(1, 3));
    const auto z = CoboundaryData::from_entries(z2(), {{GroupElement{1, 1}, Rational(1, 5)}, {GroupElement{0, 2}, Rational(2, 3)}});
    const auto tw = coboundary_twist(base, z);
    for (const auto& a : z2()->ball(3))
        for (const auto& b : z2()->ball(3))
            EXPECT_EQ(tw(a, b), base(a, b) * z(a) * z(b) * z(z2()->multiply(a, b)).conj());
}

TEST(Multiplier, ProductAndPullback) {
    const auto s3 = symmetric_group(3);
    const auto prod = GroupDescriptor::product(z2(), s3);
    const auto mag = magnetic_multiplier(z2(), Rational(1, 3));
    const auto table = fixtures::s3_table(s3);
    const auto pm = product_multiplier(prod, mag, table);
    for (const auto& a : prod->ball(2))
        for (const auto& b : prod->ball(2)) {
            const auto [al, ar] = prod->split(a);
            const auto [bl, br] = prod->split(b);
            EXPECT_EQ(pm(a, b), mag(al, bl) * table(ar, br));
        }
    EXPECT_TRUE(verify_cocycle(pullback_from_left(prod, mag), 300, 2).pass);
}

TEST(Multiplier, ApproximateFluxIsFlaggedInexact) {
    const auto s = magnetic_multiplier_approx(z2(), std::sqrt(2.0) - 1.0);
    EXPECT_FALSE(s({1, 0}, {0, 1}).exact());
    EXPECT_FALSE(s.lift({1, 0}, {0, 1}).has_value());
    EXPECT_TRUE(verify_cocycle(s, 300, 4).pass);
}
