#include <gtest/gtest.h>

#include <random>

#include "twisted/rational.hpp"

using namespace twisted;

namespace {

// Cross-multiplied equality p/q == r/s without reduction.
bool same_value(__int128 p, __int128 q, const Rational& r) { return p * r.den() == q * r.num(); }

}  // namespace

TEST(Rational, ParsesAndNormalizes) {
    EXPECT_EQ(Rational::parse("2/4"), Rational(1, 2));
    EXPECT_EQ(Rational::parse("-3/-9"), Rational(1, 3));
    EXPECT_EQ(Rational::parse(" 5 "), Rational(5));
    EXPECT_EQ(Rational::parse("3/-6").str(), "-1/2");
    EXPECT_EQ(Rational(0, 7).den(), 1);
    EXPECT_THROW(Rational::parse("1.5"), std::invalid_argument);
    EXPECT_THROW(Rational::parse("1/"), std::invalid_argument);
    EXPECT_THROW(Rational::parse(""), std::invalid_argument);
    EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, ArithmeticMatchesCrossMultiplication) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t a = num(rng), b = den(rng), c = num(rng), d = den(rng);
        const Rational x(a, b), y(c, d);
        EXPECT_TRUE(same_value(static_cast<__int128>(a) * d + static_cast<__int128>(c) * b, static_cast<__int128>(b) * d, x + y));
        EXPECT_TRUE(same_value(static_cast<__int128>(a) * d - static_cast<__int128>(c) * b, static_cast<__int128>(b) * d, x - y));
        EXPECT_TRUE(same_value(static_cast<__int128>(a) * c, static_cast<__int128>(b) * d, x * y));
        if (c != 0) EXPECT_TRUE(same_value(static_cast<__int128>(a) * d, static_cast<__int128>(b) * c, x / y));
        EXPECT_EQ(x < y, static_cast<__int128>(a) * d < static_cast<__int128>(c) * b);
        EXPECT_GT((x + y).den(), 0);
    }
}

TEST(Rational, Mod1LandsInUnitInterval) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::int64_t> num(-100000, 100000), den(1, 97);
    for (int i = 0; i < 2000; ++i) {
        const Rational x(num(rng), den(rng));
        const auto m = x.mod1();
        EXPECT_GE(m, Rational(0));
        EXPECT_LT(m, Rational(1));
        EXPECT_TRUE((x - m).is_integer());
    }
}

TEST(Rational, OverflowIsReported) {
    const Rational big(INT64_MAX / 2, 1);
    EXPECT_THROW((void)(big * big), std::overflow_error);
    EXPECT_THROW((void)(Rational(1, INT64_MAX / 3) * Rational(1, INT64_MAX / 5)), std::overflow_error);
}

TEST(Phase, ExactTurns) {
    const auto i = Phase::turns(Rational(1, 4));
    EXPECT_NEAR(std::abs(i.value() - Complex(0, 1)), 0.0, 1e-15);
    EXPECT_EQ(i * i * i * i, Phase::one());
    EXPECT_EQ(Phase::turns(Rational(5, 4)), i);
    EXPECT_EQ(i.conj(), Phase::turns(Rational(3, 4)));
    EXPECT_EQ(Phase::turns(Rational(1, 3)) / Phase::turns(Rational(1, 3)), Phase::one());
    EXPECT_TRUE(Phase::turns(Rational(-2)).is_one());
}

TEST(Phase, ExactValuesAgreeWithPolar) {
    for (int q = 1; q <= 24; ++q)
        for (int p = 0; p < q; ++p) {
            const auto v = Phase::turns(Rational(p, q)).value();
            EXPECT_NEAR(std::abs(v - std::polar(1.0, 2 * std::numbers::pi * p / q)), 0.0, 1e-14) << p << "/" << q;
        }
}

TEST(Phase, ApproximateDistance) {
    const auto a = Phase::approx_turns(0.1);
    const auto b = Phase::approx_turns(1.1 + 1e-12);
    EXPECT_FALSE(a.exact());
    EXPECT_LT(a.distance(b), 1e-10);
    EXPECT_NEAR(Phase::approx_turns(0.25).distance(Phase::turns(Rational(3, 4))), 0.5, 1e-14);
}
