#include <gtest/gtest.h>

#include <random>

#include "twisted/mishchenko.hpp"

using namespace twisted;

namespace {

CoverData circle(std::vector<std::int64_t> jumps, int grid = 256) {
    CircleCoverSpec s;
    s.grid = grid;
    s.patches = static_cast<int>(jumps.size());
    s.jumps = std::move(jumps);
    return circle_cover(s);
}

// Under the character delta_n -> e^{ikn} of Z the field P(x) becomes an m x m matrix.
CMatrix evaluate_at_character(const ProjectionField& f, std::size_t point, double k) {
    const auto m = static_cast<Eigen::Index>(f.patches);
    CMatrix out = CMatrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            if (const auto& e = f.entries[point][static_cast<std::size_t>(i * m + j)])
                out(i, j) = e->coeff * e->phase.value() * std::polar(1.0, k * static_cast<double>(e->g[0]));
    return out;
}

}  // namespace

TEST(Cover, CircleCoversAreValid) {
    for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{0}, {1, 0}, {1, 1}, {0, 1, 0}, {2, -1, 0, 0}}) {
        const auto c = circle(jumps);
        const auto r = check_cover(c);
        EXPECT_TRUE(r.pass) << r.detail;
        EXPECT_LE(r.partition_defect, 1e-14);
    }
    EXPECT_TRUE(circle({1, 0}).has_lifts);
    EXPECT_FALSE(circle({1, 1}).has_lifts);
}

TEST(Cover, InvalidSpecsAndCorruption) {
    CircleCoverSpec s;
    s.jumps = {1};
    EXPECT_THROW(circle_cover(s), std::invalid_argument);
    s.jumps = {1, 0};
    s.ramp = 0.6;
    EXPECT_THROW(circle_cover(s), std::invalid_argument);
    EXPECT_THROW(circle({1}), std::invalid_argument);

    auto c = circle({1, 0}, 64);
    for (auto& p : c.points)
        if (p.transition.count({1, 0})) {
            p.transition[{1, 0}] = GroupElement{5};
            break;
        }
    EXPECT_FALSE(check_cover(c).pass);
    EXPECT_THROW(build_projection(c, trivial_multiplier(c.group)), std::invalid_argument);
}

TEST(Projection, CharacterImagesAreRankOneProjections) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> kd(0, 2 * std::numbers::pi);
    for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 1}, {0, 1, 0}}) {
        const auto c = circle(jumps, 128);
        const auto f = build_projection(c, trivial_multiplier(c.group));
        for (std::size_t n = 0; n < c.points.size(); n += 7) {
            const CMatrix p = evaluate_at_character(f, n, kd(rng));
            EXPECT_LE(max_abs(p * p - p), 1e-13);
            EXPECT_LE(max_abs(p.adjoint() - p), 1e-15);
            EXPECT_NEAR(p.trace().real(), 1.0, 1e-13);
        }
        const auto rep = check_projection(f);
        EXPECT_TRUE(rep.idempotent && rep.self_adjoint) << rep.witness;
    }
}

TEST(Projection, MagneticTorus) {
    CircleCoverSpec s;
    s.grid = 12;
    const auto torus = torus_cover(circle_cover(s), circle_cover(s));
    EXPECT_EQ(torus.patches, 4);
    for (const auto gauge : {Gauge::landau, Gauge::symmetric}) {
        LatticeGeometricData d;
        d.theta = Rational(1);
        d.gauge = gauge;
        const Rational sv(1, 2);
        const auto sigma = power_family(geometric_multiplier(torus.group, d), sv);
        const auto f = build_projection(torus, sigma, d, sv);
        const auto rep = check_projection(f);
        EXPECT_TRUE(rep.idempotent) << rep.witness;
        EXPECT_TRUE(rep.self_adjoint) << rep.witness;
        EXPECT_LE(rep.worst_numeric, 1e-13);
        EXPECT_NEAR(rank_trace(f, regular_trace(sigma)).real(), 1.0, 1e-13);
        // without the geometric phases the twisted product is no longer idempotent
        EXPECT_FALSE(check_projection(build_projection(torus, sigma)).idempotent);
    }
}

TEST(Projection, LiftShiftIsDiagonalConjugation) {
    CircleCoverSpec s;
    s.grid = 8;
    const auto torus = torus_cover(circle_cover(s), circle_cover(s));
    LatticeGeometricData d;
    d.theta = Rational(1);
    d.gauge = Gauge::symmetric;
    const auto sigma = power_family(geometric_multiplier(torus.group, d), Rational(1, 3));
    const auto f = build_projection(torus, sigma, d, Rational(1, 3));
    std::string w;
    EXPECT_TRUE(related_by_diagonal_phase(f, build_projection(shift_lifts(torus, GroupElement{1, 2}), sigma, d, Rational(1, 3)), &w)) << w;
    EXPECT_THROW(shift_lifts(circle({1, 1}), GroupElement{1}), std::invalid_argument);
}

TEST(Projection, GeometricPhasesNeedLifts) {
    const auto c = circle({1, 1});
    LatticeGeometricData d;
    d.theta = Rational(1);
    EXPECT_THROW(build_projection(c, trivial_multiplier(c.group), d), std::invalid_argument);
}

TEST(Pairing, WindingNumbers) {
    const auto z = GroupDescriptor::free_abelian(1);
    for (const auto& jumps : std::vector<std::vector<std::int64_t>>{{1, 0}, {1, 1}, {0, 0}, {3, -1, 0}, {-1, 0}}) {
        const auto c = circle(jumps, 1024);
        std::int64_t w = 0;
        for (auto j : jumps) w += j;
        EXPECT_NEAR(lott_pairing_circle(c, linear_cochain(z, 0)), static_cast<double>(w), 1e-3);
        EXPECT_NEAR(lott_pairing_circle(c, constant_cochain(z, 1, 0.0)), 0.0, 1e-15);
    }
    const auto c = circle({1, 0});
    EXPECT_THROW(lott_pairing_circle(c, constant_cochain(z, 2)), std::invalid_argument);
    EXPECT_THROW(lott_pairing_circle(c, linear_cochain(GroupDescriptor::free_abelian(2), 0)), std::invalid_argument);
}
