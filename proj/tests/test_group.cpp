#include <gtest/gtest.h>

#include <random>
#include <set>

#include "twisted/group.hpp"

using namespace twisted;

namespace {

// Brute-force composition of permutations as arrays: (p*q)(i) = p(q(i)).
std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[static_cast<std::size_t>(q[i])];
    return r;
}

}  // namespace

TEST(Group, FreeAbelianBasics) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    EXPECT_FALSE(z2->is_finite());
    EXPECT_TRUE(z2->is_abelian());
    EXPECT_EQ(z2->multiply({1, -2}, {3, 5}), (GroupElement{4, 3}));
    EXPECT_EQ(z2->inverse({2, -7}), (GroupElement{-2, 7}));
    EXPECT_EQ(z2->word_length({3, -2}), 5);
    EXPECT_EQ(z2->generators().size(), 4u);
    EXPECT_THROW((void)z2->multiply({1}, {2, 3}), ShapeError);
}

TEST(Group, BallSizesMatchCount) {
    const auto z2 = GroupDescriptor::free_abelian(2);
    for (std::int64_t r = 0; r <= 8; ++r) EXPECT_EQ(z2->ball(r).size(), static_cast<std::size_t>(2 * r * r + 2 * r + 1));
    const auto z3 = GroupDescriptor::free_abelian(3);
    // |B_r| in Z^3 for the l1 metric: sum_k 2^k C(3,k) C(r,k)
    for (std::int64_t r = 0; r <= 5; ++r) {
        const std::int64_t expect = 1 + 6 * r + 12 * r * (r - 1) / 2 + 8 * r * (r - 1) * (r - 2) / 6;
        EXPECT_EQ(static_cast<std::int64_t>(z3->ball(r).size()), expect);
    }
    const auto b = z2->ball(3);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
}

TEST(Group, SymmetricGroupAgreesWithPermutationComposition) {
    const auto s3 = symmetric_group(3);
    EXPECT_EQ(*s3->order(), 6u);
    EXPECT_FALSE(s3->is_abelian());
    const auto perms = detail::permutations_of(3, false);
    for (std::size_t a = 0; a < perms.size(); ++a)
        for (std::size_t b = 0; b < perms.size(); ++b) {
            const auto prod = s3->multiply(GroupElement{static_cast<std::int64_t>(a)}, GroupElement{static_cast<std::int64_t>(b)});
            EXPECT_EQ(perms[static_cast<std::size_t>(prod[0])], compose(perms[a], perms[b]));
        }
    const auto t = symmetric_element({1, 0, 2});
    EXPECT_EQ(s3->conjugacy_class(t).size(), 3u);
    EXPECT_EQ(s3->conjugacy_class(s3->identity()).size(), 1u);
}

TEST(Group, AlternatingFiveClassSizes) {
    const auto a5 = alternating_group(5);
    EXPECT_EQ(*a5->order(), 60u);
    std::multiset<std::size_t> sizes;
    std::set<GroupElement> seen;
    for (const auto& g : a5->elements()) {
        if (seen.count(g)) continue;
        const auto cls = a5->conjugacy_class(g);
        seen.insert(cls.begin(), cls.end());
        sizes.insert(cls.size());
    }
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 12, 12, 15, 20}));
}

TEST(Group, FiniteTableValidation) {
    // Z/3 table
    EXPECT_NO_THROW(GroupDescriptor::finite_table({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0, {1}));
    EXPECT_THROW(GroupDescriptor::finite_table({{0, 1}, {1, 1}}, 0, {1}), std::invalid_argument);
    EXPECT_THROW(GroupDescriptor::finite_table({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0, {}), std::invalid_argument);
    // non-associative loop of order 5
    const std::vector<std::vector<int>> loop{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
    EXPECT_THROW(GroupDescriptor::finite_table(loop, 0, {1, 2}), std::invalid_argument);
}

TEST(Group, CyclicWordLengths) {
    const auto c7 = cyclic_group(7);
    for (std::int64_t k = 0; k < 7; ++k) EXPECT_EQ(c7->word_length(GroupElement{k}), std::min<std::int64_t>(k, 7 - k));
    EXPECT_EQ(c7->diameter(), 3);
}

TEST(Group, ProductLaws) {
    const auto g = GroupDescriptor::product(GroupDescriptor::free_abelian(2), symmetric_group(3));
    std::mt19937_64 rng(5);
    const auto pool = g->ball(3);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 500; ++i) {
        const auto a = pool[pick(rng)], b = pool[pick(rng)], c = pool[pick(rng)];
        EXPECT_EQ(g->multiply(g->multiply(a, b), c), g->multiply(a, g->multiply(b, c)));
        EXPECT_TRUE(g->is_identity(g->multiply(a, g->inverse(a))));
        const auto [l, r] = g->split(a);
        EXPECT_EQ(g->join(l, r), a);
        EXPECT_EQ(g->word_length(a), g->left()->word_length(l) + g->right()->word_length(r));
    }
    EXPECT_FALSE(g->is_abelian());
}
