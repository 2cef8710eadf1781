#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twisted {

/// Element of a finitely generated group, as a flat coordinate vector.
///
/// Finite-table elements are a single index, free-abelian elements are their
/// integer coordinates, and product elements concatenate the coordinates of
/// the two factors. The descriptor owning the element interprets the layout,
/// and lexicographic order on coordinates is the canonical order.
struct GroupElement {
    std::vector<std::int64_t> c;

    GroupElement() = default;
    GroupElement(std::initializer_list<std::int64_t> init) : c(init) {}
    explicit GroupElement(std::vector<std::int64_t> coords) : c(std::move(coords)) {}

    [[nodiscard]] std::size_t size() const { return c.size(); }
    std::int64_t operator[](std::size_t i) const { return c[i]; }

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend std::strong_ordering operator<=>(const GroupElement& a, const GroupElement& b) {
        return std::lexicographical_compare_three_way(a.c.begin(), a.c.end(), b.c.begin(), b.c.end());
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << ')';
        return os.str();
    }
};

enum class GroupKind { finite_table, free_abelian, product };

class GroupDescriptor;
using Group = std::shared_ptr<const GroupDescriptor>;

/// Raised when an element does not have the shape its descriptor expects.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Finitely generated group: a finite multiplication table, Z^k with the
/// standard generators, or a direct product of two descriptors.
///
/// Immutable after construction. Word lengths of finite groups are computed
/// once by breadth-first search over the Cayley graph.
class GroupDescriptor : public std::enable_shared_from_this<GroupDescriptor> {
public:
    /// Builds a finite group from its multiplication table. `mul[a][b]` is the
    /// index of a*b. Throws std::invalid_argument unless the table is a group
    /// table (associativity exhaustive for n <= 64, sampled above) and the
    /// generating set reaches every element.
    static Group finite_table(std::vector<std::vector<int>> mul, int identity, std::vector<int> generators,
                              std::string name = "finite") {
        auto g = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
        g->kind_ = GroupKind::finite_table;
        g->name_ = std::move(name);
        g->mul_ = std::move(mul);
        g->identity_ = identity;
        const int n = static_cast<int>(g->mul_.size());
        if (n == 0) throw std::invalid_argument("finite group table is empty");
        for (const auto& row : g->mul_) {
            if (static_cast<int>(row.size()) != n) throw std::invalid_argument("multiplication table is not square");
            for (int v : row)
                if (v < 0 || v >= n) throw std::invalid_argument("multiplication table entry out of range");
        }
        if (identity < 0 || identity >= n) throw std::invalid_argument("identity index out of range");
        for (int a = 0; a < n; ++a)
            if (g->mul_[identity][a] != a || g->mul_[a][identity] != a)
                throw std::invalid_argument("identity does not act trivially on element " + std::to_string(a));
        g->inv_.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b)
                if (g->mul_[a][b] == identity) {
                    if (g->mul_[b][a] != identity) throw std::invalid_argument("inverse is not two-sided");
                    g->inv_[a] = b;
                    break;
                }
            if (g->inv_[a] < 0) throw std::invalid_argument("element " + std::to_string(a) + " has no inverse");
        }
        g->check_associativity();
        // Symmetrize the generating set.
        std::set<int> gens;
        for (int s : generators) {
            if (s < 0 || s >= n) throw std::invalid_argument("generator index out of range");
            if (s == identity) continue;
            gens.insert(s);
            gens.insert(g->inv_[s]);
        }
        g->finite_generators_.assign(gens.begin(), gens.end());
        g->compute_lengths();
        return g;
    }

    static Group free_abelian(int rank) {
        if (rank < 1) throw std::invalid_argument("free abelian rank must be positive");
        auto g = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
        g->kind_ = GroupKind::free_abelian;
        g->rank_ = rank;
        g->name_ = "Z^" + std::to_string(rank);
        return g;
    }

    static Group product(Group left, Group right) {
        if (!left || !right) throw std::invalid_argument("product of null descriptors");
        auto g = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
        g->kind_ = GroupKind::product;
        g->left_ = std::move(left);
        g->right_ = std::move(right);
        g->name_ = "(" + g->left_->name() + " x " + g->right_->name() + ")";
        return g;
    }

    [[nodiscard]] GroupKind kind() const { return kind_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] int rank() const { return rank_; }
    [[nodiscard]] const Group& left() const { return left_; }
    [[nodiscard]] const Group& right() const { return right_; }
    [[nodiscard]] const std::vector<std::vector<int>>& table() const { return mul_; }

    /// Number of coordinates of an element.
    [[nodiscard]] std::size_t width() const {
        switch (kind_) {
            case GroupKind::finite_table: return 1;
            case GroupKind::free_abelian: return static_cast<std::size_t>(rank_);
            case GroupKind::product: return left_->width() + right_->width();
        }
        return 0;
    }

    /// Group order, or nullopt when infinite.
    [[nodiscard]] std::optional<std::size_t> order() const {
        switch (kind_) {
            case GroupKind::finite_table: return mul_.size();
            case GroupKind::free_abelian: return std::nullopt;
            case GroupKind::product: {
                auto l = left_->order(), r = right_->order();
                if (l && r) return *l * *r;
                return std::nullopt;
            }
        }
        return std::nullopt;
    }
    [[nodiscard]] bool is_finite() const { return order().has_value(); }

    [[nodiscard]] bool is_abelian() const {
        switch (kind_) {
            case GroupKind::free_abelian: return true;
            case GroupKind::product: return left_->is_abelian() && right_->is_abelian();
            case GroupKind::finite_table:
                for (std::size_t a = 0; a < mul_.size(); ++a)
                    for (std::size_t b = 0; b < a; ++b)
                        if (mul_[a][b] != mul_[b][a]) return false;
                return true;
        }
        return false;
    }

    /// True if `g` has the coordinate layout of this descriptor.
    [[nodiscard]] bool contains(const GroupElement& g) const {
        if (g.size() != width()) return false;
        switch (kind_) {
            case GroupKind::finite_table: return g[0] >= 0 && g[0] < static_cast<std::int64_t>(mul_.size());
            case GroupKind::free_abelian: return true;
            case GroupKind::product: {
                auto [a, b] = split(g);
                return left_->contains(a) && right_->contains(b);
            }
        }
        return false;
    }

    void require(const GroupElement& g) const {
        if (!contains(g)) throw ShapeError("element " + g.str() + " does not belong to " + name_);
    }

    [[nodiscard]] GroupElement identity() const {
        switch (kind_) {
            case GroupKind::finite_table: return GroupElement{identity_};
            case GroupKind::free_abelian: return GroupElement(std::vector<std::int64_t>(rank_, 0));
            case GroupKind::product: return join(left_->identity(), right_->identity());
        }
        return {};
    }
    [[nodiscard]] bool is_identity(const GroupElement& g) const { return g == identity(); }

    [[nodiscard]] GroupElement multiply(const GroupElement& g, const GroupElement& h) const {
        require(g);
        require(h);
        return multiply_unchecked(g, h);
    }

    [[nodiscard]] GroupElement multiply_unchecked(const GroupElement& g, const GroupElement& h) const {
        switch (kind_) {
            case GroupKind::finite_table: return GroupElement{mul_[g[0]][h[0]]};
            case GroupKind::free_abelian: {
                GroupElement r = g;
                for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += h.c[i];
                return r;
            }
            case GroupKind::product: {
                auto [g1, g2] = split(g);
                auto [h1, h2] = split(h);
                return join(left_->multiply_unchecked(g1, h1), right_->multiply_unchecked(g2, h2));
            }
        }
        return {};
    }

    [[nodiscard]] GroupElement inverse(const GroupElement& g) const {
        require(g);
        switch (kind_) {
            case GroupKind::finite_table: return GroupElement{inv_[g[0]]};
            case GroupKind::free_abelian: {
                GroupElement r = g;
                for (auto& x : r.c) x = -x;
                return r;
            }
            case GroupKind::product: {
                auto [a, b] = split(g);
                return join(left_->inverse(a), right_->inverse(b));
            }
        }
        return {};
    }

    /// Cayley-graph distance from the identity for the descriptor's
    /// generating set. Throws std::domain_error if `g` is unreachable.
    [[nodiscard]] std::int64_t word_length(const GroupElement& g) const {
        require(g);
        switch (kind_) {
            case GroupKind::finite_table: {
                int l = lengths_[g[0]];
                if (l < 0) throw std::domain_error("element " + g.str() + " is unreachable from the generators");
                return l;
            }
            case GroupKind::free_abelian: {
                std::int64_t s = 0;
                for (auto x : g.c) s += x < 0 ? -x : x;
                return s;
            }
            case GroupKind::product: {
                auto [a, b] = split(g);
                return left_->word_length(a) + right_->word_length(b);
            }
        }
        return 0;
    }

    /// Generating set (closed under inversion). For products this is the
    /// union of the factor generating sets embedded in each coordinate.
    [[nodiscard]] std::vector<GroupElement> generators() const {
        std::vector<GroupElement> out;
        switch (kind_) {
            case GroupKind::finite_table:
                for (int s : finite_generators_) out.push_back(GroupElement{s});
                break;
            case GroupKind::free_abelian:
                for (int i = 0; i < rank_; ++i)
                    for (int sgn : {1, -1}) {
                        GroupElement e = identity();
                        e.c[i] = sgn;
                        out.push_back(e);
                    }
                break;
            case GroupKind::product:
                for (auto& s : left_->generators()) out.push_back(join(s, right_->identity()));
                for (auto& s : right_->generators()) out.push_back(join(left_->identity(), s));
                break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// All elements with word length <= radius, in lexicographic order.
    [[nodiscard]] std::vector<GroupElement> ball(std::int64_t radius) const {
        if (radius < 0) throw std::invalid_argument("ball radius must be non-negative");
        std::vector<GroupElement> out;
        switch (kind_) {
            case GroupKind::finite_table:
                for (std::size_t a = 0; a < mul_.size(); ++a)
                    if (lengths_[a] >= 0 && lengths_[a] <= radius) out.push_back(GroupElement{static_cast<std::int64_t>(a)});
                break;
            case GroupKind::free_abelian: {
                std::vector<std::int64_t> coords(rank_, 0);
                enumerate_l1(0, radius, coords, out);
                break;
            }
            case GroupKind::product: {
                auto lb = left_->ball(radius);
                auto rb = right_->ball(radius);
                for (const auto& a : lb) {
                    const auto la = left_->word_length(a);
                    for (const auto& b : rb)
                        if (la + right_->word_length(b) <= radius) out.push_back(join(a, b));
                }
                break;
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Every element of a finite group in canonical order.
    [[nodiscard]] std::vector<GroupElement> elements() const {
        if (!is_finite()) throw std::logic_error(name_ + " is infinite");
        return ball(diameter());
    }

    /// Largest word length (finite groups only).
    [[nodiscard]] std::int64_t diameter() const {
        switch (kind_) {
            case GroupKind::finite_table: return *std::max_element(lengths_.begin(), lengths_.end());
            case GroupKind::free_abelian: throw std::logic_error("Z^k has infinite diameter");
            case GroupKind::product: return left_->diameter() + right_->diameter();
        }
        return 0;
    }

    /// {h g h^-1 : h in the group}. Singleton for abelian groups.
    [[nodiscard]] std::vector<GroupElement> conjugacy_class(const GroupElement& g) const {
        require(g);
        switch (kind_) {
            case GroupKind::free_abelian: return {g};
            case GroupKind::finite_table: {
                std::set<GroupElement> cls;
                for (std::size_t h = 0; h < mul_.size(); ++h)
                    cls.insert(GroupElement{mul_[mul_[h][g[0]]][inv_[h]]});
                return {cls.begin(), cls.end()};
            }
            case GroupKind::product: {
                auto [a, b] = split(g);
                std::vector<GroupElement> out;
                for (auto& x : left_->conjugacy_class(a))
                    for (auto& y : right_->conjugacy_class(b)) out.push_back(join(x, y));
                std::sort(out.begin(), out.end());
                return out;
            }
        }
        return {};
    }

    [[nodiscard]] std::pair<GroupElement, GroupElement> split(const GroupElement& g) const {
        if (kind_ != GroupKind::product) throw std::logic_error("split on a non-product descriptor");
        const auto lw = static_cast<std::ptrdiff_t>(left_->width());
        return {GroupElement(std::vector<std::int64_t>(g.c.begin(), g.c.begin() + lw)),
                GroupElement(std::vector<std::int64_t>(g.c.begin() + lw, g.c.end()))};
    }

    [[nodiscard]] GroupElement join(const GroupElement& a, const GroupElement& b) const {
        GroupElement out = a;
        out.c.insert(out.c.end(), b.c.begin(), b.c.end());
        return out;
    }

    /// Structural equality of descriptors.
    [[nodiscard]] bool same_as(const GroupDescriptor& o) const {
        if (this == &o) return true;
        if (kind_ != o.kind_) return false;
        switch (kind_) {
            case GroupKind::finite_table: return mul_ == o.mul_ && identity_ == o.identity_ &&
                                                 finite_generators_ == o.finite_generators_;
            case GroupKind::free_abelian: return rank_ == o.rank_;
            case GroupKind::product: return left_->same_as(*o.left_) && right_->same_as(*o.right_);
        }
        return false;
    }

private:
    GroupDescriptor() = default;

    void check_associativity() const {
        const int n = static_cast<int>(mul_.size());
        auto check = [&](int a, int b, int c) {
            if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
                throw std::invalid_argument("multiplication table is not associative at (" + std::to_string(a) + "," +
                                            std::to_string(b) + "," + std::to_string(c) + ")");
        };
        if (n <= 64) {
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) check(a, b, c);
            return;
        }
        // Deterministic sample of 200000 triples from a linear congruential walk.
        std::uint64_t state = 0x9e3779b97f4a7c15ULL;
        for (int i = 0; i < 200000; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            int a = static_cast<int>((state >> 11) % n), b = static_cast<int>((state >> 29) % n),
                c = static_cast<int>((state >> 43) % n);
            check(a, b, c);
        }
    }

    void compute_lengths() {
        const int n = static_cast<int>(mul_.size());
        lengths_.assign(n, -1);
        std::deque<int> queue{identity_};
        lengths_[identity_] = 0;
        while (!queue.empty()) {
            int a = queue.front();
            queue.pop_front();
            for (int s : finite_generators_) {
                int b = mul_[a][s];
                if (lengths_[b] < 0) {
                    lengths_[b] = lengths_[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        for (int a = 0; a < n; ++a)
            if (lengths_[a] < 0)
                throw std::invalid_argument("generating set does not generate: element " + std::to_string(a) +
                                            " unreachable");
    }

    void enumerate_l1(int axis, std::int64_t budget, std::vector<std::int64_t>& coords,
                      std::vector<GroupElement>& out) const {
        if (axis == rank_) {
            out.emplace_back(coords);
            return;
        }
        for (std::int64_t v = -budget; v <= budget; ++v) {
            coords[axis] = v;
            enumerate_l1(axis + 1, budget - (v < 0 ? -v : v), coords, out);
        }
        coords[axis] = 0;
    }

    GroupKind kind_ = GroupKind::free_abelian;
    std::string name_;
    int rank_ = 0;
    std::vector<std::vector<int>> mul_;
    std::vector<int> inv_;
    std::vector<int> lengths_;
    std::vector<int> finite_generators_;
    int identity_ = 0;
    Group left_, right_;
};

inline bool same_group(const Group& a, const Group& b) { return a && b && a->same_as(*b); }

// ---------------------------------------------------------------------------
// Fixture constructors

namespace detail {

inline std::vector<std::vector<int>> permutations_of(int degree, bool even_only) {
    std::vector<int> p(degree);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        if (even_only) {
            int inversions = 0;
            for (int i = 0; i < degree; ++i)
                for (int j = i + 1; j < degree; ++j) inversions += p[i] > p[j];
            if (inversions % 2) continue;
        }
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Table of a permutation group, product g*h = g after h (apply h first).
inline Group permutation_group(const std::vector<std::vector<int>>& perms, const std::vector<int>& generators,
                               std::string name) {
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);
    const int n = static_cast<int>(perms.size());
    const int degree = static_cast<int>(perms[0].size());
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            std::vector<int> c(degree);
            for (int x = 0; x < degree; ++x) c[x] = perms[a][perms[b][x]];
            mul[a][b] = index.at(c);
        }
    return GroupDescriptor::finite_table(std::move(mul), 0, generators, std::move(name));
}

inline int permutation_index(const std::vector<std::vector<int>>& perms, const std::vector<int>& p) {
    auto it = std::find(perms.begin(), perms.end(), p);
    if (it == perms.end()) throw std::invalid_argument("permutation not in group");
    return static_cast<int>(it - perms.begin());
}

}  // namespace detail

/// Symmetric group on `degree` points; elements are the permutations of
/// {0,...,degree-1} in lexicographic order (index 0 is the identity),
/// generated by the adjacent transpositions.
inline Group symmetric_group(int degree) {
    auto perms = detail::permutations_of(degree, false);
    std::vector<int> gens;
    for (int i = 0; i + 1 < degree; ++i) {
        std::vector<int> t(degree);
        std::iota(t.begin(), t.end(), 0);
        std::swap(t[i], t[i + 1]);
        gens.push_back(detail::permutation_index(perms, t));
    }
    return detail::permutation_group(perms, gens, "S" + std::to_string(degree));
}

/// Index of a permutation (given as images of 0..degree-1) inside symmetric_group(degree).
inline GroupElement symmetric_element(const std::vector<int>& images) {
    auto perms = detail::permutations_of(static_cast<int>(images.size()), false);
    return GroupElement{detail::permutation_index(perms, images)};
}

/// Alternating group on `degree` points (degree >= 3), generated by the
/// 3-cycles (0 1 2) and (0 1 ... degree-1) or (1 2 ... degree-1) as parity requires.
inline Group alternating_group(int degree) {
    if (degree < 3) throw std::invalid_argument("alternating group needs degree >= 3");
    auto perms = detail::permutations_of(degree, true);
    std::vector<int> three_cycle(degree), long_cycle(degree);
    std::iota(three_cycle.begin(), three_cycle.end(), 0);
    three_cycle[0] = 1;
    three_cycle[1] = 2;
    three_cycle[2] = 0;
    std::iota(long_cycle.begin(), long_cycle.end(), 0);
    if (degree % 2 == 1) {
        for (int i = 0; i < degree; ++i) long_cycle[i] = (i + 1) % degree;
    } else {
        for (int i = 1; i < degree; ++i) long_cycle[i] = i + 1 < degree ? i + 1 : 1;
    }
    std::vector<int> gens{detail::permutation_index(perms, three_cycle), detail::permutation_index(perms, long_cycle)};
    return detail::permutation_group(perms, gens, "A" + std::to_string(degree));
}

/// Cyclic group Z/n with generator 1.
inline Group cyclic_group(int n) {
    if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
    return GroupDescriptor::finite_table(std::move(mul), 0, n > 1 ? std::vector<int>{1} : std::vector<int>{},
                                         "Z/" + std::to_string(n));
}

}  // namespace twisted
