#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twisted/group.hpp"
#include "twisted/rational.hpp"

namespace twisted {

/// A function z: G -> U(1) with z(e) = 1, given by exact angles in turns.
/// Used both as coboundary data and as characters (when multiplicative).
class CoboundaryData {
public:
    using AngleFn = std::function<Rational(const GroupElement&)>;

    CoboundaryData(Group group, AngleFn angle, std::string key)
        : group_(std::move(group)), angle_(std::move(angle)), key_(std::move(key)) {
        if (!angle_(group_->identity()).mod1().is_zero()) throw std::invalid_argument("coboundary data requires z(e) = 1");
    }

    /// Finitely supported angles; z is 1 off the listed elements.
    static CoboundaryData from_entries(Group group, std::map<GroupElement, Rational> entries) {
        for (const auto& [g, q] : entries) group->require(g);
        std::string key = "entries{";
        for (const auto& [g, q] : entries) key += g.str() + ":" + q.str() + ";";
        key += "}";
        auto shared = std::make_shared<const std::map<GroupElement, Rational>>(std::move(entries));
        return CoboundaryData(
            std::move(group),
            [shared](const GroupElement& g) {
                auto it = shared->find(g);
                return it == shared->end() ? Rational(0) : it->second;
            },
            key);
    }

    /// z(g) = exp(2 pi i <angles, g>) on Z^k: a character.
    static CoboundaryData zk_character(Group group, std::vector<Rational> angles) {
        if (group->kind() != GroupKind::free_abelian || angles.size() != group->width())
            throw std::invalid_argument("Z^k character needs one angle per coordinate");
        std::string key = "zk-character{";
        for (auto& a : angles) key += a.str() + ";";
        key += "}";
        return CoboundaryData(
            std::move(group),
            [angles](const GroupElement& g) {
                Rational s(0);
                for (std::size_t i = 0; i < angles.size(); ++i) s += angles[i] * Rational(g[i]);
                return s;
            },
            key);
    }

    /// z(g) = exp(-pi i theta g1 g2) on Z^2: relates the symmetric gauge to the Landau gauge.
    static CoboundaryData gauge_change(Group group, const Rational& theta) {
        if (group->kind() != GroupKind::free_abelian || group->rank() != 2)
            throw std::invalid_argument("gauge change is defined on Z^2");
        return CoboundaryData(
            std::move(group),
            [theta](const GroupElement& g) { return -theta * Rational(1, 2) * Rational(g[0]) * Rational(g[1]); },
            "gauge-change{" + theta.str() + "}");
    }

    [[nodiscard]] const Group& group() const { return group_; }
    [[nodiscard]] const std::string& key() const { return key_; }
    [[nodiscard]] Rational angle(const GroupElement& g) const { return angle_(g); }
    [[nodiscard]] Phase operator()(const GroupElement& g) const { return Phase::turns(angle_(g)); }

    /// Pointwise conjugate z-bar.
    [[nodiscard]] CoboundaryData conj() const {
        auto f = angle_;
        return CoboundaryData(group_, [f](const GroupElement& g) { return -f(g); }, "conj(" + key_ + ")");
    }

private:
    Group group_;
    AngleFn angle_;
    std::string key_;
};

enum class Gauge { landau, symmetric, custom };

inline std::string gauge_name(Gauge g) {
    switch (g) {
        case Gauge::landau: return "landau";
        case Gauge::symmetric: return "symmetric";
        case Gauge::custom: return "custom";
    }
    return "?";
}

enum class PsiNormalization { psi_e_zero, psi_at_base_point_zero };

/// Lattice data for the geometric multiplier on Z^2 acting on R^2 by
/// g.x = x - g. Angles are in turns.
///
/// The edge potential eta assigns a value to each oriented unit edge
/// (x, x + e_axis); its circulation around every unit plaquette must equal
/// theta. psi_g solves psi_g(x + e) - psi_g(x) = eta(g.x, e) - eta(x, e).
struct LatticeGeometricData {
    using Point = std::array<Rational, 2>;
    using EdgeFn = std::function<Rational(const Point&, int axis)>;
    using PsiFn = std::function<Rational(const GroupElement&, const Point&)>;

    Rational theta;
    Gauge gauge = Gauge::landau;
    Point base_point{Rational(0), Rational(0)};
    PsiNormalization normalization = PsiNormalization::psi_e_zero;
    /// Optional additive constants a_g added to psi_g (a_e must vanish).
    std::function<Rational(const GroupElement&)> perturbation;
    /// Only used for Gauge::custom.
    EdgeFn custom_eta;
    PsiFn custom_psi;

    [[nodiscard]] static Point act(const GroupElement& g, const Point& x) {
        return {x[0] - Rational(g[0]), x[1] - Rational(g[1])};
    }

    [[nodiscard]] Rational eta(const Point& x, int axis) const {
        switch (gauge) {
            case Gauge::landau: return axis == 0 ? Rational(0) : theta * x[0];
            case Gauge::symmetric:
                return axis == 0 ? -theta * Rational(1, 2) * x[1] : theta * Rational(1, 2) * x[0];
            case Gauge::custom: return custom_eta(x, axis);
        }
        return Rational(0);
    }

    /// psi_g before normalization or perturbation.
    [[nodiscard]] Rational raw_psi(const GroupElement& g, const Point& x) const {
        const Rational g0(g[0]), g1(g[1]);
        switch (gauge) {
            case Gauge::landau: return -theta * g0 * x[1];
            case Gauge::symmetric: return -theta * Rational(1, 2) * (g0 * x[1] - g1 * x[0]);
            case Gauge::custom: return custom_psi(g, x);
        }
        return Rational(0);
    }

    [[nodiscard]] Rational psi(const GroupElement& g, const Point& x) const {
        Rational v = raw_psi(g, x);
        if (normalization == PsiNormalization::psi_at_base_point_zero) v -= raw_psi(g, base_point);
        if (perturbation) v += perturbation(g);
        return v;
    }

    /// Circulation of eta around the unit plaquette with lower-left corner x.
    [[nodiscard]] Rational plaquette_flux(const Point& x) const {
        const Point x1{x[0] + Rational(1), x[1]}, x2{x[0], x[1] + Rational(1)};
        return eta(x, 0) + eta(x1, 1) - eta(x2, 0) - eta(x, 1);
    }

    /// Checks curvature = theta on plaquettes and d psi_g = g*eta - eta on
    /// edges over a window of points and group elements. Returns a
    /// description of the first violation, or nullopt.
    [[nodiscard]] std::optional<std::string> consistency_violation(int window = 3) const {
        for (int a = -window; a <= window; ++a)
            for (int b = -window; b <= window; ++b) {
                const Point x{Rational(a), Rational(b)};
                if (plaquette_flux(x) != theta)
                    return "plaquette flux " + plaquette_flux(x).str() + " != theta at (" + std::to_string(a) + "," +
                           std::to_string(b) + ")";
                for (int g0 = -2; g0 <= 2; ++g0)
                    for (int g1 = -2; g1 <= 2; ++g1) {
                        const GroupElement g{g0, g1};
                        for (int axis = 0; axis < 2; ++axis) {
                            Point xe = x;
                            xe[axis] += Rational(1);
                            const Rational lhs = raw_psi(g, xe) - raw_psi(g, x);
                            const Rational rhs = eta(act(g, x), axis) - eta(x, axis);
                            if (lhs != rhs) return "d psi != g*eta - eta for g=" + g.str();
                        }
                    }
            }
        if (perturbation && !perturbation(GroupElement{0, 0}).is_zero())
            return std::string("perturbation must vanish at the identity");
        return std::nullopt;
    }
};

/// Result of a cocycle-identity check.
struct CocycleReport {
    bool pass = true;
    bool exhaustive = false;
    std::size_t checked = 0;
    double worst_defect = 0.0;  ///< angular defect in turns
    std::optional<std::array<GroupElement, 3>> witness;
    std::string detail;
};

/// A normalized 2-cocycle sigma: G x G -> U(1).
///
/// Handles are cheap to copy and immutable. Exact multipliers additionally
/// expose a real lift (an angle in Q, not reduced mod 1) satisfying the
/// cocycle identity exactly in Q; power families sigma^s scale this lift.
class Multiplier {
public:
    struct Impl {
        virtual ~Impl() = default;
        [[nodiscard]] virtual Phase eval(const GroupElement& g, const GroupElement& h) const = 0;
        [[nodiscard]] virtual std::optional<Rational> lift(const GroupElement& g, const GroupElement& h) const = 0;
        [[nodiscard]] virtual std::string kind() const = 0;
        [[nodiscard]] virtual std::string key() const = 0;
        Group group;
    };

    Multiplier() = default;
    explicit Multiplier(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    [[nodiscard]] const Group& group() const { return impl_->group; }
    [[nodiscard]] std::string kind() const { return impl_->kind(); }
    [[nodiscard]] std::string key() const { return impl_->key(); }
    [[nodiscard]] const Impl& impl() const { return *impl_; }

    [[nodiscard]] Phase operator()(const GroupElement& g, const GroupElement& h) const {
        group()->require(g);
        group()->require(h);
        return impl_->eval(g, h);
    }
    [[nodiscard]] Phase eval_unchecked(const GroupElement& g, const GroupElement& h) const { return impl_->eval(g, h); }
    [[nodiscard]] std::optional<Rational> lift(const GroupElement& g, const GroupElement& h) const {
        return impl_->lift(g, h);
    }

    /// Same group and same defining data.
    [[nodiscard]] bool same_as(const Multiplier& o) const {
        return impl_ == o.impl_ || (same_group(group(), o.group()) && key() == o.key());
    }

private:
    std::shared_ptr<const Impl> impl_;
};

namespace detail {

template <class Eval, class Lift>
class LambdaMultiplier final : public Multiplier::Impl {
public:
    LambdaMultiplier(Group g, std::string kind, std::string key, Eval eval, Lift lift)
        : kind_(std::move(kind)), key_(std::move(key)), eval_(std::move(eval)), lift_(std::move(lift)) {
        group = std::move(g);
    }
    [[nodiscard]] Phase eval(const GroupElement& g, const GroupElement& h) const override { return eval_(g, h); }
    [[nodiscard]] std::optional<Rational> lift(const GroupElement& g, const GroupElement& h) const override {
        return lift_(g, h);
    }
    [[nodiscard]] std::string kind() const override { return kind_; }
    [[nodiscard]] std::string key() const override { return key_; }

private:
    std::string kind_, key_;
    Eval eval_;
    Lift lift_;
};

template <class Lift>
Multiplier exact_multiplier(Group g, std::string kind, std::string key, Lift lift) {
    auto wrapped = [lift](const GroupElement& a, const GroupElement& b) -> std::optional<Rational> { return lift(a, b); };
    auto eval = [wrapped](const GroupElement& a, const GroupElement& b) { return Phase::turns(*wrapped(a, b)); };
    using Impl = LambdaMultiplier<decltype(eval), decltype(wrapped)>;
    return Multiplier(std::make_shared<const Impl>(std::move(g), std::move(kind), std::move(key), std::move(eval),
                                                   std::move(wrapped)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors

inline Multiplier trivial_multiplier(Group g) {
    return detail::exact_multiplier(std::move(g), "trivial", "trivial",
                                    [](const GroupElement&, const GroupElement&) { return std::optional(Rational(0)); });
}

/// Standard symplectic pairing on Z^2.
inline std::vector<std::vector<std::int64_t>> standard_symplectic() { return {{0, 1}, {-1, 0}}; }

/// Magnetic multiplier on Z^k with flux theta and antisymmetric integer
/// pairing B. Landau form: exp(2 pi i theta sum_{i<j} B_ij g_i h_j);
/// symmetric form: exp(pi i theta g^T B h).
inline Multiplier magnetic_multiplier(Group g, const Rational& theta, Gauge gauge = Gauge::landau,
                                      std::vector<std::vector<std::int64_t>> pairing = standard_symplectic()) {
    if (g->kind() != GroupKind::free_abelian) throw std::invalid_argument("magnetic multiplier needs Z^k");
    const std::size_t k = g->width();
    if (pairing.size() != k) throw std::invalid_argument("pairing matrix has wrong size");
    for (std::size_t i = 0; i < k; ++i) {
        if (pairing[i].size() != k) throw std::invalid_argument("pairing matrix has wrong size");
        for (std::size_t j = 0; j < k; ++j)
            if (pairing[i][j] != -pairing[j][i]) throw std::invalid_argument("pairing matrix must be antisymmetric");
    }
    if (gauge == Gauge::custom) throw std::invalid_argument("custom gauge needs geometric data");
    std::string key = "magnetic{" + theta.str() + "," + gauge_name(gauge) + ",B=";
    for (auto& row : pairing)
        for (auto v : row) key += std::to_string(v) + ";";
    key += "}";
    auto lift = [theta, gauge, pairing, k](const GroupElement& a, const GroupElement& b) {
        std::int64_t form = 0;
        if (gauge == Gauge::landau) {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = i + 1; j < k; ++j) form += pairing[i][j] * a[i] * b[j];
            return theta * Rational(form);
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) form += a[i] * pairing[i][j] * b[j];
        return theta * Rational(form, 2);
    };
    return detail::exact_multiplier(std::move(g), "magnetic", key, lift);
}

/// Magnetic multiplier at a non-rational flux given as a double; phases are
/// approximate and the multiplier has no exact lift.
inline Multiplier magnetic_multiplier_approx(Group g, double theta) {
    if (g->kind() != GroupKind::free_abelian || g->rank() != 2)
        throw std::invalid_argument("approximate magnetic multiplier is defined on Z^2");
    auto eval = [theta](const GroupElement& a, const GroupElement& b) {
        return Phase::approx_turns(theta * static_cast<double>(a[0] * b[1]));
    };
    auto lift = [](const GroupElement&, const GroupElement&) -> std::optional<Rational> { return std::nullopt; };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    return Multiplier(
        std::make_shared<const Impl>(std::move(g), "magnetic-approx", "magnetic-approx{" + std::to_string(theta) + "}",
                                     eval, lift));
}

/// Multiplier on a finite group from a table of angles (turns). The angles
/// are used verbatim as the real lift. No cocycle check here; see verify_cocycle.
inline Multiplier table_multiplier(Group g, std::vector<std::vector<Rational>> angles) {
    if (g->kind() != GroupKind::finite_table) throw std::invalid_argument("table multiplier needs a finite-table group");
    const std::size_t n = *g->order();
    if (angles.size() != n) throw std::invalid_argument("phase table has wrong size");
    for (auto& row : angles)
        if (row.size() != n) throw std::invalid_argument("phase table has wrong size");
    std::string key = "table{";
    for (auto& row : angles)
        for (auto& q : row) key += q.str() + ";";
    key += "}";
    auto shared = std::make_shared<const std::vector<std::vector<Rational>>>(std::move(angles));
    return detail::exact_multiplier(std::move(g), "table", key, [shared](const GroupElement& a, const GroupElement& b) {
        return std::optional((*shared)[a[0]][b[0]]);
    });
}

/// Pullback sigma(phi(g), phi(h)) of a multiplier along a homomorphism phi.
inline Multiplier pullback_multiplier(Group g, std::function<GroupElement(const GroupElement&)> hom, Multiplier base,
                                      std::string hom_name) {
    auto eval = [hom, base](const GroupElement& a, const GroupElement& b) {
        return base.eval_unchecked(hom(a), hom(b));
    };
    auto lift = [hom, base](const GroupElement& a, const GroupElement& b) { return base.lift(hom(a), hom(b)); };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    const std::string key = "pullback{" + hom_name + "," + base.key() + "}";
    return Multiplier(std::make_shared<const Impl>(std::move(g), "pullback", key, eval, lift));
}

/// pi_2^* sigma on a product descriptor, sigma living on the right factor.
inline Multiplier pullback_from_right(Group product, Multiplier right) {
    if (product->kind() != GroupKind::product || !same_group(product->right(), right.group()))
        throw std::invalid_argument("pullback_from_right needs a product whose right factor carries the multiplier");
    auto p = product;
    return pullback_multiplier(
        product, [p](const GroupElement& g) { return p->split(g).second; }, std::move(right), "pi2");
}

/// pi_1^* sigma on a product descriptor, sigma living on the left factor.
inline Multiplier pullback_from_left(Group product, Multiplier left) {
    if (product->kind() != GroupKind::product || !same_group(product->left(), left.group()))
        throw std::invalid_argument("pullback_from_left needs a product whose left factor carries the multiplier");
    auto p = product;
    return pullback_multiplier(
        product, [p](const GroupElement& g) { return p->split(g).first; }, std::move(left), "pi1");
}

/// Product multiplier sigma_L(g1,h1) sigma_R(g2,h2) on a product descriptor.
inline Multiplier product_multiplier(Group product, Multiplier left, Multiplier right) {
    if (product->kind() != GroupKind::product || !same_group(product->left(), left.group()) ||
        !same_group(product->right(), right.group()))
        throw std::invalid_argument("product_multiplier factors do not match the descriptor");
    auto p = product;
    auto eval = [p, left, right](const GroupElement& a, const GroupElement& b) {
        auto [a1, a2] = p->split(a);
        auto [b1, b2] = p->split(b);
        return left.eval_unchecked(a1, b1) * right.eval_unchecked(a2, b2);
    };
    auto lift = [p, left, right](const GroupElement& a, const GroupElement& b) -> std::optional<Rational> {
        auto [a1, a2] = p->split(a);
        auto [b1, b2] = p->split(b);
        auto l = left.lift(a1, b1), r = right.lift(a2, b2);
        if (!l || !r) return std::nullopt;
        return *l + *r;
    };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    return Multiplier(std::make_shared<const Impl>(std::move(product), "product",
                                                   "product{" + left.key() + "," + right.key() + "}", eval, lift));
}

/// The coboundary dz(g,h) = z(g) z(h) z(gh)^-1.
inline Multiplier coboundary(const CoboundaryData& z) {
    auto g = z.group();
    return detail::exact_multiplier(g, "coboundary", "coboundary{" + z.key() + "}",
                                    [z, g](const GroupElement& a, const GroupElement& b) {
                                        return std::optional(z.angle(a) + z.angle(b) -
                                                             z.angle(g->multiply_unchecked(a, b)));
                                    });
}

/// sigma * dz.
inline Multiplier coboundary_twist(Multiplier base, const CoboundaryData& z) {
    if (!same_group(base.group(), z.group())) throw std::invalid_argument("coboundary twist on a different group");
    auto g = base.group();
    auto eval = [base, z, g](const GroupElement& a, const GroupElement& b) {
        return base.eval_unchecked(a, b) *
               Phase::turns(z.angle(a) + z.angle(b) - z.angle(g->multiply_unchecked(a, b)));
    };
    auto lift = [base, z, g](const GroupElement& a, const GroupElement& b) -> std::optional<Rational> {
        auto l = base.lift(a, b);
        if (!l) return std::nullopt;
        return *l + z.angle(a) + z.angle(b) - z.angle(g->multiply_unchecked(a, b));
    };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    return Multiplier(std::make_shared<const Impl>(std::move(g), "coboundary-twist",
                                                   "twist{" + base.key() + "," + z.key() + "}", eval, lift));
}

/// Pointwise conjugate multiplier sigma-bar.
inline Multiplier conjugate(Multiplier base) {
    auto eval = [base](const GroupElement& a, const GroupElement& b) { return base.eval_unchecked(a, b).conj(); };
    auto lift = [base](const GroupElement& a, const GroupElement& b) -> std::optional<Rational> {
        auto l = base.lift(a, b);
        if (!l) return std::nullopt;
        return -*l;
    };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    return Multiplier(std::make_shared<const Impl>(base.group(), "conjugate", "conj{" + base.key() + "}", eval, lift));
}

/// Pointwise product sigma * sigma' of two multipliers on one group.
inline Multiplier multiply(Multiplier a, Multiplier b) {
    if (!same_group(a.group(), b.group())) throw std::invalid_argument("multipliers live on different groups");
    auto eval = [a, b](const GroupElement& x, const GroupElement& y) {
        return a.eval_unchecked(x, y) * b.eval_unchecked(x, y);
    };
    auto lift = [a, b](const GroupElement& x, const GroupElement& y) -> std::optional<Rational> {
        auto l = a.lift(x, y), r = b.lift(x, y);
        if (!l || !r) return std::nullopt;
        return *l + *r;
    };
    using Impl = detail::LambdaMultiplier<decltype(eval), decltype(lift)>;
    return Multiplier(
        std::make_shared<const Impl>(a.group(), "product-pointwise", "mul{" + a.key() + "," + b.key() + "}", eval, lift));
}

/// sigma^s: every lifted angle multiplied by s. Requires an exact lift
/// satisfying the cocycle identity in Q (checked exhaustively on finite
/// groups of order <= 64 and on a radius-3 ball otherwise).
inline Multiplier power_family(Multiplier base, const Rational& s) {
    const auto& g = base.group();
    const auto sample = g->is_finite() && *g->order() <= 64 ? g->elements() : g->ball(g->is_finite() ? g->diameter() : 3);
    const std::size_t limit = g->is_finite() && *g->order() <= 64 ? sample.size() : std::min<std::size_t>(sample.size(), 13);
    for (std::size_t i = 0; i < limit; ++i)
        for (std::size_t j = 0; j < limit; ++j)
            for (std::size_t k = 0; k < limit; ++k) {
                const auto &a = sample[i], &b = sample[j], &c = sample[k];
                auto l1 = base.lift(g->multiply_unchecked(a, b), c), l2 = base.lift(a, b);
                auto r1 = base.lift(a, g->multiply_unchecked(b, c)), r2 = base.lift(b, c);
                if (!l1 || !l2 || !r1 || !r2)
                    throw std::invalid_argument("power family needs a multiplier with exact rational data");
                if (*l1 + *l2 != *r1 + *r2)
                    throw std::invalid_argument("power family needs a lift satisfying the cocycle identity over Q");
            }
    return detail::exact_multiplier(base.group(), "power", "power{" + base.key() + "," + s.str() + "}",
                                    [base, s](const GroupElement& a, const GroupElement& b) {
                                        return std::optional(*base.lift(a, b) * s);
                                    });
}

/// The multiplier exp(2 pi i (psi_h(x0) + psi_g(h.x0) - psi_{gh}(x0))) on Z^2.
/// Throws std::invalid_argument when the lattice data is inconsistent.
inline Multiplier geometric_multiplier(Group g, LatticeGeometricData data) {
    if (g->kind() != GroupKind::free_abelian || g->rank() != 2)
        throw std::invalid_argument("geometric multiplier is defined on Z^2");
    if (auto violation = data.consistency_violation())
        throw std::invalid_argument("curvature invariant violated: " + *violation);
    const std::string key = "geometric{" + data.theta.str() + "," + gauge_name(data.gauge) + ",x0=" +
                            data.base_point[0].str() + ":" + data.base_point[1].str() +
                            (data.normalization == PsiNormalization::psi_at_base_point_zero ? ",psi(x0)=0" : "") +
                            (data.perturbation ? ",perturbed" : "") + "}";
    auto shared = std::make_shared<const LatticeGeometricData>(std::move(data));
    return detail::exact_multiplier(g, "geometric", key, [shared](const GroupElement& a, const GroupElement& b) {
        const auto& x0 = shared->base_point;
        const GroupElement ab{a[0] + b[0], a[1] + b[1]};
        return std::optional(shared->psi(b, x0) + shared->psi(a, LatticeGeometricData::act(b, x0)) -
                             shared->psi(ab, x0));
    });
}

// ---------------------------------------------------------------------------
// Checks

namespace detail {

inline void record_cocycle(const Multiplier& s, const GroupElement& a, const GroupElement& b, const GroupElement& c,
                           CocycleReport& report) {
    const auto& g = s.group();
    const Phase lhs = s.eval_unchecked(g->multiply_unchecked(a, b), c) * s.eval_unchecked(a, b);
    const Phase rhs = s.eval_unchecked(a, g->multiply_unchecked(b, c)) * s.eval_unchecked(b, c);
    const bool exact = lhs.exact() && rhs.exact();
    const double defect = lhs.distance(rhs);
    ++report.checked;
    report.worst_defect = std::max(report.worst_defect, defect);
    const bool bad = exact ? !(lhs == rhs) : defect > 1e-12;
    if (bad && report.pass) {
        report.pass = false;
        report.witness = std::array<GroupElement, 3>{a, b, c};
        report.detail = "cocycle identity fails at " + a.str() + "," + b.str() + "," + c.str();
    }
}

inline GroupElement random_element(const std::vector<GroupElement>& pool, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
}

}  // namespace detail

/// Checks normalization and the cocycle identity. Exhaustive for finite
/// groups of order <= 24; otherwise `sample_count` random triples from a
/// radius-6 ball. Exact comparison for exact phases, 1e-12 turns otherwise.
inline CocycleReport verify_cocycle(const Multiplier& s, std::size_t sample_count, std::uint64_t seed = 1) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
    CocycleReport report;
    const auto& g = s.group();
    const GroupElement e = g->identity();
    std::vector<GroupElement> pool;
    if (g->is_finite() && *g->order() <= 24) {
        report.exhaustive = true;
        pool = g->elements();
        for (auto& a : pool)
            for (auto& b : pool)
                for (auto& c : pool) detail::record_cocycle(s, a, b, c, report);
    } else {
        pool = g->ball(g->is_finite() ? std::min<std::int64_t>(g->diameter(), 6) : 6);
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < sample_count; ++i)
            detail::record_cocycle(s, detail::random_element(pool, rng), detail::random_element(pool, rng),
                                   detail::random_element(pool, rng), report);
    }
    for (auto& a : pool) {
        if (!s.eval_unchecked(e, a).is_one(1e-12) || !s.eval_unchecked(a, e).is_one(1e-12)) {
            if (report.pass) {
                report.pass = false;
                report.witness = std::array<GroupElement, 3>{e, a, e};
                report.detail = "normalization fails at " + a.str();
            }
        }
    }
    return report;
}

/// Test set used for multiplier comparisons: all elements of a finite group,
/// the radius-5 ball otherwise.
inline std::vector<GroupElement> comparison_set(const Group& g) {
    return g->is_finite() ? g->elements() : g->ball(5);
}

/// True iff sigma'(g,h) = sigma(g,h) dz(g,h) on the comparison set.
inline bool is_cohomologous_via(const Multiplier& sigma, const Multiplier& sigma_prime, const CoboundaryData& z,
                                std::optional<std::pair<GroupElement, GroupElement>>* witness = nullptr) {
    if (!same_group(sigma.group(), sigma_prime.group()) || !same_group(sigma.group(), z.group()))
        throw std::invalid_argument("is_cohomologous_via needs a common group");
    const auto& g = sigma.group();
    const auto set = comparison_set(g);
    for (const auto& a : set)
        for (const auto& b : set) {
            const Phase rhs = sigma.eval_unchecked(a, b) * z(a) * z(b) * z(g->multiply_unchecked(a, b)).conj();
            if (!(sigma_prime.eval_unchecked(a, b) == rhs)) {
                if (witness) *witness = std::pair{a, b};
                return false;
            }
        }
    return true;
}

/// True iff the two multipliers agree on the comparison set.
inline bool equal_on_comparison_set(const Multiplier& a, const Multiplier& b) {
    if (!same_group(a.group(), b.group())) return false;
    const auto set = comparison_set(a.group());
    for (const auto& x : set)
        for (const auto& y : set)
            if (!(a.eval_unchecked(x, y) == b.eval_unchecked(x, y))) return false;
    return true;
}

/// Angle of sigma(e1, e2) / sigma(e2, e1) for a multiplier on Z^2: the flux
/// seen by the commutator of the two generators.
inline Phase commutator_phase(const Multiplier& sigma) {
    const auto& g = sigma.group();
    if (g->kind() != GroupKind::free_abelian || g->rank() != 2) throw std::invalid_argument("commutator_phase needs Z^2");
    const GroupElement e1{1, 0}, e2{0, 1};
    return sigma(e1, e2) / sigma(e2, e1);
}

}  // namespace twisted
