#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twisted/algebra.hpp"
#include "twisted/linalg.hpp"
#include "twisted/multiplier.hpp"

namespace twisted {

/// Homomorphism between group descriptors given elementwise.
struct GroupHom {
    Group source;
    Group target;
    std::function<GroupElement(const GroupElement&)> map;
    std::string name;

    GroupElement operator()(const GroupElement& g) const { return map(g); }

    /// Checks phi(gh) = phi(g) phi(h) on a sample of pairs; throws on failure.
    void verify(std::size_t samples = 200, std::uint64_t seed = 7) const {
        const auto pool = source->is_finite() ? source->elements() : source->ball(4);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (std::size_t i = 0; i < samples; ++i) {
            const auto& g = pool[pick(rng)];
            const auto& h = pool[pick(rng)];
            if (map(source->multiply(g, h)) != target->multiply(map(g), map(h)))
                throw std::invalid_argument("map " + name + " is not a homomorphism at " + g.str() + "," + h.str());
        }
    }
};

inline Group trivial_group() { return GroupDescriptor::finite_table({{0}}, 0, {}, "1"); }

inline GroupHom identity_hom(const Group& g) { return {g, g, [](const GroupElement& x) { return x; }, "id"}; }

inline GroupHom trivial_hom(const Group& g) {
    return {g, trivial_group(), [](const GroupElement&) { return GroupElement{0}; }, "trivial"};
}

/// Linear functional on C(G, sigma), stored through its values w(g) = tau(delta_g).
class TraceFunctional {
public:
    using Weight = std::function<Complex(const GroupElement&)>;

    TraceFunctional(Multiplier sigma, std::string kind, std::string name, Weight w)
        : sigma_(std::move(sigma)), kind_(std::move(kind)), name_(std::move(name)), w_(std::move(w)) {}

    [[nodiscard]] const Multiplier& multiplier() const { return sigma_; }
    [[nodiscard]] const Group& group() const { return sigma_.group(); }
    [[nodiscard]] const std::string& kind() const { return kind_; }
    [[nodiscard]] const std::string& name() const { return name_; }

    [[nodiscard]] Complex on_basis(const GroupElement& g) const { return w_(g); }

    [[nodiscard]] Complex operator()(const AlgebraElement& a) const {
        if (!same_group(a.group(), group())) throw std::invalid_argument("trace applied to an element of another group");
        Complex s = 0.0;
        for (const auto& [g, c] : a.terms()) s += c * w_(g);
        return s;
    }

    [[nodiscard]] bool is_delocalized(double tol = 1e-14) const { return std::abs(w_(group()->identity())) <= tol; }

private:
    Multiplier sigma_;
    std::string kind_, name_;
    Weight w_;
};

/// tr_(2)(a) = a_e.
inline TraceFunctional regular_trace(const Multiplier& sigma) {
    const auto e = sigma.group()->identity();
    return TraceFunctional(sigma, "regular", "tr2", [e](const GroupElement& g) { return g == e ? Complex(1.0) : Complex(0.0); });
}

/// tr_1(a) = sum of all coefficients.
inline TraceFunctional one_dim_trace(const Multiplier& sigma) {
    return TraceFunctional(sigma, "one-dim", "tr1", [](const GroupElement&) { return Complex(1.0); });
}

/// tau<g>(a) = sum of a over the conjugacy class of g.
inline TraceFunctional conjugacy_trace(const Multiplier& sigma, const GroupElement& g) {
    const auto& G = sigma.group();
    G->require(g);
    if (!G->is_finite() && !G->is_abelian()) throw std::invalid_argument("conjugacy class may be infinite");
    const auto cls = G->conjugacy_class(g);
    const std::set<GroupElement> members(cls.begin(), cls.end());
    return TraceFunctional(sigma, "conjugacy", "tau<" + g.str() + ">",
                           [members](const GroupElement& x) { return members.count(x) ? Complex(1.0) : Complex(0.0); });
}

/// sum_i c_i tau_i.
inline TraceFunctional linear_combination(const std::vector<std::pair<Complex, TraceFunctional>>& parts) {
    if (parts.empty()) throw std::invalid_argument("empty linear combination");
    const auto& sigma = parts.front().second.multiplier();
    std::string name;
    for (const auto& [c, t] : parts) {
        if (!t.multiplier().same_as(sigma)) throw std::invalid_argument("combining traces over different multipliers");
        if (!name.empty()) name += "+";
        name += "(" + std::to_string(c.real()) + ")" + t.name();
    }
    return TraceFunctional(sigma, "linear-combination", name, [parts](const GroupElement& g) {
        Complex s = 0.0;
        for (const auto& [c, t] : parts) s += c * t.on_basis(g);
        return s;
    });
}

/// (tau (x) tr_(2))(a) = sum_g a_(g,e) tau(delta_g) on Gamma x G, with the
/// multiplier pulled back from the right factor.
inline TraceFunctional product_trace(const Group& product, const TraceFunctional& left, const Multiplier& right) {
    if (left.multiplier().kind() != "trivial")
        throw std::invalid_argument("product trace needs an untwisted left factor");
    const Multiplier sigma = pullback_from_right(product, right);
    const auto p = product;
    const auto e_right = right.group()->identity();
    return TraceFunctional(sigma, "product", left.name() + "(x)tr2", [p, left, e_right](const GroupElement& g) {
        auto [a, b] = p->split(g);
        return b == e_right ? left.on_basis(a) : Complex(0.0);
    });
}

/// Samples pairs and throws unless sigma(g,h) = sigma_H(pi g, pi h).
inline void require_pullback(const Multiplier& sigma, const GroupHom& pi, const Multiplier& sigma_h) {
    const auto& G = sigma.group();
    const auto pool = comparison_set(G);
    const std::size_t limit = std::min<std::size_t>(pool.size(), 40);
    for (std::size_t i = 0; i < limit; ++i)
        for (std::size_t j = 0; j < limit; ++j)
            if (!(sigma.eval_unchecked(pool[i], pool[j]) == sigma_h.eval_unchecked(pi(pool[i]), pi(pool[j]))))
                throw std::invalid_argument("multiplier is not pulled back along " + pi.name);
}

/// tau_H(pi_* a) for a surjection pi: Gamma -> H and sigma = pi^* sigma_H.
inline TraceFunctional pullback_trace(const Multiplier& sigma, const GroupHom& pi, const TraceFunctional& tau_h) {
    require_pullback(sigma, pi, tau_h.multiplier());
    return TraceFunctional(sigma, "pullback", tau_h.name() + "o" + pi.name,
                           [pi, tau_h](const GroupElement& g) { return tau_h.on_basis(pi(g)); });
}

/// Finite-dimensional unitary representation of a group, given on the
/// (symmetrized) generating set and extended multiplicatively.
class UnitaryRep {
public:
    UnitaryRep(Group g, std::map<GroupElement, CMatrix> on_generators) : group_(std::move(g)) {
        if (on_generators.empty()) throw std::invalid_argument("unitary representation needs generator images");
        dim_ = on_generators.begin()->second.rows();
        for (auto& [s, m] : on_generators) {
            group_->require(s);
            if (m.rows() != dim_ || m.cols() != dim_) throw ShapeError("generator images differ in size");
            if (max_abs(m * m.adjoint() - CMatrix::Identity(dim_, dim_)) > 1e-10)
                throw std::invalid_argument("generator image is not unitary");
        }
        gens_ = std::move(on_generators);
        for (const auto& s : group_->generators())
            if (!gens_.count(s)) {
                auto inv = group_->inverse(s);
                if (!gens_.count(inv)) throw std::invalid_argument("missing image of generator " + s.str());
                gens_[s] = gens_[inv].adjoint();
            }
        if (group_->is_finite()) {
            // BFS closure; any inconsistency shows up in verify()
            std::queue<GroupElement> todo;
            const auto e = group_->identity();
            table_[e] = CMatrix::Identity(dim_, dim_);
            todo.push(e);
            while (!todo.empty()) {
                auto x = todo.front();
                todo.pop();
                for (const auto& [s, m] : gens_) {
                    auto y = group_->multiply_unchecked(x, s);
                    if (!table_.count(y)) {
                        table_[y] = table_[x] * m;
                        todo.push(y);
                    }
                }
            }
        } else if (group_->kind() != GroupKind::free_abelian) {
            throw std::invalid_argument("unitary representations are supported on finite groups and Z^k");
        }
        verify();
    }

    [[nodiscard]] Eigen::Index dimension() const { return dim_; }
    [[nodiscard]] const Group& group() const { return group_; }

    [[nodiscard]] CMatrix operator()(const GroupElement& g) const {
        if (group_->is_finite()) return table_.at(g);
        CMatrix m = CMatrix::Identity(dim_, dim_);
        for (std::size_t i = 0; i < g.size(); ++i) {
            GroupElement unit(std::vector<std::int64_t>(g.size(), 0));
            unit.c[i] = 1;
            const CMatrix& u = gens_.at(unit);
            const CMatrix step = g[i] >= 0 ? u : CMatrix(u.adjoint());
            for (std::int64_t k = 0; k < std::abs(g[i]); ++k) m = m * step;
        }
        return m;
    }

private:
    void verify() const {
        const auto pool = group_->is_finite() ? group_->elements() : group_->ball(3);
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (int i = 0; i < 200; ++i) {
            const auto& g = pool[pick(rng)];
            const auto& h = pool[pick(rng)];
            if (max_abs((*this)(g) * (*this)(h) - (*this)(group_->multiply_unchecked(g, h))) > 1e-9)
                throw std::invalid_argument("generator images do not define a representation (fails at " + g.str() + "," +
                                            h.str() + ")");
        }
    }

    Group group_;
    Eigen::Index dim_ = 0;
    std::map<GroupElement, CMatrix> gens_;
    std::map<GroupElement, CMatrix> table_;
};

/// tau_{u,H}(a) = sum_g a_g tr(u(g)) tau_H(delta_{pi g}), with sigma = pi^* sigma_H.
inline TraceFunctional unitary_trace(const Multiplier& sigma, const UnitaryRep& u, const GroupHom& pi,
                                     const TraceFunctional& tau_h) {
    if (!same_group(u.group(), sigma.group())) throw std::invalid_argument("representation lives on another group");
    require_pullback(sigma, pi, tau_h.multiplier());
    return TraceFunctional(sigma, "unitary", "tau_u," + tau_h.name(),
                           [u, pi, tau_h](const GroupElement& g) { return u(g).trace() * tau_h.on_basis(pi(g)); });
}

/// sum_i tau(A_ii) for a square matrix over the algebra.
inline Complex matrix_trace(const TraceFunctional& tau, const AlgebraMatrix& a) { return tau(a.diagonal_sum()); }

// ---------------------------------------------------------------------------
// Characters

/// All homomorphisms G -> U(1) of a finite group, as exact angle data.
/// Generator values are drawn from roots of unity of the generator's order;
/// candidates are propagated by BFS and kept only if multiplicative.
inline std::vector<CoboundaryData> finite_characters(const Group& G) {
    if (!G->is_finite()) throw std::invalid_argument("character enumeration needs a finite group");
    const auto elements = G->elements();
    const auto e = G->identity();
    auto order_of = [&](const GroupElement& g) {
        std::int64_t k = 1;
        for (GroupElement x = g; x != e; x = G->multiply_unchecked(x, g)) ++k;
        return k;
    };
    // non-redundant generators: keep s unless it already lies in the span of the kept ones
    std::vector<GroupElement> gens;
    std::set<GroupElement> span{e};
    for (const auto& s : G->generators()) {
        if (span.count(s)) continue;
        gens.push_back(s);
        std::queue<GroupElement> todo;
        for (const auto& x : span) todo.push(x);
        while (!todo.empty()) {
            auto x = todo.front();
            todo.pop();
            for (const auto& t : gens) {
                auto y = G->multiply_unchecked(x, t);
                if (span.insert(y).second) todo.push(y);
            }
        }
    }
    std::vector<std::int64_t> orders;
    for (const auto& s : gens) orders.push_back(order_of(s));

    std::vector<CoboundaryData> out;
    std::vector<std::int64_t> choice(gens.size(), 0);
    while (true) {
        std::map<GroupElement, Rational> angle{{e, Rational(0)}};
        std::queue<GroupElement> todo;
        todo.push(e);
        bool ok = true;
        while (!todo.empty() && ok) {
            auto x = todo.front();
            todo.pop();
            for (std::size_t i = 0; i < gens.size() && ok; ++i) {
                auto y = G->multiply_unchecked(x, gens[i]);
                const Rational v = (angle[x] + Rational(choice[i], orders[i])).mod1();
                auto it = angle.find(y);
                if (it == angle.end()) {
                    angle.emplace(y, v);
                    todo.push(y);
                } else if (it->second != v) {
                    ok = false;
                }
            }
        }
        if (ok)
            for (const auto& a : elements) {
                for (const auto& b : elements)
                    if ((angle[a] + angle[b] - angle[G->multiply_unchecked(a, b)]).mod1() != Rational(0)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
        if (ok) {
            std::string key = "character{";
            for (std::size_t i = 0; i < gens.size(); ++i) key += Rational(choice[i], orders[i]).str() + ";";
            out.push_back(CoboundaryData(G, [angle](const GroupElement& g) { return angle.at(g); }, key + "}"));
        }
        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == orders[i]) choice[i++] = 0;
        if (i == choice.size()) break;
    }
    return out;
}

/// True when z is a homomorphism on the comparison set.
inline bool is_character(const CoboundaryData& z) {
    const auto& G = z.group();
    const auto set = comparison_set(G);
    for (const auto& a : set)
        for (const auto& b : set)
            if ((z.angle(a) + z.angle(b) - z.angle(G->multiply_unchecked(a, b))).mod1() != Rational(0)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Property checks

struct TraceReport {
    bool pass = true;
    bool sampled = false;
    std::size_t checked = 0;
    double worst = 0.0;
    std::vector<std::string> witnesses;

    void record(double defect, double tol, const std::string& witness) {
        ++checked;
        worst = std::max(worst, defect);
        if (defect > tol) {
            pass = false;
            if (witnesses.size() < 5) witnesses.push_back(witness);
        }
    }
};

/// Basis test set for trace checks: all elements of a finite group, a ball otherwise.
inline std::vector<GroupElement> trace_test_set(const Group& G, std::int64_t radius = 3) {
    return G->is_finite() ? G->elements() : G->ball(radius);
}

/// tau(delta_g * delta_h) = tau(delta_h * delta_g) on all basis pairs of the
/// test set (which suffices by bilinearity on that span).
inline TraceReport check_trace_property(const TraceFunctional& tau, double tol = 0.0, std::int64_t radius = 3) {
    TraceReport r;
    const auto& G = tau.group();
    const auto& sigma = tau.multiplier();
    const auto set = trace_test_set(G, radius);
    r.sampled = !G->is_finite();
    for (const auto& g : set)
        for (const auto& h : set) {
            const Complex ab = sigma.eval_unchecked(g, h).value() * tau.on_basis(G->multiply_unchecked(g, h));
            const Complex ba = sigma.eval_unchecked(h, g).value() * tau.on_basis(G->multiply_unchecked(h, g));
            r.record(std::abs(ab - ba), tol, g.str() + "," + h.str());
        }
    return r;
}

/// tau(b_chi(delta_g)) = tau(delta_g) on the test set.
inline TraceReport check_invariance(const TraceFunctional& tau, const CoboundaryData& chi, double tol = 0.0,
                                    std::int64_t radius = 3) {
    if (!same_group(tau.group(), chi.group())) throw std::invalid_argument("character on another group");
    TraceReport r;
    r.sampled = !tau.group()->is_finite();
    for (const auto& g : trace_test_set(tau.group(), radius))
        r.record(std::abs(tau.on_basis(g) * (chi(g).value() - 1.0)), tol, g.str());
    return r;
}

/// Random element supported on the test set with Gaussian coefficients.
inline AlgebraElement random_element(const Multiplier& sigma, std::mt19937_64& rng, std::int64_t radius = 3,
                                     std::size_t max_terms = 6) {
    const auto pool = trace_test_set(sigma.group(), radius);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    AlgebraElement a(sigma);
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& g = pool[pick(rng)];
        a.add_term(g, random_complex(rng));
    }
    return a;
}

/// tau(a* a) >= -tol (real part, imaginary part within tol) on random samples.
inline TraceReport check_positivity(const TraceFunctional& tau, std::size_t samples, std::uint64_t seed,
                                    double tol = 1e-12) {
    TraceReport r;
    r.sampled = true;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto a = random_element(tau.multiplier(), rng);
        const Complex v = tau(a.star() * a);
        const double scale = std::max(1.0, a.l1_norm() * a.l1_norm());
        const double defect = std::max(-v.real(), std::fabs(v.imag())) / scale;
        r.record(std::max(0.0, defect), tol, a.str());
    }
    return r;
}

}  // namespace twisted
