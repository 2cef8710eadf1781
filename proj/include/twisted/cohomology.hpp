#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "twisted/algebra.hpp"
#include "twisted/linalg.hpp"
#include "twisted/representations.hpp"

namespace twisted {

using Tuple = std::vector<GroupElement>;

/// Homogeneous group n-cochain, evaluated on (n+1)-tuples.
struct GroupCochain {
    Group group;
    int degree = 0;
    std::function<Complex(const Tuple&)> eval;
    std::string name;
    bool invariant = false;    ///< c(g x0, ..., g xn) = c(x0, ..., xn)
    bool alternating = false;  ///< sign change under transpositions

    Complex operator()(const Tuple& t) const {
        if (static_cast<int>(t.size()) != degree + 1)
            throw std::invalid_argument("cochain " + name + " of degree " + std::to_string(degree) + " needs " +
                                        std::to_string(degree + 1) + " arguments");
        return eval(t);
    }
};

/// (dc)(x0..x_{n+1}) = sum_j (-1)^j c(x0, .., x_j omitted, .., x_{n+1}).
inline GroupCochain group_differential(const GroupCochain& c) {
    GroupCochain d;
    d.group = c.group;
    d.degree = c.degree + 1;
    d.name = "d(" + c.name + ")";
    d.invariant = c.invariant;
    d.alternating = c.alternating;
    d.eval = [c](const Tuple& t) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            Tuple face;
            face.reserve(t.size() - 1);
            for (std::size_t i = 0; i < t.size(); ++i)
                if (i != j) face.push_back(t[i]);
            s += (j % 2 == 0 ? 1.0 : -1.0) * c.eval(face);
        }
        return s;
    };
    return d;
}

// ---------------------------------------------------------------------------
// Built-in cochains

/// c(g0, g1, g2) = det(g1 - g0, g2 - g0) / 2 on Z^2.
inline GroupCochain area_cochain(const Group& z2) {
    if (z2->kind() != GroupKind::free_abelian || z2->rank() != 2) throw std::invalid_argument("area-z2 needs Z^2");
    return {z2, 2,
            [](const Tuple& t) {
                const double a0 = static_cast<double>(t[1][0] - t[0][0]), a1 = static_cast<double>(t[1][1] - t[0][1]);
                const double b0 = static_cast<double>(t[2][0] - t[0][0]), b1 = static_cast<double>(t[2][1] - t[0][1]);
                return Complex(0.5 * (a0 * b1 - a1 * b0));
            },
            "area-z2", true, true};
}

/// The constant cochain of the given degree.
inline GroupCochain constant_cochain(const Group& g, int degree, Complex value = 1.0) {
    return {g, degree, [value](const Tuple&) { return value; }, "constant", true, degree == 0};
}

/// c(g0, g1) = (g1 - g0)_k on Z^n.
inline GroupCochain linear_cochain(const Group& zn, int k) {
    if (zn->kind() != GroupKind::free_abelian || k < 0 || k >= zn->rank())
        throw std::invalid_argument("linear-z(k) needs Z^n with 0 <= k < n");
    return {zn, 1,
            [k](const Tuple& t) { return Complex(static_cast<double>(t[1][static_cast<std::size_t>(k)] - t[0][static_cast<std::size_t>(k)])); },
            "linear-z(" + std::to_string(k) + ")", true, true};
}

/// Named cochain from the built-in library: area-z2, constant, linear-z(k).
inline GroupCochain cochain_by_name(const std::string& name, const Group& g, int constant_degree = 0) {
    if (name == "area-z2") return area_cochain(g);
    if (name == "constant") return constant_cochain(g, constant_degree);
    if (name.rfind("linear-z(", 0) == 0 && name.back() == ')')
        return linear_cochain(g, std::stoi(name.substr(9, name.size() - 10)));
    throw std::invalid_argument("unknown cochain '" + name + "'");
}

namespace detail {

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
    return h ^ (h >> 33);
}

}  // namespace detail

/// Invariant alternating cochain with pseudo-random values: f(x0^-1 x1, ...)
/// hashed from the seed, then antisymmetrized over all permutations.
inline GroupCochain random_cochain(const Group& g, int degree, std::uint64_t seed) {
    auto raw = [g, seed](const Tuple& t) {
        const GroupElement inv = g->inverse(t[0]);
        std::uint64_t h = seed;
        for (std::size_t i = 1; i < t.size(); ++i)
            for (auto x : g->multiply_unchecked(inv, t[i]).c) h = detail::mix(h, static_cast<std::uint64_t>(x));
        h = detail::mix(h, t.size());
        return static_cast<double>(h >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
    };
    auto eval = [raw, degree](const Tuple& t) {
        std::vector<int> perm(static_cast<std::size_t>(degree + 1));
        std::iota(perm.begin(), perm.end(), 0);
        double s = 0.0;
        do {
            int inversions = 0;
            for (std::size_t i = 0; i < perm.size(); ++i)
                for (std::size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inversions;
            Tuple p;
            for (int i : perm) p.push_back(t[static_cast<std::size_t>(i)]);
            s += (inversions % 2 == 0 ? 1.0 : -1.0) * raw(p);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return Complex(s);
    };
    return {g, degree, eval, "random(" + std::to_string(seed) + ")", true, true};
}

/// Inhomogeneous form c'(g1..gn) = c(e, g1, g1 g2, ..., g1...gn).
inline std::function<Complex(const Tuple&)> to_inhomogeneous(const GroupCochain& c) {
    return [c](const Tuple& gs) {
        Tuple t{c.group->identity()};
        for (const auto& g : gs) t.push_back(c.group->multiply_unchecked(t.back(), g));
        return c(t);
    };
}

/// Homogeneous form c(x0..xn) = c'(x0^-1 x1, x1^-1 x2, ...).
inline GroupCochain from_inhomogeneous(const Group& g, int degree, std::function<Complex(const Tuple&)> f,
                                       std::string name) {
    return {g, degree,
            [g, f](const Tuple& t) {
                Tuple gs;
                for (std::size_t i = 1; i < t.size(); ++i) gs.push_back(g->multiply_unchecked(g->inverse(t[i - 1]), t[i]));
                return f(gs);
            },
            std::move(name), true, false};
}

struct FlagReport {
    bool invariant = true;
    bool alternating = true;
    std::size_t samples = 0;
};

inline Tuple random_tuple(const std::vector<GroupElement>& pool, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    Tuple t;
    for (std::size_t i = 0; i < n; ++i) t.push_back(pool[pick(rng)]);
    return t;
}

/// Checks the invariance and alternation flags on random tuples.
inline FlagReport check_cochain_flags(const GroupCochain& c, std::size_t samples, std::uint64_t seed, double tol = 1e-12) {
    FlagReport r;
    const auto pool = c.group->is_finite() ? c.group->elements() : c.group->ball(4);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pos(0, static_cast<std::size_t>(c.degree));
    for (std::size_t s = 0; s < samples; ++s) {
        const Tuple t = random_tuple(pool, static_cast<std::size_t>(c.degree + 1), rng);
        const GroupElement g = random_tuple(pool, 1, rng)[0];
        Tuple moved;
        for (const auto& x : t) moved.push_back(c.group->multiply_unchecked(g, x));
        const Complex v = c(t);
        const double scale = std::max(1.0, std::abs(v));
        if (std::abs(c(moved) - v) > tol * scale) r.invariant = false;
        if (c.degree >= 1) {
            std::size_t i = pos(rng), j = pos(rng);
            if (i != j) {
                Tuple sw = t;
                std::swap(sw[i], sw[j]);
                if (std::abs(c(sw) + v) > tol * scale) r.alternating = false;
            }
        }
        ++r.samples;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cyclic cochains

/// Multilinear functional on C(G, sigma), stored through its values on basis tuples.
struct CyclicCochain {
    Multiplier sigma;
    int degree = 0;
    std::function<Complex(const Tuple&)> on_basis;
    std::string name;

    /// Evaluates on algebra elements by multilinear expansion.
    [[nodiscard]] Complex operator()(const std::vector<AlgebraElement>& args) const {
        if (static_cast<int>(args.size()) != degree + 1) throw std::invalid_argument("wrong number of arguments");
        Complex total = 0.0;
        Tuple t(args.size());
        std::function<void(std::size_t, Complex)> rec = [&](std::size_t i, Complex coeff) {
            if (i == args.size()) {
                total += coeff * on_basis(t);
                return;
            }
            for (const auto& [g, c] : args[i].terms()) {
                t[i] = g;
                rec(i + 1, coeff * c);
            }
        };
        rec(0, 1.0);
        return total;
    }
};

/// Product g0 g1 ... gn in the group and the phase of delta_g0 * ... * delta_gn.
inline std::pair<GroupElement, Phase> basis_product(const Multiplier& sigma, const Tuple& t) {
    const auto& G = sigma.group();
    GroupElement p = t.front();
    Phase ph = Phase::one();
    for (std::size_t i = 1; i < t.size(); ++i) {
        ph = ph * sigma.eval_unchecked(p, t[i]);
        p = G->multiply_unchecked(p, t[i]);
    }
    return {p, ph};
}

/// tau_c(delta_g0, ..., delta_gn) = tr_(2)(delta_g0 * ... * delta_gn) c(e, g1, g1 g2, ..., g1...gn).
inline CyclicCochain to_cyclic(const GroupCochain& c, const Multiplier& sigma) {
    if (!c.invariant || !c.alternating)
        throw std::invalid_argument("to_cyclic needs an invariant alternating cochain (" + c.name + ")");
    if (!same_group(c.group, sigma.group())) throw std::invalid_argument("cochain and multiplier on different groups");
    const auto inh = to_inhomogeneous(c);
    return {sigma, c.degree,
            [sigma, inh](const Tuple& t) {
                auto [p, ph] = basis_product(sigma, t);
                if (!sigma.group()->is_identity(p)) return Complex(0.0);
                return ph.value() * inh(Tuple(t.begin() + 1, t.end()));
            },
            "tau_" + c.name};
}

/// b^t tau(a0..a_{n+1}) = sum_{i=0}^{n} (-1)^i tau(.., a_i a_{i+1}, ..) + (-1)^{n+1} tau(a_{n+1} a0, a1, .., an).
inline CyclicCochain cyclic_boundary(const CyclicCochain& tau) {
    const auto sigma = tau.sigma;
    return {sigma, tau.degree + 1,
            [tau, sigma](const Tuple& t) {
                const auto& G = sigma.group();
                const std::size_t m = t.size();  // n + 2
                Complex s = 0.0;
                for (std::size_t i = 0; i + 1 < m; ++i) {
                    Tuple u;
                    for (std::size_t j = 0; j < i; ++j) u.push_back(t[j]);
                    u.push_back(G->multiply_unchecked(t[i], t[i + 1]));
                    for (std::size_t j = i + 2; j < m; ++j) u.push_back(t[j]);
                    s += (i % 2 == 0 ? 1.0 : -1.0) * sigma.eval_unchecked(t[i], t[i + 1]).value() * tau.on_basis(u);
                }
                Tuple u{G->multiply_unchecked(t[m - 1], t[0])};
                for (std::size_t j = 1; j + 1 < m; ++j) u.push_back(t[j]);
                s += ((m - 1) % 2 == 0 ? 1.0 : -1.0) * sigma.eval_unchecked(t[m - 1], t[0]).value() * tau.on_basis(u);
                return s;
            },
            "b(" + tau.name + ")"};
}

/// tr_(2) as a degree-0 cyclic cochain.
inline CyclicCochain regular_cyclic(const Multiplier& sigma) {
    return {sigma, 0,
            [sigma](const Tuple& t) { return sigma.group()->is_identity(t[0]) ? Complex(1.0) : Complex(0.0); }, "tr2"};
}

/// Random tuple of the given length whose product is e (last entry solved for).
inline Tuple random_closed_tuple(const Group& g, const std::vector<GroupElement>& pool, std::size_t n, std::mt19937_64& rng) {
    Tuple t = random_tuple(pool, n - 1, rng);
    GroupElement p = g->identity();
    for (const auto& x : t) p = g->multiply_unchecked(p, x);
    t.push_back(g->inverse(p));
    return t;
}

/// A basis tuple with product e on which tau_c takes the value of c at (e, h1, ..., hn) up to a phase.
inline Tuple injectivity_witness(const Group& g, const Tuple& h_path) {
    // h_path = (h1, ..., hn); g_i = h_{i-1}^-1 h_i with h0 = e, g0 = (g1...gn)^-1
    Tuple gs{g->identity()};
    GroupElement prev = g->identity();
    for (const auto& h : h_path) {
        gs.push_back(g->multiply_unchecked(g->inverse(prev), h));
        prev = h;
    }
    gs[0] = g->inverse(prev);
    return gs;
}

// ---------------------------------------------------------------------------
// Rapid decay norms

/// (sum |a_g|^2 (1 + l(g))^{2s})^{1/2}.
inline double sobolev_norm(const AlgebraElement& a, double s) {
    if (s < 0) throw std::invalid_argument("Sobolev order must be non-negative");
    double acc = 0.0;
    for (const auto& [g, c] : a.terms())
        acc += std::norm(c) * std::pow(1.0 + static_cast<double>(a.group()->word_length(g)), 2.0 * s);
    return std::sqrt(acc);
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct SobolevProfile {
    std::vector<double> s_grid;
    std::vector<double> sobolev;           ///< ||a||_{H^s} on s_grid
    std::vector<double> derivation_norms;  ///< ||d^i(lambda_R(a)) delta_e||, i = 0..j_max
    bool exact_identity = true;            ///< d^i(x) delta_e == D_l^i(x) bitwise for every i
    int j_max = 0;
    double constant_cauchy_schwarz = 0.0;  ///< sqrt(binom(2j, j))
    double constant_max_binomial = 0.0;    ///< max_i binom(j, i)
    double bound_ratio = 0.0;              ///< ||a||_{H^j} / sum_i ||d^i(a) delta_e||
};

/// Derivation chain of lambda_R(a) with d(T) = [D_l, T], D_l = diag(l).
/// Throws when R is smaller than the support radius of a.
inline SobolevProfile derivation_chain(const AlgebraElement& a, int j_max, std::int64_t radius,
                                       const std::vector<double>& s_grid = {0.0, 0.5, 1.0, 1.5, 2.0}) {
    if (j_max < 0) throw std::invalid_argument("j_max must be non-negative");
    if (radius < a.sup_support_length())
        throw std::invalid_argument("radius " + std::to_string(radius) + " is smaller than the support radius " +
                                    std::to_string(a.sup_support_length()));
    SobolevProfile p;
    p.j_max = j_max;
    p.s_grid = s_grid;
    for (double s : s_grid) p.sobolev.push_back(sobolev_norm(a, s));
    const auto t = left_regular(a, radius);
    const auto& G = a.group();
    const auto n = static_cast<Eigen::Index>(t.basis.size());
    CVector lengths(n);
    for (Eigen::Index i = 0; i < n; ++i) lengths(i) = static_cast<double>(G->word_length(t.basis[static_cast<std::size_t>(i)]));
    const auto e = t.position(G->identity());

    CMatrix m = t.matrix;
    CVector direct(n);  // D_l^i applied to the coefficient vector of a
    for (Eigen::Index i = 0; i < n; ++i) direct(i) = a.coefficient(t.basis[static_cast<std::size_t>(i)]);
    for (int i = 0; i <= j_max; ++i) {
        if (i > 0) {
            m = lengths.asDiagonal() * m - m * lengths.asDiagonal();
            direct = lengths.cwiseProduct(direct);
        }
        const CVector col = m.col(e);
        if (col != direct) p.exact_identity = false;
        p.derivation_norms.push_back(col.norm());
    }
    p.constant_cauchy_schwarz = std::sqrt(binomial(2 * j_max, j_max));
    for (int i = 0; i <= j_max; ++i) p.constant_max_binomial = std::max(p.constant_max_binomial, binomial(j_max, i));
    const double sum = std::accumulate(p.derivation_norms.begin(), p.derivation_norms.end(), 0.0);
    p.bound_ratio = sum > 0 ? sobolev_norm(a, j_max) / sum : 0.0;
    return p;
}

// ---------------------------------------------------------------------------
// Growth

struct GrowthFit {
    double degree = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< RMS residual of the log-log fit
};

/// Least-squares fit of log v_r against log r over r = 1..radius (zero samples skipped).
inline GrowthFit growth_fit_values(const std::vector<double>& values) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0) continue;
        xs.push_back(std::log(1.0 + static_cast<double>(i)));
        ys.push_back(std::log(values[i]));
    }
    if (xs.size() < 2) throw std::invalid_argument("growth fit needs at least two nonzero samples");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n, my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    GrowthFit f;
    f.degree = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.degree * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) rss += std::pow(ys[i] - (f.intercept + f.degree * xs[i]), 2);
    f.residual = std::sqrt(rss / n);
    return f;
}

/// Growth of r -> max |c(e, g1, ..., gn)| over g_i in ball(r), r = 1..radius.
inline GrowthFit growth_fit(const GroupCochain& c, std::int64_t radius) {
    std::vector<double> values;
    const auto& G = c.group;
    for (std::int64_t r = 1; r <= radius; ++r) {
        const auto ball = G->ball(r);
        double best = 0.0;
        Tuple t(static_cast<std::size_t>(c.degree + 1), G->identity());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == t.size()) {
                best = std::max(best, std::abs(c(t)));
                return;
            }
            for (const auto& g : ball) {
                t[i] = g;
                rec(i + 1);
            }
        };
        rec(1);
        values.push_back(best);
    }
    bool any = false;
    for (double v : values) any = any || v > 0;
    if (!any) throw std::invalid_argument("degenerate samples: cochain vanishes on every ball");
    return growth_fit_values(values);
}

/// Growth of r -> |class(g) intersected with ball(r)| for r = 1..radius.
inline GrowthFit class_growth_fit(const Group& G, const GroupElement& g, std::int64_t radius) {
    const auto cls = G->conjugacy_class(g);
    std::vector<double> values;
    for (std::int64_t r = 1; r <= radius; ++r) {
        double count = 0;
        for (const auto& x : cls)
            if (G->word_length(x) <= r) ++count;
        values.push_back(count);
    }
    return growth_fit_values(values);
}

}  // namespace twisted
