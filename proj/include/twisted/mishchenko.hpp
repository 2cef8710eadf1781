#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twisted/algebra.hpp"
#include "twisted/cohomology.hpp"
#include "twisted/multiplier.hpp"
#include "twisted/traces.hpp"

namespace twisted {

/// One grid point of a cover: patch weights chi_i, transitions g_ij on
/// overlaps and (optionally) lifts of the point into each patch chart.
struct CoverPoint {
    std::vector<double> chi;  ///< chi_i(x), zero outside supp chi_i
    std::vector<bool> active; ///< x in U_i
    std::map<std::pair<int, int>, GroupElement> transition;
    std::vector<LatticeGeometricData::Point> lift;  ///< empty when lifts are not available
};

struct CoverData {
    Group group;
    int patches = 0;
    std::vector<CoverPoint> points;
    bool has_lifts = false;
    std::string description;

    [[nodiscard]] const GroupElement& g(std::size_t point, int i, int j) const {
        return points.at(point).transition.at({i, j});
    }
};

/// Parameters of an m-patch cover of the circle R/Z.
///
/// Patch i is the arc [i/m, (i+1)/m] widened on both sides (taken cyclically);
/// chi_i^2 ramps between neighbours as cos^2/sin^2 over [b - r, b + r]
/// around each boundary b = i/m, with r = ramp * (1/m). The transition
/// jumps by jumps[i] when crossing the boundary i/m from patch i-1 to patch i.
struct CircleCoverSpec {
    int grid = 256;
    int patches = 2;
    std::vector<std::int64_t> jumps{1, 0};
    double ramp = 0.25;

    [[nodiscard]] std::int64_t winding() const {
        std::int64_t w = 0;
        for (auto j : jumps) w += j;
        return w;
    }
};

/// Builds the circle cover on Z. Lifts into R are attached when the winding is 1.
inline CoverData circle_cover(const CircleCoverSpec& spec) {
    const int m = spec.patches;
    if (m < 1) throw std::invalid_argument("cover needs at least one patch");
    if (static_cast<int>(spec.jumps.size()) != m) throw std::invalid_argument("one jump per patch boundary is required");
    if (spec.grid < 4) throw std::invalid_argument("grid too small");
    if (m == 1 && spec.jumps[0] != 0) throw std::invalid_argument("a single patch cannot carry a nonzero jump");
    if (!(spec.ramp > 0.0 && spec.ramp < 0.5)) throw std::invalid_argument("ramp must lie in (0, 1/2)");
    const Group z = GroupDescriptor::free_abelian(1);
    CoverData cover;
    cover.group = z;
    cover.patches = m;
    cover.description = "circle m=" + std::to_string(m) + " N=" + std::to_string(spec.grid);
    const Rational len(1, m);
    const double r = spec.ramp / m;
    const double margin = r + 0.5 * std::min(r, 0.5 / m - r);  // U_i extends past supp chi_i
    const bool lifts = m > 1 && spec.winding() == 1;
    cover.has_lifts = lifts || m == 1;
    // chart shifts: s_0 = 0, s_i = s_{i-1} - J_i
    std::vector<std::int64_t> shift(static_cast<std::size_t>(m), 0);
    for (int i = 1; i < m; ++i) shift[static_cast<std::size_t>(i)] = shift[static_cast<std::size_t>(i - 1)] - spec.jumps[static_cast<std::size_t>(i)];
    const Rational half_gap = (Rational(1) - len) * Rational(1, 2);

    for (int n = 0; n < spec.grid; ++n) {
        const Rational xq(n, spec.grid);
        CoverPoint p;
        p.chi.assign(static_cast<std::size_t>(m), 0.0);
        p.active.assign(static_cast<std::size_t>(m), false);
        if (m == 1) {
            p.chi[0] = 1.0;
            p.active[0] = true;
            p.transition[{0, 0}] = z->identity();
            p.lift.push_back({xq, Rational(0)});
            cover.points.push_back(std::move(p));
            continue;
        }
        // chart coordinate of x relative to the start of patch i, in [-(1-len)/2, (1+len)/2)
        std::vector<Rational> local(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const Rational b0 = len * Rational(i);
            const Rational d = (xq - b0 + half_gap).mod1() - half_gap;
            local[static_cast<std::size_t>(i)] = d;
            const double dd = d.to_double(), l = len.to_double();
            double weight = 0.0;
            if (std::fabs(dd) < r) weight = std::pow(std::sin(0.25 * std::numbers::pi * (dd + r) / r), 2);
            else if (std::fabs(dd - l) < r) weight = std::pow(std::cos(0.25 * std::numbers::pi * (dd - l + r) / r), 2);
            else if (dd > 0 && dd < l) weight = 1.0;
            p.chi[static_cast<std::size_t>(i)] = std::sqrt(weight);
            p.active[static_cast<std::size_t>(i)] = dd > -margin && dd < l + margin;
        }
        for (int i = 0; i < m; ++i) {
            if (!p.active[static_cast<std::size_t>(i)]) continue;
            p.transition[{i, i}] = z->identity();
            const int prev = (i + m - 1) % m;
            // boundary i/m between prev and i
            if (p.active[static_cast<std::size_t>(prev)] && std::fabs(local[static_cast<std::size_t>(i)].to_double()) < margin) {
                p.transition[{i, prev}] = GroupElement{spec.jumps[static_cast<std::size_t>(i)]};
                p.transition[{prev, i}] = GroupElement{-spec.jumps[static_cast<std::size_t>(i)]};
            }
        }
        if (lifts)
            for (int i = 0; i < m; ++i)
                p.lift.push_back({len * Rational(i) + local[static_cast<std::size_t>(i)] + Rational(shift[static_cast<std::size_t>(i)]),
                                  Rational(0)});
        cover.points.push_back(std::move(p));
    }
    return cover;
}

/// Product of two circle covers on the torus with group Z^2; patch (i, j) has index i * m2 + j.
inline CoverData torus_cover(const CoverData& a, const CoverData& b) {
    if (a.points.size() != b.points.size()) throw std::invalid_argument("torus factors need the same grid");
    const Group z2 = GroupDescriptor::free_abelian(2);
    CoverData c;
    c.group = z2;
    c.patches = a.patches * b.patches;
    c.has_lifts = a.has_lifts && b.has_lifts;
    c.description = "torus(" + a.description + " x " + b.description + ")";
    for (const auto& pa : a.points)
        for (const auto& pb : b.points) {
            CoverPoint p;
            p.chi.assign(static_cast<std::size_t>(c.patches), 0.0);
            p.active.assign(static_cast<std::size_t>(c.patches), false);
            for (int i = 0; i < a.patches; ++i)
                for (int j = 0; j < b.patches; ++j) {
                    const auto idx = static_cast<std::size_t>(i * b.patches + j);
                    p.chi[idx] = pa.chi[static_cast<std::size_t>(i)] * pb.chi[static_cast<std::size_t>(j)];
                    p.active[idx] = pa.active[static_cast<std::size_t>(i)] && pb.active[static_cast<std::size_t>(j)];
                    if (c.has_lifts)
                        p.lift.push_back({pa.lift[static_cast<std::size_t>(i)][0], pb.lift[static_cast<std::size_t>(j)][0]});
                }
            for (const auto& [ka, ga] : pa.transition)
                for (const auto& [kb, gb] : pb.transition) {
                    const int i = ka.first * b.patches + kb.first, j = ka.second * b.patches + kb.second;
                    p.transition[{i, j}] = GroupElement{ga[0], gb[0]};
                }
            c.points.push_back(std::move(p));
        }
    return c;
}

struct CoverReport {
    bool pass = true;
    double partition_defect = 0.0;  ///< max |sum chi^2 - 1|
    std::string detail;
};

/// Checks the cocycle condition g_ij g_jk = g_ik on triple overlaps, g_ii = e,
/// the partition identity and (when present) the lift relation x_i = x_j - g_ij.
inline CoverReport check_cover(const CoverData& c) {
    CoverReport r;
    const auto& G = c.group;
    for (std::size_t n = 0; n < c.points.size(); ++n) {
        const auto& p = c.points[n];
        double s = 0.0;
        for (double x : p.chi) s += x * x;
        r.partition_defect = std::max(r.partition_defect, std::fabs(s - 1.0));
        for (int i = 0; i < c.patches; ++i)
            if (p.chi[static_cast<std::size_t>(i)] > 0 && !p.active[static_cast<std::size_t>(i)]) {
                r.pass = false;
                r.detail = "supp chi not inside U at point " + std::to_string(n);
            }
        for (const auto& [ij, g] : p.transition) {
            if (ij.first == ij.second && !G->is_identity(g)) {
                r.pass = false;
                r.detail = "g_ii != e at point " + std::to_string(n);
            }
            for (const auto& [jk, h] : p.transition) {
                if (jk.first != ij.second) continue;
                auto it = p.transition.find({ij.first, jk.second});
                if (it == p.transition.end()) continue;
                if (G->multiply_unchecked(g, h) != it->second) {
                    r.pass = false;
                    r.detail = "cocycle condition fails at point " + std::to_string(n);
                }
            }
            if (c.has_lifts) {
                const auto& li = p.lift[static_cast<std::size_t>(ij.first)];
                const auto& lj = p.lift[static_cast<std::size_t>(ij.second)];
                for (std::size_t d = 0; d < g.size(); ++d)
                    if (li[d] != lj[d] - Rational(g[d])) {
                        r.pass = false;
                        r.detail = "lift relation fails at point " + std::to_string(n);
                    }
            }
        }
    }
    if (r.partition_defect > 1e-14) {
        r.pass = false;
        if (r.detail.empty()) r.detail = "partition of unity defect " + std::to_string(r.partition_defect);
    }
    return r;
}

/// Entry of P: phase * coeff * delta_g.
struct Monomial {
    GroupElement g;
    Phase phase;
    double coeff = 0.0;
};

/// P(x) at every grid point, as exact monomials and as algebra matrices.
struct ProjectionField {
    Multiplier sigma;
    int patches = 0;
    std::vector<std::vector<std::optional<Monomial>>> entries;  ///< per point, row-major m x m

    [[nodiscard]] AlgebraMatrix matrix(std::size_t point) const {
        AlgebraMatrix out(sigma, static_cast<std::size_t>(patches));
        for (int i = 0; i < patches; ++i)
            for (int j = 0; j < patches; ++j) {
                const auto& e = entries[point][static_cast<std::size_t>(i * patches + j)];
                if (e) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                           AlgebraElement::delta(sigma, e->g, e->coeff * e->phase.value());
            }
        return out;
    }
};

/// P_ij = exp(-2 pi i psi^s_{g_ij}(x_j)) chi_i chi_j delta_{g_ij}, with sigma^s
/// the geometric multiplier of `data` raised to s. Without geometric data the
/// phases are 1 and `sigma` is used as given.
inline ProjectionField build_projection(const CoverData& cover, const Multiplier& sigma,
                                        const std::optional<LatticeGeometricData>& data = std::nullopt,
                                        const Rational& s = Rational(1)) {
    const auto report = check_cover(cover);
    if (!report.pass) throw std::invalid_argument("cover is invalid: " + report.detail);
    if (!same_group(cover.group, sigma.group())) throw std::invalid_argument("cover and multiplier on different groups");
    if (data && !cover.has_lifts) throw std::invalid_argument("geometric phases need lifts of the grid points");
    ProjectionField f;
    f.sigma = sigma;
    f.patches = cover.patches;
    const auto m = static_cast<std::size_t>(cover.patches);
    for (const auto& p : cover.points) {
        std::vector<std::optional<Monomial>> row(m * m);
        for (const auto& [ij, g] : p.transition) {
            const double coeff = p.chi[static_cast<std::size_t>(ij.first)] * p.chi[static_cast<std::size_t>(ij.second)];
            if (coeff == 0.0) continue;
            Phase ph = Phase::one();
            if (data) ph = Phase::turns(-s * data->psi(g, p.lift[static_cast<std::size_t>(ij.second)]));
            row[static_cast<std::size_t>(ij.first) * m + static_cast<std::size_t>(ij.second)] = Monomial{g, ph, coeff};
        }
        f.entries.push_back(std::move(row));
    }
    return f;
}

/// Replaces every lift x by the deck translate x - gamma. The lift relation
/// x_i = x_j - g_ij is preserved because the group is abelian.
inline CoverData shift_lifts(CoverData c, const GroupElement& gamma) {
    if (!c.has_lifts) throw std::invalid_argument("cover has no lifts");
    if (gamma.size() > 2) throw std::invalid_argument("lift shift needs an element of Z or Z^2");
    for (auto& p : c.points)
        for (auto& x : p.lift)
            for (std::size_t a = 0; a < gamma.size(); ++a) x[a] -= Rational(gamma[a]);
    return c;
}

/// Checks b = D a D^* at every point with D = diag(u_i) a scalar phase on the
/// patches whose weight is nonzero: same supports and coefficients, and the
/// phase ratio of entry (i,j) factors as u_i conj(u_j).
inline bool related_by_diagonal_phase(const ProjectionField& a, const ProjectionField& b, std::string* witness = nullptr) {
    auto fail = [&](const std::string& w) {
        if (witness) *witness = w;
        return false;
    };
    if (a.patches != b.patches || a.entries.size() != b.entries.size()) return fail("shape mismatch");
    const auto m = static_cast<std::size_t>(a.patches);
    for (std::size_t n = 0; n < a.entries.size(); ++n) {
        const auto& ea = a.entries[n];
        const auto& eb = b.entries[n];
        std::optional<std::size_t> ref;
        for (std::size_t i = 0; i < m && !ref; ++i)
            if (ea[i * m + i]) ref = i;
        if (!ref) continue;
        std::vector<std::optional<Phase>> u(m);
        for (std::size_t i = 0; i < m; ++i) {
            const auto& x = ea[i * m + *ref];
            const auto& y = eb[i * m + *ref];
            if (x && y) u[i] = y->phase * x->phase.conj();
        }
        for (std::size_t k = 0; k < m * m; ++k) {
            const auto& x = ea[k];
            const auto& y = eb[k];
            const std::string where = "point " + std::to_string(n) + " entry " + std::to_string(k);
            if (!x && !y) continue;
            if (!x || !y || x->g != y->g || x->coeff != y->coeff) return fail(where + ": support");
            const auto i = k / m, j = k % m;
            if (!u[i] || !u[j] || !(y->phase == x->phase * *u[i] * u[j]->conj())) return fail(where + ": phase");
        }
    }
    return true;
}

struct ProjectionReport {
    bool idempotent = true;       ///< P^2 = P: phases exact, coefficients within tol
    bool self_adjoint = true;     ///< P^* = P: phases exact, coefficients within tol
    double worst_coefficient = 0.0;
    double worst_numeric = 0.0;   ///< max entry distance of P^2 - P and P^* - P in floating point
    std::size_t points = 0;
    std::string witness;
};

/// Verifies P^2 = P and P^* = P at every grid point on exact monomials, and
/// cross-checks with floating-point algebra matrices on every `numeric_stride`-th point.
inline ProjectionReport check_projection(const ProjectionField& f, double tol = 1e-13, std::size_t numeric_stride = 1) {
    ProjectionReport r;
    const auto& G = f.sigma.group();
    const auto m = static_cast<std::size_t>(f.patches);
    for (std::size_t n = 0; n < f.entries.size(); ++n) {
        const auto& e = f.entries[n];
        auto at = [&](std::size_t i, std::size_t j) -> const std::optional<Monomial>& { return e[i * m + j]; };
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                double sum = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    const auto& a = at(i, j);
                    const auto& b = at(j, k);
                    if (!a || !b) continue;
                    const auto g = G->multiply_unchecked(a->g, b->g);
                    const Phase ph = a->phase * b->phase * f.sigma.eval_unchecked(a->g, b->g);
                    const auto& target = at(i, k);
                    if (!target || target->g != g || !(target->phase == ph)) {
                        r.idempotent = false;
                        if (r.witness.empty())
                            r.witness = "P^2 phase/support mismatch at point " + std::to_string(n) + " entry (" +
                                        std::to_string(i) + "," + std::to_string(k) + ")";
                        continue;
                    }
                    sum += a->coeff * b->coeff;
                }
                const double want = at(i, k) ? at(i, k)->coeff : 0.0;
                r.worst_coefficient = std::max(r.worst_coefficient, std::fabs(sum - want));
                if (std::fabs(sum - want) > tol) {
                    r.idempotent = false;
                    if (r.witness.empty()) r.witness = "P^2 coefficient mismatch at point " + std::to_string(n);
                }
                // (P^*)_ik = (P_ki)^* = conj(c) conj(sigma(g, g^-1)) delta_{g^-1}
                const auto& ki = at(k, i);
                const auto& ik = at(i, k);
                if (!ki && !ik) continue;
                if (!ki || !ik) {
                    r.self_adjoint = false;
                    if (r.witness.empty()) r.witness = "P^* support mismatch at point " + std::to_string(n);
                    continue;
                }
                const auto ginv = G->inverse(ki->g);
                const Phase ph = ki->phase.conj() * f.sigma.eval_unchecked(ki->g, ginv).conj();
                if (ginv != ik->g || !(ph == ik->phase) || std::fabs(ki->coeff - ik->coeff) > tol) {
                    r.self_adjoint = false;
                    if (r.witness.empty()) r.witness = "P^* mismatch at point " + std::to_string(n);
                }
            }
        if (numeric_stride && n % numeric_stride == 0) {
            const auto p = f.matrix(n);
            r.worst_numeric = std::max({r.worst_numeric, (p * p).distance(p), p.adjoint().distance(p)});
        }
        ++r.points;
    }
    return r;
}

/// Grid average of tau(tr P(x)).
inline Complex rank_trace(const ProjectionField& f, const TraceFunctional& tau) {
    Complex s = 0.0;
    for (std::size_t n = 0; n < f.entries.size(); ++n) s += matrix_trace(tau, f.matrix(n));
    return s / static_cast<double>(f.entries.size());
}

/// sum_n sum_{i0,i1} chi_{i0}^2(x_n) [chi_{i1}^2(x_{n+1}) - chi_{i1}^2(x_{n-1})]/2 c(e, g_{i1 i0}(x_n)).
/// Requires c to be a closed degree-1 cochain on the cover's group.
inline double lott_pairing_circle(const CoverData& cover, const GroupCochain& c) {
    if (c.degree != 1) throw std::invalid_argument("circle pairing needs a degree-1 cochain");
    if (!same_group(c.group, cover.group)) throw std::invalid_argument("cochain on another group");
    {
        const auto d = group_differential(c);
        std::mt19937_64 rng(17);
        const auto pool = c.group->ball(4);
        for (int i = 0; i < 200; ++i)
            if (std::abs(d(random_tuple(pool, 3, rng))) > 1e-12) throw std::invalid_argument("cochain " + c.name + " is not closed");
    }
    const auto e = c.group->identity();
    const std::size_t n = cover.points.size();
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& p = cover.points[k];
        const auto& next = cover.points[(k + 1) % n];
        const auto& prev = cover.points[(k + n - 1) % n];
        for (const auto& [ij, g] : p.transition) {
            // ij = (i1, i0): g = g_{i1 i0}
            const auto i1 = static_cast<std::size_t>(ij.first), i0 = static_cast<std::size_t>(ij.second);
            const double w0 = p.chi[i0] * p.chi[i0];
            if (w0 == 0.0) continue;
            const double dw1 = 0.5 * (next.chi[i1] * next.chi[i1] - prev.chi[i1] * prev.chi[i1]);
            if (dw1 == 0.0) continue;
            total += w0 * dw1 * c({e, g}).real();
        }
    }
    return total;
}

}  // namespace twisted
