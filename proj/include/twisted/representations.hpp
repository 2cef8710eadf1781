#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twisted/algebra.hpp"
#include "twisted/linalg.hpp"
#include "twisted/multiplier.hpp"

namespace twisted {

/// Compression of the left regular representation to span{delta_x : x in ball(R)}.
struct TruncatedOperator {
    std::vector<GroupElement> basis;
    std::map<GroupElement, Eigen::Index> index;
    CMatrix matrix;
    std::int64_t radius = 0;

    [[nodiscard]] Eigen::Index position(const GroupElement& g) const {
        auto it = index.find(g);
        if (it == index.end()) throw std::out_of_range("element " + g.str() + " is outside the truncation ball");
        return it->second;
    }
};

/// lambda_R(a): entry (gx, x) collects a_g sigma(g, x) for gx inside the ball.
inline TruncatedOperator left_regular(const AlgebraElement& a, std::int64_t radius) {
    if (radius < 0) throw std::invalid_argument("truncation radius must be non-negative");
    const auto& G = a.group();
    const auto& sigma = a.multiplier();
    TruncatedOperator t;
    t.radius = radius;
    t.basis = G->ball(radius);
    for (std::size_t i = 0; i < t.basis.size(); ++i) t.index.emplace(t.basis[i], static_cast<Eigen::Index>(i));
    const auto n = static_cast<Eigen::Index>(t.basis.size());
    t.matrix = CMatrix::Zero(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const auto& x = t.basis[static_cast<std::size_t>(col)];
        for (const auto& [g, c] : a.terms()) {
            auto it = t.index.find(G->multiply_unchecked(g, x));
            if (it != t.index.end()) t.matrix(it->second, col) += c * sigma.eval_unchecked(g, x).value();
        }
    }
    return t;
}

/// Coefficients of the nearest-neighbour magnetic operator on Z^2.
struct HarperCoefficients {
    double t_x = 1.0;
    double t_y = 1.0;
    double t_diag = 0.0;
    double onsite = 0.0;
};

/// H = sum_d t_d (delta_d + delta_d^*) + onsite delta_e for d in {(1,0), (0,1), (1,1)}.
/// Built through the involution, so H^* = H for every multiplier on Z^2.
inline AlgebraElement harper_element(const Multiplier& sigma, const HarperCoefficients& c = {}) {
    const auto& G = sigma.group();
    if (G->kind() != GroupKind::free_abelian || G->rank() != 2)
        throw std::invalid_argument("harper_element needs a multiplier on Z^2");
    AlgebraElement h = c.onsite * AlgebraElement::unit(sigma);
    const std::array<std::pair<GroupElement, double>, 3> hops{
        {{GroupElement{1, 0}, c.t_x}, {GroupElement{0, 1}, c.t_y}, {GroupElement{1, 1}, c.t_diag}}};
    for (const auto& [d, t] : hops) {
        if (t == 0.0) continue;
        const auto hop = AlgebraElement::delta(sigma, d);
        h = h + t * (hop + hop.star());
    }
    return h;
}

inline AlgebraElement harper_element(const Rational& theta, const HarperCoefficients& c = {}) {
    return harper_element(magnetic_multiplier(GroupDescriptor::free_abelian(2), theta), c);
}

struct Momentum {
    double k1 = 0.0;
    double k2 = 0.0;
};

/// q-dimensional clock-and-shift representations of C(Z^2, sigma) for an
/// exact multiplier whose commutator phase sigma(e1,e2)/sigma(e2,e1) is p/q.
///
/// pi_k(delta_e1) = U = e^{ik1} diag(zeta^j), pi_k(delta_e2) = V = e^{ik2} S with
/// S e_j = e_{j+1}, zeta = e^{2 pi i p/q}, so UV = zeta VU. A general delta_g
/// is sent to m(g)^{-1} V^b U^a where delta_e2^b * delta_e1^a = m(g) delta_g.
class BlochRepresentation {
public:
    explicit BlochRepresentation(Multiplier sigma) : sigma_(std::move(sigma)) {
        const auto& G = sigma_.group();
        if (G->kind() != GroupKind::free_abelian || G->rank() != 2)
            throw std::invalid_argument("Bloch fibers need a multiplier on Z^2");
        if (!sigma_.lift(GroupElement{1, 0}, GroupElement{0, 1}))
            throw std::invalid_argument("Bloch fibers need rational flux (exact multiplier)");
        flux_ = commutator_phase(sigma_).exact_turns();
        q_ = flux_.den();
    }

    [[nodiscard]] const Multiplier& multiplier() const { return sigma_; }
    [[nodiscard]] const Rational& flux() const { return flux_; }
    [[nodiscard]] std::int64_t dimension() const { return q_; }

    /// m(g) with delta_e2^b * delta_e1^a = m(g) delta_g (negative powers via the involution).
    [[nodiscard]] Phase monomial_phase(const GroupElement& g) const {
        auto it = cache_.find(g);
        if (it != cache_.end()) return it->second;
        const auto& G = sigma_.group();
        Phase m = Phase::one();
        GroupElement pos = G->identity();
        auto step = [&](const GroupElement& gen, bool inverse) {
            // delta_gen^* = conj(sigma(gen, gen^-1)) delta_{gen^-1}
            GroupElement s = gen;
            Phase f = Phase::one();
            if (inverse) {
                s = G->inverse(gen);
                f = sigma_.eval_unchecked(gen, s).conj();
            }
            m = m * f * sigma_.eval_unchecked(pos, s);
            pos = G->multiply_unchecked(pos, s);
        };
        const std::int64_t a = g[0], b = g[1];
        for (std::int64_t i = 0; i < std::abs(b); ++i) step(GroupElement{0, 1}, b < 0);
        for (std::int64_t i = 0; i < std::abs(a); ++i) step(GroupElement{1, 0}, a < 0);
        cache_.emplace(g, m);
        return m;
    }

    /// pi_k(a) as a q x q matrix.
    [[nodiscard]] CMatrix fiber(const AlgebraElement& x, const Momentum& k) const {
        if (!x.multiplier().same_as(sigma_)) throw std::invalid_argument("element is over a different multiplier");
        const auto q = static_cast<Eigen::Index>(q_);
        CMatrix m = CMatrix::Zero(q, q);
        for (const auto& [g, c] : x.terms()) {
            const std::int64_t a = g[0], b = g[1];
            const Complex coeff = c * monomial_phase(g).conj().value() *
                                  std::polar(1.0, static_cast<double>(a) * k.k1 + static_cast<double>(b) * k.k2);
            for (std::int64_t j = 0; j < q_; ++j) {
                const std::int64_t row = ((j + b) % q_ + q_) % q_;
                m(row, j) += coeff * Phase::turns(flux_ * Rational(j * a)).value();
            }
        }
        return m;
    }

private:
    Multiplier sigma_;
    Rational flux_;
    std::int64_t q_ = 1;
    mutable std::map<GroupElement, Phase> cache_;
};

/// (F + F^*)/2: removes roundoff asymmetry from fibers of self-adjoint elements.
inline CMatrix hermitian_part(const CMatrix& f) { return 0.5 * (f + f.adjoint()); }

/// Uniform N x N momentum grid, k = 2 pi j / N, in k-lexicographic order.
inline std::vector<Momentum> momentum_grid(int n) {
    if (n < 1) throw std::invalid_argument("k-grid size must be positive");
    std::vector<Momentum> out;
    out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back({2.0 * std::numbers::pi * i / n, 2.0 * std::numbers::pi * j / n});
    return out;
}

/// Grid average of (1/q) tr(f(pi_k(x)) pi_k(delta_g)^*): the trace tau<g>
/// evaluated on f(x) for abelian groups. g = e gives tr_(2).
inline Complex bloch_trace(const BlochRepresentation& rep, const AlgebraElement& x, int n,
                           const GroupElement& g = GroupElement{0, 0}) {
    const auto& sigma = rep.multiplier();
    const auto dg = AlgebraElement::delta(sigma, g);
    Complex s = 0.0;
    for (const auto& k : momentum_grid(n)) s += (rep.fiber(x, k) * rep.fiber(dg, k).adjoint()).trace();
    return s / (static_cast<double>(rep.dimension()) * n * n);
}

/// Same as bloch_trace with f applied to the Hermitian fiber pi_k(x).
inline Complex bloch_function_trace(const BlochRepresentation& rep, const AlgebraElement& x,
                                    const std::function<double(double)>& f, int n,
                                    const GroupElement& g = GroupElement{0, 0}) {
    const auto dg = AlgebraElement::delta(rep.multiplier(), g);
    Complex s = 0.0;
    for (const auto& k : momentum_grid(n)) {
        const CMatrix fx = matrix_function(hermitian_part(rep.fiber(x, k)), f);
        s += (fx * rep.fiber(dg, k).adjoint()).trace();
    }
    return s / (static_cast<double>(rep.dimension()) * n * n);
}

struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

struct SpectrumUnion {
    Rational theta;
    int grid = 0;
    /// eigenvalues[k_index * q + band_index], k in lexicographic grid order
    std::vector<double> eigenvalues;
    /// One interval per sorted band index, before merging.
    std::vector<Band> band_ranges;
    /// Bands after merging overlaps; touching bands stay separate.
    std::vector<Band> bands;
    double gap_threshold = 0.0;

    [[nodiscard]] double minimum() const { return band_ranges.empty() ? 0.0 : band_ranges.front().lower; }
    [[nodiscard]] double maximum() const { return band_ranges.empty() ? 0.0 : band_ranges.back().upper; }
};

/// Merge rule: neighbouring band ranges are merged only when they overlap by
/// more than the gap threshold max(1e-9, 1e-4 * width). Ranges that touch
/// within the threshold are kept as separate bands.
inline std::vector<Band> merge_bands(const std::vector<Band>& ranges, double threshold) {
    std::vector<Band> out;
    for (const auto& b : ranges) {
        if (!out.empty() && b.lower < out.back().upper - threshold)
            out.back().upper = std::max(out.back().upper, b.upper);
        else
            out.push_back(b);
    }
    return out;
}

/// All fiber eigenvalues of a Hermitian x over the N x N grid plus band intervals.
inline SpectrumUnion spectrum_union(const BlochRepresentation& rep, const AlgebraElement& x, int n) {
    SpectrumUnion s;
    s.theta = rep.flux();
    s.grid = n;
    const auto q = static_cast<std::size_t>(rep.dimension());
    s.band_ranges.assign(q, Band{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
    const auto grid = momentum_grid(n);
    s.eigenvalues.reserve(grid.size() * q);
    for (const auto& k : grid) {
        const RVector ev = eigvalsh(hermitian_part(rep.fiber(x, k)));
        for (std::size_t b = 0; b < q; ++b) {
            const double v = ev(static_cast<Eigen::Index>(b));
            s.eigenvalues.push_back(v);
            s.band_ranges[b].lower = std::min(s.band_ranges[b].lower, v);
            s.band_ranges[b].upper = std::max(s.band_ranges[b].upper, v);
        }
    }
    s.gap_threshold = std::max(1e-9, 1e-4 * (s.maximum() - s.minimum()));
    s.bands = merge_bands(s.band_ranges, s.gap_threshold);
    return s;
}

inline double distance_to_bands(double x, const std::vector<Band>& bands) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& b : bands) d = std::min(d, x < b.lower ? b.lower - x : (x > b.upper ? x - b.upper : 0.0));
    return d;
}

/// sup over the union of intervals of the distance to the nearest point.
inline double covering_distance(const std::vector<double>& points, const std::vector<Band>& bands) {
    if (points.empty() || bands.empty()) throw std::invalid_argument("covering distance of an empty set");
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    auto dist_to_points = [&](double y) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), y);
        double d = std::numeric_limits<double>::infinity();
        if (it != sorted.end()) d = std::min(d, *it - y);
        if (it != sorted.begin()) d = std::min(d, y - *std::prev(it));
        return d;
    };
    double h = 0.0;
    for (const auto& b : bands) {
        h = std::max({h, dist_to_points(b.lower), dist_to_points(b.upper)});
        // interior maxima sit at midpoints between consecutive points inside the band
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), b.lower);
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), b.upper);
        for (auto it = lo; it != hi && std::next(it) != hi; ++it) h = std::max(h, 0.5 * (*std::next(it) - *it));
    }
    return h;
}

/// Hausdorff distance between a finite point set and a union of closed intervals.
inline double hausdorff_to_bands(const std::vector<double>& points, const std::vector<Band>& bands) {
    if (points.empty() || bands.empty()) throw std::invalid_argument("hausdorff distance of an empty set");
    double h = covering_distance(points, bands);
    for (double x : points) h = std::max(h, distance_to_bands(x, bands));
    return h;
}

/// Spectrum of lambda_R(h) against the Bloch bands for several radii. Edge
/// states of the ball sit in spectral gaps, so for gapped fluxes the two-sided
/// distance stalls; `covering` and `outside_fraction` measure the bulk part.
struct TruncationSample {
    std::int64_t radius = 0;
    std::size_t size = 0;
    double hausdorff = 0.0;
    double covering = 0.0;
    double outside_fraction = 0.0;  ///< eigenvalues farther than `margin` from the bands
};

inline std::vector<TruncationSample> truncation_study(const AlgebraElement& h, const std::vector<Band>& bands,
                                                      const std::vector<std::int64_t>& radii, double margin = 0.05) {
    std::vector<TruncationSample> out;
    for (const auto R : radii) {
        const auto t = left_regular(h, R);
        const RVector ev = eigvalsh(hermitian_part(t.matrix));
        const std::vector<double> pts(ev.data(), ev.data() + ev.size());
        TruncationSample s;
        s.radius = R;
        s.size = pts.size();
        s.hausdorff = hausdorff_to_bands(pts, bands);
        s.covering = covering_distance(pts, bands);
        std::size_t outside = 0;
        for (double x : pts)
            if (distance_to_bands(x, bands) > margin) ++outside;
        s.outside_fraction = static_cast<double>(outside) / static_cast<double>(pts.size());
        out.push_back(s);
    }
    return out;
}

/// All p/q in lowest terms with 0 <= p < q <= qmax, ordered by q then p.
inline std::vector<Rational> flux_list(int qmax) {
    if (qmax < 1) throw std::invalid_argument("qmax must be positive");
    std::vector<Rational> out;
    for (int q = 1; q <= qmax; ++q)
        for (int p = 0; p < q; ++p)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    return out;
}

inline constexpr const char* spectrum_csv_header = "theta_num,theta_den,k1,k2,band_index,eigenvalue";

/// Rows of a spectrum union, 17 significant digits, grid order then band order.
inline void write_spectrum_rows(std::ostream& os, const SpectrumUnion& s) {
    const auto grid = momentum_grid(s.grid);
    const std::size_t q = s.band_ranges.size();
    char buf[160];
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t b = 0; b < q; ++b) {
            std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%zu,%.17g\n", static_cast<long long>(s.theta.num()),
                          static_cast<long long>(s.theta.den()), grid[i].k1, grid[i].k2, b, s.eigenvalues[i * q + b]);
            os << buf;
        }
}

/// Harper spectra (Landau gauge, unit hopping) for every flux in flux_list(qmax).
inline std::vector<SpectrumUnion> butterfly(int qmax, int kgrid) {
    if (qmax > 64) throw std::invalid_argument("qmax must be at most 64");
    const auto z2 = GroupDescriptor::free_abelian(2);
    std::vector<SpectrumUnion> out;
    for (const auto& theta : flux_list(qmax)) {
        const auto sigma = magnetic_multiplier(z2, theta);
        out.push_back(spectrum_union(BlochRepresentation(sigma), harper_element(sigma), kgrid));
    }
    return out;
}

inline void write_butterfly_csv(std::ostream& os, const std::vector<SpectrumUnion>& spectra) {
    os << spectrum_csv_header << '\n';
    for (const auto& s : spectra) write_spectrum_rows(os, s);
}

}  // namespace twisted
