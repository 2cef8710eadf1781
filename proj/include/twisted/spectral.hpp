#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twisted/algebra.hpp"
#include "twisted/linalg.hpp"
#include "twisted/representations.hpp"
#include "twisted/traces.hpp"

namespace twisted {

enum class EtaNormalization { half, full };

inline double normalization_factor(EtaNormalization n) { return n == EtaNormalization::half ? 1.0 : 2.0; }

inline EtaNormalization parse_eta_normalization(const std::string& s) {
    if (s == "half") return EtaNormalization::half;
    if (s == "full") return EtaNormalization::full;
    throw std::invalid_argument("eta normalization must be 'half' or 'full'");
}

/// Absolute zero threshold: zero_tol relative to the spectral radius.
inline double absolute_zero_tol(const RVector& values, double zero_tol) { return zero_tol * spectral_radius(values); }

/// (1/2) sum sign(lambda) over eigenvalues with |lambda| > tol.
inline double eta_absolute(const RVector& values, double tol, EtaNormalization norm = EtaNormalization::half) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) > tol) s += 1.0;
        else if (values(i) < -tol) s -= 1.0;
    }
    return 0.5 * normalization_factor(norm) * s;
}

/// (1/2) sum sign(lambda) over eigenvalues with |lambda| > zero_tol * spectral radius.
inline double eta_closed_form(const RVector& values, double zero_tol = 1e-9,
                              EtaNormalization norm = EtaNormalization::half) {
    return eta_absolute(values, absolute_zero_tol(values, zero_tol), norm);
}

inline double eta_closed_form(const CMatrix& a, double zero_tol = 1e-9, EtaNormalization norm = EtaNormalization::half) {
    return eta_closed_form(eigvalsh(a), zero_tol, norm);
}

struct QuadratureResult {
    double eta = 0.0;
    double tail_bound = 0.0;        ///< contribution of t > t_max
    double discretization = 0.0;    ///< difference between the last two step halvings
    double t_max = 0.0;
    int points = 0;
};

/// Heat-kernel quadrature of (1/(2 sqrt pi)) int_0^t_max Tr(A e^{-tA^2}) t^{-1/2} dt.
///
/// With t = u^2 and u = e^v the integrand becomes sum_l l u e^{-u^2 l^2} dv,
/// which is integrated by the trapezoid rule with the step halved until two
/// successive estimates agree. When t_max <= 0 it is chosen so that the tail
/// is below tail_tol. A supplied t_max whose tail bound exceeds tail_tol is
/// rejected with the required value in the message.
inline QuadratureResult eta_quadrature(const RVector& values, double t_max = 0.0, int n_points = 64,
                                       double zero_tol = 1e-9, double tail_tol = 1e-10,
                                       EtaNormalization norm = EtaNormalization::half) {
    const double tol = absolute_zero_tol(values, zero_tol);
    std::vector<double> lam;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (std::fabs(values(i)) > tol) lam.push_back(values(i));
    QuadratureResult r;
    if (lam.empty()) return r;
    double lmin = std::numeric_limits<double>::infinity(), lmax = 0.0, lsum = 0.0;
    for (double l : lam) {
        lmin = std::min(lmin, std::fabs(l));
        lmax = std::max(lmax, std::fabs(l));
        lsum += std::fabs(l);
    }
    auto tail = [&](double u_max) {
        double s = 0.0;
        for (double l : lam) s += 0.5 * std::erfc(u_max * std::fabs(l));
        return s;
    };
    // smallest u with tail(u) <= tail_tol, by bisection on a monotone function
    auto required_u = [&]() {
        double lo = 0.0, hi = 1.0 / lmin;
        while (tail(hi) > tail_tol) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (tail(mid) > tail_tol ? lo : hi) = mid;
        }
        return hi;
    };
    double u_max;
    if (t_max > 0.0) {
        u_max = std::sqrt(t_max);
        if (tail(u_max) > tail_tol) {
            const double need = required_u();
            throw std::domain_error("eta quadrature tail bound " + std::to_string(tail(u_max)) +
                                    " exceeds tolerance; need t_max >= " + std::to_string(need * need));
        }
    } else {
        u_max = required_u();
    }
    r.t_max = u_max * u_max;
    r.tail_bound = tail(u_max);

    // below v_min the integrand is bounded by lsum * e^v
    const double v_min = std::log(1e-14 / lsum);
    const double v_max = std::log(u_max);
    auto integrand = [&](double v) {
        const double u = std::exp(v);
        double s = 0.0;
        for (double l : lam) s += l * u * std::exp(-u * u * l * l);
        return s;
    };
    int n = std::max(n_points, 8);
    auto trapezoid = [&](int m) {
        const double h = (v_max - v_min) / m;
        double s = 0.5 * (integrand(v_min) + integrand(v_max));
        for (int i = 1; i < m; ++i) s += integrand(v_min + i * h);
        return s * h;
    };
    double prev = trapezoid(n);
    double cur = prev;
    for (int iter = 0; iter < 20; ++iter) {
        n *= 2;
        cur = trapezoid(n);
        if (std::fabs(cur - prev) <= 1e-11 * std::max(1.0, static_cast<double>(lam.size()))) break;
        prev = cur;
    }
    r.discretization = std::fabs(cur - prev);
    r.points = n;
    r.eta = normalization_factor(norm) * cur / std::sqrt(std::numbers::pi);
    return r;
}

// ---------------------------------------------------------------------------
// Eta of operators over the twisted algebra

enum class EtaMethod { bloch, truncation };

struct EtaEstimate {
    double eta = 0.0;
    double error_bound = 0.0;
    std::string method;
    std::string params;
};

/// sign(x)/2 with a zero band; the integrand-free form of the heat integral.
inline std::function<double(double)> half_sign(double tol) {
    return [tol](double x) { return x > tol ? 0.5 : (x < -tol ? -0.5 : 0.0); };
}

/// eta_tau(H) with tau = tau<g> for a Hermitian element over rational magnetic
/// Z^2, via grid-averaged fiber traces. The error bound is the difference
/// between the N and N/2 grids.
inline EtaEstimate eta_operator_bloch(const AlgebraElement& h, int n, const GroupElement& g = GroupElement{0, 0},
                                      double zero_tol = 1e-9, EtaNormalization norm = EtaNormalization::half) {
    if (h.distance(h.star()) > 1e-12) throw std::invalid_argument("eta needs a self-adjoint element");
    const BlochRepresentation rep(h.multiplier());
    const auto cls = h.group()->conjugacy_class(g);
    const double tol = zero_tol * std::max(h.l1_norm(), 1e-300);
    auto at = [&](int m) {
        Complex s = 0.0;
        for (const auto& c : cls) s += bloch_function_trace(rep, h, half_sign(tol), m, c);
        return normalization_factor(norm) * s.real();
    };
    const double fine = at(n);
    const double coarse = at(std::max(1, n / 2));
    return {fine, std::fabs(fine - coarse), "bloch",
            "grid=" + std::to_string(n) + ",flux=" + rep.flux().str() + ",class=" + g.str()};
}

/// eta_tau(H) with tau = tau<g> from the truncated regular representation:
/// the delta_e column of sign(lambda_R(H))/2 read at the class of g. The
/// error bound compares radius R with radius R - step.
inline EtaEstimate eta_operator_truncation(const AlgebraElement& h, std::int64_t radius, std::int64_t step = 2,
                                           const GroupElement* g = nullptr, double zero_tol = 1e-9,
                                           EtaNormalization norm = EtaNormalization::half) {
    if (h.distance(h.star()) > 1e-12) throw std::invalid_argument("eta needs a self-adjoint element");
    const auto& G = h.group();
    const GroupElement target = g ? *g : G->identity();
    const auto cls = G->conjugacy_class(target);
    auto at = [&](std::int64_t r) {
        const auto t = left_regular(h, r);
        const CMatrix s = matrix_function(t.matrix, half_sign(zero_tol * std::max(h.l1_norm(), 1e-300)));
        const auto col = t.position(G->identity());
        double v = 0.0;
        for (const auto& c : cls) {
            auto it = t.index.find(c);
            if (it != t.index.end()) v += s(it->second, col).real();
        }
        return normalization_factor(norm) * v;
    };
    const double fine = at(radius);
    const double coarse = at(std::max<std::int64_t>(0, radius - step));
    return {fine, std::fabs(fine - coarse), "truncation",
            "radius=" + std::to_string(radius) + ",class=" + target.str()};
}

struct GermSample {
    Rational s;
    EtaEstimate estimate;
};

/// Tabulates s -> eta(H_s) for H_s built over sigma^s on a rational grid.
inline std::vector<GermSample> eta_germ(const Multiplier& base, const std::vector<Rational>& s_grid,
                                        const std::function<AlgebraElement(const Multiplier&)>& build, int n,
                                        EtaNormalization norm = EtaNormalization::half) {
    std::vector<GermSample> out;
    for (const auto& s : s_grid) {
        const auto sigma = power_family(base, s);
        out.push_back({s, eta_operator_bloch(build(sigma), n, GroupElement{0, 0}, 1e-9, norm)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral flow

/// A one-parameter family t in [0, 1] -> Hermitian matrix.
struct SpectralPath {
    std::function<CMatrix(double)> at;
    Eigen::Index dim = 0;

    static SpectralPath linear(const CMatrix& a0, const CMatrix& a1) {
        if (a0.rows() != a1.rows() || a0.cols() != a1.cols()) throw ShapeError("path endpoints differ in shape");
        if (!is_hermitian(a0) || !is_hermitian(a1)) throw std::invalid_argument("path endpoints must be Hermitian");
        return {[a0, a1](double t) -> CMatrix { return a0 + t * (a1 - a0); }, a0.rows()};
    }

    /// Piecewise-linear interpolation of samples at the given parameters.
    static SpectralPath samples(std::vector<double> params, std::vector<CMatrix> mats) {
        if (params.size() != mats.size() || params.size() < 2) throw std::invalid_argument("need at least two samples");
        if (params.front() != 0.0 || params.back() != 1.0) throw std::invalid_argument("sample parameters must span [0,1]");
        for (std::size_t i = 1; i < params.size(); ++i)
            if (!(params[i] > params[i - 1])) throw std::invalid_argument("sample parameters must increase");
        for (const auto& m : mats) {
            if (m.rows() != mats[0].rows() || m.cols() != mats[0].cols()) throw ShapeError("samples differ in shape");
            if (!is_hermitian(m)) throw std::invalid_argument("samples must be Hermitian");
        }
        const Eigen::Index d = mats[0].rows();
        return {[params, mats](double t) -> CMatrix {
                    auto it = std::upper_bound(params.begin(), params.end(), t);
                    std::size_t i = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
                    if (i + 1 >= params.size()) i = params.size() - 2;
                    const double w = (t - params[i]) / (params[i + 1] - params[i]);
                    return (1.0 - w) * mats[i] + w * mats[i + 1];
                },
                d};
    }
};

struct SpectralFlowResult {
    int tracked = 0;          ///< branch-tracking count
    int formula = 0;          ///< [eta + dim ker / 2] at 1 minus the same at 0
    int kernel_start = 0;
    int kernel_end = 0;
    double eta_start = 0.0;
    double eta_end = 0.0;
    int samples = 0;
};

/// Spectral flow by eigenvalue tracking with adaptive refinement.
///
/// An interval is accepted once every eigenvalue that could cross zero moves
/// less than half its distance to the neighbouring eigenvalues at both ends
/// and keeps an eigenvector overlap above 1/2. Eigenvalues within the zero
/// band count as non-negative. Throws std::runtime_error when the refinement
/// budget is exhausted.
inline SpectralFlowResult spectral_flow(const SpectralPath& path, double zero_tol = 1e-9, int initial = 16,
                                        int budget = 20000, double min_step = 1e-12) {
    struct Sample {
        double t;
        EigenDecomposition ed;
    };
    auto sample = [&](double t) { return Sample{t, eigh(path.at(t))}; };
    const Sample s0 = sample(0.0), s1 = sample(1.0);
    const double scale = std::max({spectral_radius(s0.ed.values), spectral_radius(s1.ed.values), 1e-300});
    const double tol = zero_tol * scale;
    auto nonneg = [&](double x) { return x >= -tol; };

    SpectralFlowResult res;
    res.kernel_start = kernel_dimension(s0.ed.values, tol);
    res.kernel_end = kernel_dimension(s1.ed.values, tol);
    res.eta_start = eta_absolute(s0.ed.values, tol);
    res.eta_end = eta_absolute(s1.ed.values, tol);
    res.formula = static_cast<int>(std::lround((res.eta_end + 0.5 * res.kernel_end) - (res.eta_start + 0.5 * res.kernel_start)));

    const Eigen::Index n = path.dim;
    auto acceptable = [&](const Sample& a, const Sample& b) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double la = a.ed.values(j), lb = b.ed.values(j);
            const double disp = std::fabs(lb - la);
            const bool candidate = nonneg(la) != nonneg(lb) || std::fabs(la) <= disp + tol || std::fabs(lb) <= disp + tol;
            if (!candidate) continue;
            auto gap = [&](const RVector& v) {
                double g = std::numeric_limits<double>::infinity();
                if (j > 0) g = std::min(g, v(j) - v(j - 1));
                if (j + 1 < n) g = std::min(g, v(j + 1) - v(j));
                return g;
            };
            const double g = std::min(gap(a.ed.values), gap(b.ed.values));
            if (!(disp < 0.5 * g)) return false;
            if (std::abs(a.ed.vectors.col(j).dot(b.ed.vectors.col(j))) < 0.5) return false;
        }
        return true;
    };

    std::vector<Sample> stack;
    std::vector<Sample> accepted{s0};
    for (int i = initial; i >= 1; --i) stack.push_back(i == initial ? s1 : sample(static_cast<double>(i) / initial));
    int used = 0;
    while (!stack.empty()) {
        const Sample& left = accepted.back();
        Sample right = stack.back();
        if (acceptable(left, right)) {
            accepted.push_back(std::move(right));
            stack.pop_back();
            continue;
        }
        if (++used > budget || right.t - left.t < min_step)
            throw std::runtime_error("spectral flow refinement budget exhausted near t=" + std::to_string(left.t));
        stack.push_back(sample(0.5 * (left.t + right.t)));
    }
    int count = 0;
    for (std::size_t i = 1; i < accepted.size(); ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const bool a = nonneg(accepted[i - 1].ed.values(j)), b = nonneg(accepted[i].ed.values(j));
            if (!a && b) ++count;
            if (a && !b) --count;
        }
    res.tracked = count;
    res.samples = static_cast<int>(accepted.size());
    return res;
}

// ---------------------------------------------------------------------------
// Graded operators

/// D = [[0, D+^*], [D+, 0]] on H+ (+) H-, where D+ : H+ -> H- is m x p.
inline HermitianOperator graded_odd(const CMatrix& d_plus) {
    const Eigen::Index m = d_plus.rows(), p = d_plus.cols();
    CMatrix d = CMatrix::Zero(p + m, p + m);
    d.block(p, 0, m, p) = d_plus;
    d.block(0, p, p, m) = d_plus.adjoint();
    Eigen::VectorXi z(p + m);
    z.head(p).setOnes();
    z.tail(m).setConstant(-1);
    return HermitianOperator(d, z, "graded");
}

/// Block D+ (rows with grading -1, columns with grading +1).
inline CMatrix positive_part(const HermitianOperator& d) {
    if (!d.grading) throw std::invalid_argument("operator has no grading");
    std::vector<Eigen::Index> plus, minus;
    for (Eigen::Index i = 0; i < d.dim(); ++i) ((*d.grading)(i) == 1 ? plus : minus).push_back(i);
    CMatrix out(static_cast<Eigen::Index>(minus.size()), static_cast<Eigen::Index>(plus.size()));
    for (std::size_t i = 0; i < minus.size(); ++i)
        for (std::size_t j = 0; j < plus.size(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d.matrix(minus[i], plus[j]);
    return out;
}

/// Rank via the eigenvalues of M^* M above tol * largest eigenvalue.
inline int numerical_rank(const CMatrix& m, double rel_tol = 1e-10) {
    if (m.size() == 0) return 0;
    const RVector ev = eigvalsh(m.adjoint() * m);
    const double top = spectral_radius(ev);
    int r = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > rel_tol * top) ++r;
    return r;
}

struct McKeanSingerResult {
    int index = 0;                  ///< dim ker D+ - dim ker D-, from the rank oracle
    std::vector<double> t;
    std::vector<double> supertrace;
    double spread = 0.0;            ///< max - min over the t samples
};

inline McKeanSingerResult mckean_singer(const HermitianOperator& d, const std::vector<double>& ts) {
    if (!d.grading) throw std::invalid_argument("McKean-Singer needs a graded operator");
    if (!d.is_odd()) throw std::invalid_argument("grading does not anticommute with the operator");
    McKeanSingerResult r;
    const CMatrix dp = positive_part(d);
    const int rank = numerical_rank(dp);
    r.index = static_cast<int>(dp.cols() - rank) - static_cast<int>(dp.rows() - rank);
    const auto ed = eigh(d.matrix);
    const CMatrix zv = (*d.grading).cast<double>().cast<Complex>().asDiagonal() * ed.vectors;
    // z-weight of each eigenvector: <v, z v>
    RVector weight(ed.values.size());
    for (Eigen::Index j = 0; j < weight.size(); ++j) weight(j) = ed.vectors.col(j).dot(zv.col(j)).real();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double t : ts) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < weight.size(); ++j) s += weight(j) * std::exp(-t * ed.values(j) * ed.values(j));
        r.t.push_back(t);
        r.supertrace.push_back(s);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    r.spread = ts.empty() ? 0.0 : hi - lo;
    return r;
}

/// Logarithmic t grid.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
    return out;
}

struct ProductEtaResult {
    double lhs = 0.0;
    double rhs = 0.0;
    int index = 0;
    double eta_l = 0.0;
};

/// eta(z_N (x) D_L + D_N (x) 1) against eta(D_L) * ind(D_N).
inline ProductEtaResult product_eta_check(const CMatrix& d_l, const HermitianOperator& d_n, double zero_tol = 1e-9) {
    if (!is_hermitian(d_l)) throw std::invalid_argument("D_L must be Hermitian");
    if (!d_n.grading || !d_n.is_odd()) throw std::invalid_argument("D_N must be odd for its grading");
    const CMatrix z = (*d_n.grading).cast<double>().cast<Complex>().asDiagonal();
    const CMatrix d = kron(z, d_l) + kron(d_n.matrix, CMatrix::Identity(d_l.rows(), d_l.cols()));
    ProductEtaResult r;
    r.lhs = eta_closed_form(d, zero_tol);
    r.eta_l = eta_closed_form(d_l, zero_tol);
    r.index = mckean_singer(d_n, {}).index;
    r.rhs = r.eta_l * r.index;
    return r;
}

// ---------------------------------------------------------------------------
// Twisted Betti numbers

struct BettiResult {
    double b_even = 0.0;
    double b_odd = 0.0;
    [[nodiscard]] double euler() const { return b_even - b_odd; }
};

class KernelAmbiguity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kernel dimension with the ambiguity band [tol/10, tol*10] reported as an error.
inline int resolved_kernel(const RVector& ev, double tol) {
    int k = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double x = std::fabs(ev(i));
        if (x >= tol / 10 && x <= tol * 10)
            throw KernelAmbiguity("eigenvalue " + std::to_string(ev(i)) + " lies in the kernel ambiguity band around " +
                                  std::to_string(tol));
        if (x < tol / 10) ++k;
    }
    return k;
}

/// Betti numbers of positive semidefinite Laplacian blocks with the matrix trace.
inline BettiResult twisted_betti(const CMatrix& even, const CMatrix& odd, double zero_tol = 1e-9) {
    for (const CMatrix* m : {&even, &odd}) {
        if (!is_hermitian(*m)) throw std::invalid_argument("Laplacian blocks must be Hermitian");
        if (m->size() && eigvalsh(*m).minCoeff() < -1e-10 * std::max(1.0, max_abs(*m)))
            throw std::invalid_argument("Laplacian blocks must be positive semidefinite");
    }
    return {static_cast<double>(resolved_kernel(eigvalsh(even), zero_tol)),
            static_cast<double>(resolved_kernel(eigvalsh(odd), zero_tol))};
}

/// Betti numbers of Laplacian blocks over C(Z^2, sigma) at rational flux with
/// tau = tr_(2): grid average of normalized fiber kernel dimensions.
inline BettiResult twisted_betti_bloch(const AlgebraMatrix& even, const AlgebraMatrix& odd, int n,
                                       double zero_tol = 1e-9) {
    const BlochRepresentation rep(even.multiplier());
    const auto q = static_cast<Eigen::Index>(rep.dimension());
    auto fiber_block = [&](const AlgebraMatrix& m, const Momentum& k) {
        const auto s = static_cast<Eigen::Index>(m.size());
        CMatrix out = CMatrix::Zero(s * q, s * q);
        for (Eigen::Index i = 0; i < s; ++i)
            for (Eigen::Index j = 0; j < s; ++j)
                out.block(i * q, j * q, q, q) = rep.fiber(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), k);
        return out;
    };
    BettiResult r;
    const auto grid = momentum_grid(n);
    for (const auto& k : grid) {
        r.b_even += resolved_kernel(eigvalsh(hermitian_part(fiber_block(even, k))), zero_tol);
        r.b_odd += resolved_kernel(eigvalsh(hermitian_part(fiber_block(odd, k))), zero_tol);
    }
    const double norm = static_cast<double>(q) * static_cast<double>(grid.size());
    r.b_even /= norm;
    r.b_odd /= norm;
    return r;
}

/// Incidence matrix of the cycle graph on n vertices (edge i: i -> i+1).
inline CMatrix cycle_incidence(int n) {
    CMatrix d = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        d(i, i) = -1.0;
        d(i, (i + 1) % n) = 1.0;
    }
    return d;
}

}  // namespace twisted
