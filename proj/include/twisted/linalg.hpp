#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "twisted/group.hpp"
#include "twisted/rational.hpp"

namespace twisted {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const CMatrix& a, double rel_tol = 1e-12) {
    if (a.rows() != a.cols()) return false;
    const double scale = max_abs(a);
    return max_abs(a - a.adjoint()) <= rel_tol * std::max(scale, 1e-300);
}

/// Ascending eigenvalues and orthonormal eigenvectors (columns).
struct EigenDecomposition {
    RVector values;
    CMatrix vectors;
    double residual = 0.0;  ///< max_j |A v_j - lambda_j v_j|, 0 when vectors were not requested
    int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Pivots are visited in row-major order (p < q) every sweep, so the result
/// depends only on the input bits. Throws std::invalid_argument when the
/// input is not Hermitian within 1e-12 relative to its largest entry.
inline EigenDecomposition eigh(const CMatrix& input, bool want_vectors = true, int max_sweeps = 100) {
    if (input.rows() != input.cols()) throw ShapeError("eigh needs a square matrix");
    if (!is_hermitian(input)) throw std::invalid_argument("eigh needs a Hermitian matrix");
    const Eigen::Index n = input.rows();
    CMatrix a = 0.5 * (input + input.adjoint());
    CMatrix v;
    if (want_vectors) v = CMatrix::Identity(n, n);

    const double frob = a.norm();
    EigenDecomposition out;
    if (n == 0) return out;
    const double eps = std::numeric_limits<double>::epsilon();
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(2.0 * off) <= eps * frob || off == 0.0) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                const double app = a(p, p).real(), aqq = a(q, q).real();
                if (sweep > 3 && r <= eps * 1e-2 * (std::fabs(app) + std::fabs(aqq))) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / r;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // V = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on coordinates (p, q)
                const Complex vpp = c, vpq = s, vqp = -s * std::conj(phase), vqq = c * std::conj(phase);
                // columns: A <- A V; rows follow from hermiticity of V^* A V
                Complex* cp = a.col(p).data();
                Complex* cq = a.col(q).data();
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Complex akp = cp[k], akq = cq[k];
                    cp[k] = akp * vpp + akq * vqp;
                    cq[k] = akp * vpq + akq * vqq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    a(p, k) = std::conj(cp[k]);
                    a(q, k) = std::conj(cq[k]);
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = app - t * r;
                a(q, q) = aqq + t * r;
                if (want_vectors) {
                    Complex* wp = v.col(p).data();
                    Complex* wq = v.col(q).data();
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const Complex x = wp[k], y = wq[k];
                        wp[k] = x * vpp + y * vqp;
                        wq[k] = x * vpq + y * vqq;
                    }
                }
            }
    }
    if (sweep == max_sweeps) throw std::runtime_error("Jacobi eigensolver did not converge");
    out.sweeps = sweep;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = a(order[j], order[j]).real();
        if (want_vectors) out.vectors.col(j) = v.col(order[j]);
    }
    if (want_vectors) {
        const CMatrix resid = input * out.vectors - out.vectors * out.values.cast<Complex>().asDiagonal();
        out.residual = resid.colwise().norm().maxCoeff();
    }
    return out;
}

inline RVector eigvalsh(const CMatrix& a) { return eigh(a, false).values; }

/// f(A) for Hermitian A via the spectral decomposition.
inline CMatrix matrix_function(const CMatrix& a, const std::function<double(double)>& f) {
    const auto ed = eigh(a);
    RVector fv(ed.values.size());
    for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(ed.values(i));
    return ed.vectors * fv.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
}

inline double spectral_radius(const RVector& values) { return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff(); }

/// Number of eigenvalues with |lambda| <= tol.
inline int kernel_dimension(const RVector& values, double tol) {
    int k = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (std::fabs(values(i)) <= tol) ++k;
    return k;
}

// ---------------------------------------------------------------------------
// Random fixtures

inline Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    const double re = nd(rng);
    const double im = nd(rng);
    return {re, im};
}

inline CMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    CMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_complex(rng);
    return m;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
    const CMatrix b = random_complex_matrix(n, n, rng);
    return 0.5 * (b + b.adjoint());
}

/// Haar-like random unitary from the QR factorization of a Gaussian matrix.
inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    const CMatrix b = random_complex_matrix(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(b);
    CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

// ---------------------------------------------------------------------------
// Operators

/// Dense Hermitian operator with an optional diagonal grading (entries +1/-1).
struct HermitianOperator {
    CMatrix matrix;
    std::optional<Eigen::VectorXi> grading;
    std::string provenance = "direct";

    HermitianOperator() = default;
    explicit HermitianOperator(CMatrix m, std::string prov = "direct") : matrix(std::move(m)), provenance(std::move(prov)) {
        validate();
    }
    HermitianOperator(CMatrix m, Eigen::VectorXi z, std::string prov = "direct")
        : matrix(std::move(m)), grading(std::move(z)), provenance(std::move(prov)) {
        validate();
    }

    [[nodiscard]] Eigen::Index dim() const { return matrix.rows(); }

    /// True when the operator anticommutes with its grading.
    [[nodiscard]] bool is_odd() const {
        if (!grading) return false;
        const double scale = std::max(max_abs(matrix), 1e-300);
        CMatrix anti = matrix;
        for (Eigen::Index i = 0; i < dim(); ++i)
            for (Eigen::Index j = 0; j < dim(); ++j) anti(i, j) *= static_cast<double>((*grading)(i) + (*grading)(j));
        return max_abs(anti) <= 1e-12 * scale;
    }

private:
    void validate() const {
        if (matrix.rows() != matrix.cols()) throw ShapeError("operator must be square");
        if (!is_hermitian(matrix)) throw std::invalid_argument("operator is not Hermitian");
        if (grading) {
            if (grading->size() != matrix.rows()) throw ShapeError("grading has the wrong dimension");
            for (Eigen::Index i = 0; i < grading->size(); ++i)
                if ((*grading)(i) != 1 && (*grading)(i) != -1) throw std::invalid_argument("grading entries must be +1 or -1");
        }
    }
};

/// Kronecker product.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace twisted
