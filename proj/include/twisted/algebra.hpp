#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twisted/group.hpp"
#include "twisted/multiplier.hpp"

namespace twisted {

inline constexpr double prune_threshold = 1e-15;

/// Finitely supported element of the twisted group algebra C(G, sigma).
class AlgebraElement {
public:
    using Terms = std::map<GroupElement, Complex>;

    explicit AlgebraElement(Multiplier sigma) : sigma_(std::move(sigma)) {}
    AlgebraElement(Multiplier sigma, Terms terms) : sigma_(std::move(sigma)), terms_(std::move(terms)) {
        for (const auto& [g, c] : terms_) group()->require(g);
        prune();
    }

    static AlgebraElement delta(const Multiplier& sigma, const GroupElement& g, Complex c = 1.0) {
        return AlgebraElement(sigma, Terms{{g, c}});
    }
    static AlgebraElement unit(const Multiplier& sigma) { return delta(sigma, sigma.group()->identity()); }
    static AlgebraElement zero(const Multiplier& sigma) { return AlgebraElement(sigma); }

    [[nodiscard]] const Multiplier& multiplier() const { return sigma_; }
    [[nodiscard]] const Group& group() const { return sigma_.group(); }
    [[nodiscard]] const Terms& terms() const { return terms_; }
    [[nodiscard]] std::size_t support_size() const { return terms_.size(); }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }

    [[nodiscard]] Complex coefficient(const GroupElement& g) const {
        auto it = terms_.find(g);
        return it == terms_.end() ? Complex(0.0) : it->second;
    }

    void add_term(const GroupElement& g, Complex c) {
        group()->require(g);
        terms_[g] += c;
        if (std::abs(terms_[g]) < prune_threshold) terms_.erase(g);
    }

    [[nodiscard]] bool compatible(const AlgebraElement& o) const { return sigma_.same_as(o.sigma_); }

    void require_compatible(const AlgebraElement& o) const {
        if (!compatible(o)) throw std::invalid_argument("algebra elements over different multipliers");
    }

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
        a.require_compatible(b);
        for (const auto& [g, c] : b.terms_) a.terms_[g] += c;
        a.prune();
        return a;
    }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
        a.require_compatible(b);
        for (const auto& [g, c] : b.terms_) a.terms_[g] -= c;
        a.prune();
        return a;
    }
    friend AlgebraElement operator*(Complex s, AlgebraElement a) {
        for (auto& [g, c] : a.terms_) c *= s;
        a.prune();
        return a;
    }

    /// Twisted convolution.
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) { return convolve(a, b); }

    friend AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
        a.require_compatible(b);
        const auto& G = a.group();
        AlgebraElement out(a.sigma_);
        for (const auto& [g, x] : a.terms_)
            for (const auto& [h, y] : b.terms_)
                out.terms_[G->multiply_unchecked(g, h)] += x * y * a.sigma_.eval_unchecked(g, h).value();
        out.prune();
        return out;
    }

    /// (sum a_g delta_g)* = sum conj(a_g) conj(sigma(g, g^-1)) delta_{g^-1}.
    [[nodiscard]] AlgebraElement star() const {
        const auto& G = group();
        AlgebraElement out(sigma_);
        for (const auto& [g, c] : terms_) {
            const GroupElement gi = G->inverse(g);
            out.terms_[gi] += std::conj(c) * sigma_.eval_unchecked(g, gi).conj().value();
        }
        out.prune();
        return out;
    }

    [[nodiscard]] AlgebraElement power(int n) const {
        if (n < 0) throw std::invalid_argument("negative power");
        AlgebraElement out = unit(sigma_);
        for (int i = 0; i < n; ++i) out = out * *this;
        return out;
    }

    [[nodiscard]] double l1_norm() const {
        double s = 0.0;
        for (const auto& [g, c] : terms_) s += std::abs(c);
        return s;
    }

    [[nodiscard]] double l2_norm() const {
        double s = 0.0;
        for (const auto& [g, c] : terms_) s += std::norm(c);
        return std::sqrt(s);
    }

    /// Largest word length over the support (0 for the zero element).
    [[nodiscard]] std::int64_t sup_support_length() const {
        std::int64_t r = 0;
        for (const auto& [g, c] : terms_) r = std::max(r, group()->word_length(g));
        return r;
    }

    /// max |a_g - b_g| over the union of supports.
    [[nodiscard]] double distance(const AlgebraElement& o) const {
        require_compatible(o);
        double d = 0.0;
        for (const auto& [g, c] : terms_) d = std::max(d, std::abs(c - o.coefficient(g)));
        for (const auto& [g, c] : o.terms_)
            if (!terms_.count(g)) d = std::max(d, std::abs(c));
        return d;
    }

    /// The same coefficients read over another multiplier on the same group.
    [[nodiscard]] AlgebraElement reinterpret(const Multiplier& other) const {
        if (!same_group(group(), other.group())) throw std::invalid_argument("reinterpret across groups");
        return AlgebraElement(other, terms_);
    }

    [[nodiscard]] std::string str() const {
        std::string s;
        for (const auto& [g, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + std::to_string(c.real()) + "," + std::to_string(c.imag()) + ")d" + g.str();
        }
        return s.empty() ? "0" : s;
    }

private:
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < prune_threshold)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    Multiplier sigma_;
    Terms terms_;
};

/// b_z: C(G, sigma') -> C(G, sigma), delta_g -> z(g) delta_g, where
/// sigma' = sigma dz. The relation is checked on all pairs from the support
/// of `a` and throws std::invalid_argument if it fails.
inline AlgebraElement apply_projective_iso(const CoboundaryData& z, const AlgebraElement& a, const Multiplier& sigma) {
    const Multiplier& sigma_prime = a.multiplier();
    if (!same_group(sigma.group(), sigma_prime.group()) || !same_group(sigma.group(), z.group()))
        throw std::invalid_argument("projective isomorphism across different groups");
    const auto& G = sigma.group();
    std::vector<GroupElement> support;
    for (const auto& [g, c] : a.terms()) support.push_back(g);
    for (const auto& g : support)
        for (const auto& h : support) {
            const Phase rhs = sigma.eval_unchecked(g, h) * z(g) * z(h) * z(G->multiply_unchecked(g, h)).conj();
            if (!(sigma_prime.eval_unchecked(g, h) == rhs))
                throw std::invalid_argument("source multiplier is not sigma * dz at (" + g.str() + "," + h.str() + ")");
        }
    AlgebraElement::Terms out;
    for (const auto& [g, c] : a.terms()) out[g] = c * z(g).value();
    return AlgebraElement(sigma, std::move(out));
}

/// b_chi for a character chi: an automorphism of C(G, sigma).
inline AlgebraElement apply_character(const CoboundaryData& chi, const AlgebraElement& a) {
    return apply_projective_iso(chi, a, a.multiplier());
}

/// Square matrix with entries in C(G, sigma).
class AlgebraMatrix {
public:
    AlgebraMatrix(Multiplier sigma, std::size_t n) : sigma_(std::move(sigma)), n_(n) {
        entries_.assign(n * n, AlgebraElement(sigma_));
    }

    static AlgebraMatrix identity(const Multiplier& sigma, std::size_t n) {
        AlgebraMatrix m(sigma, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = AlgebraElement::unit(sigma);
        return m;
    }

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] const Multiplier& multiplier() const { return sigma_; }
    AlgebraElement& operator()(std::size_t i, std::size_t j) { return entries_.at(i * n_ + j); }
    [[nodiscard]] const AlgebraElement& operator()(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }

    friend AlgebraMatrix operator*(const AlgebraMatrix& a, const AlgebraMatrix& b) {
        if (a.n_ != b.n_) throw ShapeError("matrix size mismatch");
        AlgebraMatrix out(a.sigma_, a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < a.n_; ++j)
                    if (!b(k, j).is_zero()) out(i, j) = out(i, j) + a(i, k) * b(k, j);
            }
        return out;
    }

    friend AlgebraMatrix operator+(const AlgebraMatrix& a, const AlgebraMatrix& b) {
        if (a.n_ != b.n_) throw ShapeError("matrix size mismatch");
        AlgebraMatrix out(a.sigma_, a.n_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i) out.entries_[i] = a.entries_[i] + b.entries_[i];
        return out;
    }

    /// Entrywise star composed with transpose.
    [[nodiscard]] AlgebraMatrix adjoint() const {
        AlgebraMatrix out(sigma_, n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) out(i, j) = (*this)(j, i).star();
        return out;
    }

    [[nodiscard]] double distance(const AlgebraMatrix& o) const {
        if (n_ != o.n_) throw ShapeError("matrix size mismatch");
        double d = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i) d = std::max(d, entries_[i].distance(o.entries_[i]));
        return d;
    }

    /// Sum of diagonal entries.
    [[nodiscard]] AlgebraElement diagonal_sum() const {
        AlgebraElement s(sigma_);
        for (std::size_t i = 0; i < n_; ++i) s = s + (*this)(i, i);
        return s;
    }

private:
    Multiplier sigma_;
    std::size_t n_;
    std::vector<AlgebraElement> entries_;
};

}  // namespace twisted
