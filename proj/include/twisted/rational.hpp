#pragma once

#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twisted {

using Complex = std::complex<double>;

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always stored in lowest terms with a positive denominator. Arithmetic is
/// carried out in 128-bit intermediates and throws std::overflow_error when
/// the reduced result no longer fits.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

    /// Parses "p/q", "p" or "-p/q".
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        if (text.empty()) throw std::invalid_argument("empty rational literal");
        auto parse_int = [&](std::string_view s) -> std::int64_t {
            s = trim(s);
            if (s.empty()) throw std::invalid_argument("malformed rational literal: " + std::string(text));
            std::size_t pos = 0;
            bool neg = false;
            if (s[0] == '+' || s[0] == '-') {
                neg = s[0] == '-';
                pos = 1;
            }
            if (pos == s.size()) throw std::invalid_argument("malformed rational literal: " + std::string(text));
            __int128 value = 0;
            for (; pos < s.size(); ++pos) {
                char c = s[pos];
                if (c < '0' || c > '9') throw std::invalid_argument("malformed rational literal: " + std::string(text));
                value = value * 10 + (c - '0');
                if (value > INT64_MAX) throw std::overflow_error("rational literal out of range");
            }
            return static_cast<std::int64_t>(neg ? -value : value);
        };
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return Rational(parse_int(text));
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }

    /// Representative of this value modulo 1 in [0, 1).
    [[nodiscard]] Rational mod1() const {
        std::int64_t r = num_ % den_;
        if (r < 0) r += den_;
        return Rational(r, den_);
    }

    [[nodiscard]] std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                         static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        return lhs <=> rhs;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static __int128 wide_gcd(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational from_wide(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = wide_gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num > INT64_MAX || num < -INT64_MAX || den > INT64_MAX) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }

    void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// A point of U(1), stored as an angle in turns: value = exp(2*pi*i*turns).
///
/// Exact phases keep a rational angle reduced into [0, 1); approximate phases
/// keep a double angle in [0, 1). Products of exact phases stay exact.
class Phase {
public:
    Phase() = default;

    static Phase turns(const Rational& q) {
        Phase p;
        p.exact_ = true;
        p.q_ = q.mod1();
        return p;
    }
    static Phase approx_turns(double t) {
        Phase p;
        p.exact_ = false;
        p.t_ = t - std::floor(t);
        return p;
    }
    static Phase one() { return turns(Rational(0)); }

    [[nodiscard]] bool exact() const { return exact_; }
    [[nodiscard]] const Rational& exact_turns() const {
        if (!exact_) throw std::logic_error("phase is not exact");
        return q_;
    }
    [[nodiscard]] double turns_double() const { return exact_ ? q_.to_double() : t_; }

    [[nodiscard]] Complex value() const {
        if (exact_) {
            // Snap the eight exact lattice points so that i, -1, ... come out bit-exact.
            const std::int64_t d = q_.den();
            if (d == 1) return {1.0, 0.0};
            if (d == 2) return {-1.0, 0.0};
            if (d == 4) return q_.num() == 1 ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        }
        const double angle = 2.0 * std::numbers::pi * turns_double();
        return {std::cos(angle), std::sin(angle)};
    }

    [[nodiscard]] bool is_one(double tol = 0.0) const {
        if (exact_) return q_.is_zero();
        return angular_distance(t_, 0.0) <= tol;
    }

    [[nodiscard]] Phase conj() const {
        if (exact_) return turns(-q_);
        return approx_turns(-t_);
    }

    friend Phase operator*(const Phase& a, const Phase& b) {
        if (a.exact_ && b.exact_) return turns(a.q_ + b.q_);
        return approx_turns(a.turns_double() + b.turns_double());
    }
    friend Phase operator/(const Phase& a, const Phase& b) { return a * b.conj(); }
    Phase& operator*=(const Phase& o) { return *this = *this * o; }

    /// Angular distance in turns, in [0, 1/2].
    [[nodiscard]] double distance(const Phase& o) const {
        if (exact_ && o.exact_) return (q_ - o.q_).mod1().to_double() > 0.5 ? 1.0 - (q_ - o.q_).mod1().to_double()
                                                                           : (q_ - o.q_).mod1().to_double();
        return angular_distance(turns_double(), o.turns_double());
    }

    /// Exact equality when both sides are exact, otherwise equality of angles within 1e-12 turns.
    friend bool operator==(const Phase& a, const Phase& b) {
        if (a.exact_ && b.exact_) return a.q_ == b.q_;
        return angular_distance(a.turns_double(), b.turns_double()) <= 1e-12;
    }

    [[nodiscard]] std::string str() const {
        if (exact_) return q_.str();
        return std::to_string(t_);
    }

private:
    static double angular_distance(double a, double b) {
        double d = std::fabs(a - b);
        d -= std::floor(d);
        return std::min(d, 1.0 - d);
    }

    bool exact_ = true;
    Rational q_{};
    double t_ = 0.0;
};

inline std::ostream& operator<<(std::ostream& os, const Phase& p) { return os << "exp(2pi i*" << p.str() << ")"; }

}  // namespace twisted
