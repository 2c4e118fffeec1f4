#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "ghost/errors.hpp"
#include "ghost/rational.hpp"

namespace ghost {

namespace detail {

inline std::int64_t pos_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline bool is_prime_int(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

} // namespace detail

// The working prime. p = 2 is refused outright; p = 3 is admitted only under
// the allow-small-prime override, and anything it produces downstream is
// stamped as outside the conjecture's stated range (which starts at p = 5).
class Prime {
public:
    explicit Prime(std::int64_t p, bool allow_small_prime = false) : p_(p)
    {
        if (p >= (std::int64_t{1} << 31))
            fail(Errc::bad_prime, "primes above 2^31 are not supported");
        if (!detail::is_prime_int(p)) fail(Errc::bad_prime, std::to_string(p) + " is not prime");
        if (p == 2) fail(Errc::bad_prime, "p = 2 is refused");
        if (p < 5 && !allow_small_prime)
            fail(Errc::bad_prime, "p = " + std::to_string(p) + " requires the allow-small-prime override");
    }

    std::int64_t value() const { return p_; }
    bool outside_conjecture_range() const { return p_ < 5; }

    bool operator==(const Prime& o) const { return p_ == o.p_; }

private:
    std::int64_t p_;
};

// Exact p-adic valuation value: a rational or +inf. +inf absorbs addition
// and min(+inf, v) = v.
class Valuation {
public:
    Valuation() : finite_(true), v_(0) {}
    explicit Valuation(Rational v) : finite_(true), v_(std::move(v)) {}
    explicit Valuation(std::int64_t v) : finite_(true), v_(v) {}

    static Valuation infinity()
    {
        Valuation v;
        v.finite_ = false;
        return v;
    }

    bool finite() const { return finite_; }

    const Rational& value() const
    {
        if (!finite_) fail(Errc::bad_argument, "value() on an infinite valuation");
        return v_;
    }

    Valuation operator+(const Valuation& o) const
    {
        if (!finite_ || !o.finite_) return infinity();
        return Valuation(v_ + o.v_);
    }

    Valuation& operator+=(const Valuation& o) { return *this = *this + o; }

    Valuation scaled(std::int64_t multiplicity) const
    {
        if (!finite_) return infinity();
        return Valuation(v_ * multiplicity);
    }

    friend Valuation min(const Valuation& a, const Valuation& b)
    {
        if (!a.finite_) return b;
        if (!b.finite_) return a;
        return a.v_ <= b.v_ ? a : b;
    }

    bool operator==(const Valuation& o) const
    {
        if (finite_ != o.finite_) return false;
        return !finite_ || v_ == o.v_;
    }

    bool operator<(const Valuation& o) const
    {
        if (!finite_) return false;
        if (!o.finite_) return true;
        return v_ < o.v_;
    }

    bool operator<=(const Valuation& o) const { return *this < o || *this == o; }

    std::string str() const { return finite_ ? to_string(v_) : "inf"; }

private:
    bool finite_;
    Rational v_;
};

// A point of p-adic weight space, seen through the coordinate w. Arithmetic
// weights store the integer k (never the huge coordinate (1+2p)^k - 1
// itself); generic weights carry only the valuation c = v_p(w) > 0.
class Weight {
public:
    static Weight arithmetic(std::int64_t k)
    {
        if (k < 2) fail(Errc::bad_weight, "arithmetic weight must be >= 2, got " + std::to_string(k));
        return Weight(k);
    }

    static Weight generic(Rational coordinate_valuation)
    {
        if (coordinate_valuation <= 0)
            fail(Errc::bad_weight, "generic weight requires v_p(w) > 0, got " + to_string(coordinate_valuation));
        return Weight(std::move(coordinate_valuation));
    }

    bool is_arithmetic() const { return std::holds_alternative<std::int64_t>(w_); }

    std::int64_t k() const
    {
        if (!is_arithmetic()) fail(Errc::bad_argument, "k() on a generic weight");
        return std::get<std::int64_t>(w_);
    }

    const Rational& coordinate_valuation() const
    {
        if (is_arithmetic()) fail(Errc::bad_argument, "coordinate_valuation() on an arithmetic weight");
        return std::get<Rational>(w_);
    }

    std::string str() const
    {
        if (is_arithmetic()) return "w_" + std::to_string(k());
        return "generic(v=" + to_string(coordinate_valuation()) + ")";
    }

private:
    explicit Weight(std::int64_t k) : w_(k) {}
    explicit Weight(Rational c) : w_(std::move(c)) {}
    std::variant<std::int64_t, Rational> w_;
};

// Exponent of p in n. Callers own the n = 0 case (+inf); we refuse it.
inline std::int64_t vp_integer(std::int64_t n, const Prime& p)
{
    if (n == 0) fail(Errc::zero_input, "vp_integer(0) is undefined; handle +inf at the call site");
    if (n < 0) n = -n;
    std::int64_t v = 0;
    while (n % p.value() == 0) {
        n /= p.value();
        ++v;
    }
    return v;
}

inline std::int64_t vp_integer(BigInt n, const Prime& p)
{
    if (n == 0) fail(Errc::zero_input, "vp_integer(0) is undefined; handle +inf at the call site");
    if (n < 0) n = -n;
    std::int64_t v = 0;
    const BigInt q(p.value());
    while (n % q == 0) {
        n /= q;
        ++v;
    }
    return v;
}

// v_p(w - w_k) for a weight w and an arithmetic weight k >= 2.
//
// Arithmetic case: w_{k0} - w_k = (1+2p)^k ((1+2p)^{k0-k} - 1), and for odd p
// v_p((1+2p)^m - 1) = 1 + v_p(m), so the answer is 1 + v_p(k0 - k). The huge
// coordinates are never materialized here; only the test oracle expands them.
//
// Generic case: v_p(w_k) = 1 + v_p(k), so the difference has valuation
// min(c, 1 + v_p(k)) whenever the two terms have distinct valuations. A tie
// c = 1 + v_p(k) leaves the valuation undetermined by c alone and is refused.
inline Valuation vp_weight_difference(const Weight& w, std::int64_t k, const Prime& p)
{
    if (k < 2) fail(Errc::bad_weight, "weight difference needs k >= 2, got " + std::to_string(k));
    if (w.is_arithmetic()) {
        if (w.k() == k) return Valuation::infinity();
        return Valuation(1 + vp_integer(w.k() - k, p));
    }
    const Rational wk_val(1 + vp_integer(k, p));
    const Rational& c = w.coordinate_valuation();
    if (c == wk_val)
        fail(Errc::indeterminate_valuation,
             "v_p(w) = v_p(w_" + std::to_string(k) + ") = " + to_string(wk_val) +
                 "; the difference's valuation is not determined by v_p(w) alone");
    return Valuation(c < wk_val ? c : wk_val);
}

} // namespace ghost
