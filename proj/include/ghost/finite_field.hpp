#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ghost/errors.hpp"
#include "ghost/padic.hpp"

namespace ghost {

// Element of F_{p^m}: polynomial of degree < m over F_p, coefficients
// constant-first, reduced mod p. Elements carry no back-pointer to their
// field; all arithmetic goes through the owning FiniteField.
struct FqElement {
    std::vector<std::int64_t> c;

    bool operator==(const FqElement&) const = default;
};

// F_{p^m} with a user-supplied irreducible monic modulus, m <= 4.
// Irreducibility is checked exhaustively: no roots for m in {2, 3}, no roots
// and no monic quadratic divisor for m = 4.
class FiniteField {
public:
    FiniteField(Prime p, std::vector<std::int64_t> modulus) : p_(p)
    {
        if (modulus.size() < 2 || modulus.size() > 5)
            fail(Errc::bad_modulus, "modulus degree must be 1..4");
        modulus_.resize(modulus.size());
        for (std::size_t i = 0; i < modulus.size(); ++i)
            modulus_[i] = detail::pos_mod(modulus[i], p_.value());
        m_ = static_cast<int>(modulus_.size()) - 1;
        if (modulus_.back() != 1) fail(Errc::bad_modulus, "modulus must be monic");
        check_irreducible();
        order_ = 1;
        for (int i = 0; i < m_; ++i) {
            order_ *= p_.value();
            if (order_ > (std::int64_t{1} << 31))
                fail(Errc::bad_modulus, "field order p^m exceeds the supported bound 2^31");
        }
    }

    static FiniteField prime_field(Prime p) { return FiniteField(p, {0, 1}); }

    // F_{p^2} with modulus x^2 - r for the least quadratic non-residue r.
    static FiniteField quadratic_extension(Prime p)
    {
        for (std::int64_t r = 1; r < p.value(); ++r) {
            bool residue = false;
            for (std::int64_t x = 1; x < p.value() && !residue; ++x)
                if (x * x % p.value() == r) residue = true;
            if (!residue) return FiniteField(p, {detail::pos_mod(-r, p.value()), 0, 1});
        }
        fail(Errc::bad_modulus, "no quadratic non-residue found"); // unreachable for p >= 3
    }

    const Prime& prime() const { return p_; }
    std::int64_t characteristic() const { return p_.value(); }
    int degree() const { return m_; }
    std::int64_t order() const { return order_; }
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    FqElement zero() const { return FqElement{std::vector<std::int64_t>(static_cast<std::size_t>(m_), 0)}; }
    FqElement one() const { return from_int(1); }

    FqElement from_int(std::int64_t n) const
    {
        FqElement e = zero();
        e.c[0] = detail::pos_mod(n, p_.value());
        return e;
    }

    FqElement element(const std::vector<std::int64_t>& coeffs) const
    {
        if (coeffs.size() > static_cast<std::size_t>(m_))
            fail(Errc::bad_field_element, "element has degree >= field degree m = " + std::to_string(m_));
        FqElement e = zero();
        for (std::size_t i = 0; i < coeffs.size(); ++i) e.c[i] = detail::pos_mod(coeffs[i], p_.value());
        return e;
    }

    // deterministic enumeration, index 0..order-1 by base-p digits
    FqElement element_from_index(std::int64_t idx) const
    {
        FqElement e = zero();
        for (int i = 0; i < m_; ++i) {
            e.c[static_cast<std::size_t>(i)] = idx % p_.value();
            idx /= p_.value();
        }
        return e;
    }

    bool is_zero(const FqElement& a) const
    {
        check(a);
        for (auto v : a.c)
            if (v != 0) return false;
        return true;
    }

    FqElement add(const FqElement& a, const FqElement& b) const
    {
        check(a);
        check(b);
        FqElement r = zero();
        for (int i = 0; i < m_; ++i)
            r.c[static_cast<std::size_t>(i)] =
                (a.c[static_cast<std::size_t>(i)] + b.c[static_cast<std::size_t>(i)]) % p_.value();
        return r;
    }

    FqElement neg(const FqElement& a) const
    {
        check(a);
        FqElement r = zero();
        for (int i = 0; i < m_; ++i)
            r.c[static_cast<std::size_t>(i)] = detail::pos_mod(-a.c[static_cast<std::size_t>(i)], p_.value());
        return r;
    }

    FqElement sub(const FqElement& a, const FqElement& b) const { return add(a, neg(b)); }

    FqElement mul(const FqElement& a, const FqElement& b) const
    {
        check(a);
        check(b);
        std::vector<std::int64_t> prod(static_cast<std::size_t>(2 * m_ - 1), 0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                prod[static_cast<std::size_t>(i + j)] =
                    (prod[static_cast<std::size_t>(i + j)] +
                     a.c[static_cast<std::size_t>(i)] * b.c[static_cast<std::size_t>(j)]) %
                    p_.value();
        // reduce by the monic modulus
        for (int deg = 2 * m_ - 2; deg >= m_; --deg) {
            const std::int64_t lead = prod[static_cast<std::size_t>(deg)];
            if (lead == 0) continue;
            prod[static_cast<std::size_t>(deg)] = 0;
            for (int i = 0; i < m_; ++i)
                prod[static_cast<std::size_t>(deg - m_ + i)] = detail::pos_mod(
                    prod[static_cast<std::size_t>(deg - m_ + i)] - lead * modulus_[static_cast<std::size_t>(i)],
                    p_.value());
        }
        FqElement r = zero();
        for (int i = 0; i < m_; ++i) r.c[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)];
        return r;
    }

    FqElement pow(FqElement base, std::int64_t e) const
    {
        check(base);
        if (e < 0) fail(Errc::bad_argument, "negative exponent; use inv()");
        FqElement r = one();
        while (e > 0) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    FqElement inv(const FqElement& a) const
    {
        if (is_zero(a)) fail(Errc::bad_field_element, "inverse of zero");
        return pow(a, order_ - 2);
    }

    // A square root of -1, when the field has one (iff p^m = 1 mod 4): for a
    // non-square z, z^((q-1)/4) squares to the Legendre symbol -1. Scans the
    // element enumeration until a non-square turns up.
    std::optional<FqElement> sqrt_minus_one() const
    {
        if (order_ % 4 != 1) return std::nullopt;
        const FqElement minus_one = neg(one());
        for (std::int64_t idx = 1; idx < order_; ++idx) {
            FqElement t = pow(element_from_index(idx), (order_ - 1) / 4);
            if (mul(t, t) == minus_one) return t;
        }
        return std::nullopt; // unreachable: half the non-zero elements are non-squares
    }

    // "c0,c1,..." constant-first
    FqElement parse(const std::string& text) const
    {
        std::vector<std::int64_t> coeffs;
        std::istringstream is(text);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                std::size_t pos = 0;
                coeffs.push_back(std::stoll(tok, &pos));
                if (pos != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                fail(Errc::parse_error, "bad field element coefficient '" + tok + "'");
            }
        }
        if (coeffs.empty()) fail(Errc::parse_error, "empty field element");
        return element(coeffs);
    }

    std::string str(const FqElement& a) const
    {
        check(a);
        std::string out;
        for (int i = 0; i < m_; ++i) {
            if (i) out += ',';
            out += std::to_string(a.c[static_cast<std::size_t>(i)]);
        }
        return out;
    }

    bool operator==(const FiniteField& o) const { return p_ == o.p_ && modulus_ == o.modulus_; }

private:
    void check(const FqElement& a) const
    {
        if (a.c.size() != static_cast<std::size_t>(m_))
            fail(Errc::bad_field_element, "element does not belong to this field (degree mismatch)");
    }

    std::int64_t eval_mod_p(std::int64_t x) const
    {
        std::int64_t acc = 0;
        for (std::size_t i = modulus_.size(); i-- > 0;)
            acc = detail::pos_mod(acc * x + modulus_[i], p_.value());
        return acc;
    }

    void check_irreducible() const
    {
        if (m_ == 1) return;
        for (std::int64_t x = 0; x < p_.value(); ++x)
            if (eval_mod_p(x) == 0)
                fail(Errc::bad_modulus, "modulus has the root " + std::to_string(x) + " over F_p");
        if (m_ < 4) return; // degree 2, 3: no roots suffices
        // degree 4 without roots is reducible iff it has a monic quadratic divisor
        for (std::int64_t a = 0; a < p_.value(); ++a) {
            for (std::int64_t b = 0; b < p_.value(); ++b) {
                // divide x^4 + m3 x^3 + ... by x^2 + a x + b, remainder only
                std::vector<std::int64_t> rem(modulus_.begin(), modulus_.end());
                for (int deg = 4; deg >= 2; --deg) {
                    const std::int64_t lead = rem[static_cast<std::size_t>(deg)];
                    if (lead == 0) continue;
                    rem[static_cast<std::size_t>(deg)] = 0;
                    rem[static_cast<std::size_t>(deg - 1)] =
                        detail::pos_mod(rem[static_cast<std::size_t>(deg - 1)] - lead * a, p_.value());
                    rem[static_cast<std::size_t>(deg - 2)] =
                        detail::pos_mod(rem[static_cast<std::size_t>(deg - 2)] - lead * b, p_.value());
                }
                if (rem[0] == 0 && rem[1] == 0)
                    fail(Errc::bad_modulus, "modulus is divisible by x^2 + " + std::to_string(a) + "x + " +
                                                std::to_string(b));
            }
        }
    }

    Prime p_;
    int m_ = 1;
    std::int64_t order_ = 0;
    std::vector<std::int64_t> modulus_;
};

} // namespace ghost
