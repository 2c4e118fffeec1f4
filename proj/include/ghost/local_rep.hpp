#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "ghost/errors.hpp"
#include "ghost/finite_field.hpp"
#include "ghost/padic.hpp"
#include "ghost/rational.hpp"

namespace ghost {

// Semisimple 2-dimensional local mod-p representations in the standard
// classification: either an induction ind(w2^s) of a power of a niveau-2
// fundamental character, or a split sum of unramified twists of powers of
// the mod-p cyclotomic character omega. Everything is taken up to the stored
// twist by nr(gamma) omega^j.

struct SplitRep {
    FqElement alpha; // nonzero
    FqElement beta;  // nonzero
    std::int64_t t = 0;           // (nr(alpha) + nr(beta) omega^t), 0 <= t <= p-2
    std::int64_t twist_omega = 0; // ... tensor omega^j
};

struct InducedRep {
    std::int64_t s = 0; // mod p^2 - 1
    FqElement twist_nr; // nonzero gamma
    std::int64_t twist_omega = 0;
    // s = 0 (mod p+1) makes ind(w2^s) reducible; set when the working field
    // lacks a square root of -1 so the split rewrite is unavailable
    bool reducible = false;
};

class LocalRep {
public:
    static LocalRep split(const FiniteField& F, const FqElement& alpha, const FqElement& beta,
                          std::int64_t t, std::int64_t j)
    {
        if (F.is_zero(alpha) || F.is_zero(beta))
            fail(Errc::bad_field_element, "split characters require nonzero alpha, beta");
        const std::int64_t p1 = F.characteristic() - 1;
        return LocalRep(F, SplitRep{alpha, beta, detail::pos_mod(t, p1), detail::pos_mod(j, p1)});
    }

    // ind(w2^s) tensor nr(gamma) omega^j. When p+1 divides s the induction is
    // reducible: ind(w2^{(p+1)u}) = omega^u tensor ind(1) and
    // ind(1) = nr(i) + nr(-i), so the representation is rewritten in split
    // form whenever the working field contains i = sqrt(-1) (it always does
    // in F_{p^2}); otherwise the induced form is kept with a reducible flag.
    static LocalRep induced(const FiniteField& F, std::int64_t s, const FqElement& gamma, std::int64_t j)
    {
        if (F.is_zero(gamma)) fail(Errc::bad_field_element, "twist character requires nonzero gamma");
        const std::int64_t p = F.characteristic();
        s = detail::pos_mod(s, p * p - 1);
        j = detail::pos_mod(j, p - 1);
        if (s % (p + 1) == 0) {
            const std::int64_t u = s / (p + 1);
            if (auto i = F.sqrt_minus_one()) {
                const FqElement a = F.mul(gamma, *i);
                return split(F, a, F.neg(a), 0, u + j);
            }
            return LocalRep(F, InducedRep{s, gamma, j, true});
        }
        return LocalRep(F, InducedRep{s, gamma, j, false});
    }

    static LocalRep induced(const FiniteField& F, std::int64_t s, std::int64_t j)
    {
        return induced(F, s, F.one(), j);
    }

    bool is_split() const { return std::holds_alternative<SplitRep>(rep_); }
    bool is_induced() const { return std::holds_alternative<InducedRep>(rep_); }
    const SplitRep& as_split() const { return std::get<SplitRep>(rep_); }
    const InducedRep& as_induced() const { return std::get<InducedRep>(rep_); }
    const FiniteField& field() const { return F_; }
    const Prime& prime() const { return F_.prime(); }

    LocalRep canonical() const
    {
        if (is_split()) {
            const auto& r = as_split();
            return split(F_, r.alpha, r.beta, r.t, r.twist_omega);
        }
        const auto& r = as_induced();
        return induced(F_, r.s, r.twist_nr, r.twist_omega);
    }

    bool operator==(const LocalRep& o) const
    {
        if (!(F_ == o.F_)) return false;
        if (is_split() != o.is_split()) return false;
        if (is_split()) {
            const auto &a = as_split(), &b = o.as_split();
            return a.alpha == b.alpha && a.beta == b.beta && a.t == b.t && a.twist_omega == b.twist_omega;
        }
        const auto &a = as_induced(), &b = o.as_induced();
        return a.s == b.s && a.twist_nr == b.twist_nr && a.twist_omega == b.twist_omega;
    }

    std::string str() const
    {
        std::ostringstream os;
        if (is_split()) {
            const auto& r = as_split();
            os << "(nr(" << F_.str(r.alpha) << ") + nr(" << F_.str(r.beta) << ")w^" << r.t << ") x w^"
               << r.twist_omega;
        } else {
            const auto& r = as_induced();
            os << "ind(w2^" << r.s << ") x nr(" << F_.str(r.twist_nr) << ")w^" << r.twist_omega;
            if (r.reducible) os << " [reducible]";
        }
        return os.str();
    }

private:
    LocalRep(const FiniteField& F, SplitRep r) : F_(F), rep_(std::move(r)) {}
    LocalRep(const FiniteField& F, InducedRep r) : F_(F), rep_(std::move(r)) {}

    FiniteField F_;
    std::variant<SplitRep, InducedRep> rep_;
};

inline LocalRep twist(const LocalRep& r, const FqElement& gamma, std::int64_t j)
{
    const FiniteField& F = r.field();
    if (F.is_zero(gamma)) fail(Errc::bad_field_element, "twist requires nonzero gamma");
    if (r.is_split()) {
        const auto& s = r.as_split();
        return LocalRep::split(F, F.mul(gamma, s.alpha), F.mul(gamma, s.beta), s.t, s.twist_omega + j);
    }
    const auto& ind = r.as_induced();
    return LocalRep::induced(F, ind.s, F.mul(gamma, ind.twist_nr), ind.twist_omega + j);
}

struct Classification {
    bool irregular = false;
    std::string witness;
};

// Irregular means: a twist of ind(w2^s) for some s. Equivalently (the two
// clauses reported as witnesses):
//   (2a) irreducible, i.e. induced with s != 0 (mod p+1);
//   (2b) a twist of an unramified representation with Frobenius trace zero,
//        i.e. split with t = 0 and alpha + beta = 0 -- which is where the
//        reducible inductions land, since ind(1) = nr(i) + nr(-i).
inline Classification is_irregular(const LocalRep& r)
{
    const FiniteField& F = r.field();
    if (r.is_induced()) {
        if (!r.as_induced().reducible) return {true, "irreducible (2a)"};
        return {true, "unramified-twist trace zero (2b)"};
    }
    const auto& s = r.as_split();
    if (s.t == 0 && F.is_zero(F.add(s.alpha, s.beta)))
        return {true, "unramified-twist trace zero (2b)"};
    if (s.t == 0)
        return {false, "unramified twist with Frobenius trace " + F.str(F.add(s.alpha, s.beta)) + " != 0"};
    return {false, "split with ramified ratio w^" + std::to_string(s.t) + " (not an unramified twist)"};
}

// The component invariant b in [2, p]: det|_I = omega^{b-1}. ind(w2^s) has
// determinant omega^s and a split rep contributes omega^t; the stored
// omega-twist enters squared.
inline std::int64_t b_of(const LocalRep& r)
{
    const std::int64_t p = r.prime().value();
    const std::int64_t det_power =
        r.is_induced() ? r.as_induced().s + 2 * r.as_induced().twist_omega
                       : r.as_split().t + 2 * r.as_split().twist_omega;
    return 2 + detail::pos_mod(det_power - 1, p - 1);
}

// Shape of the mod-p reduction of a small-weight crystalline representation,
// with the slope interval it came from and its regularity verdict.
struct ReductionShape {
    enum class Kind { ind2, split_unramified_pair, ind_one_twist };

    Kind kind = Kind::ind2;
    std::int64_t exponent = 0;                // ind2: the w2 power; ind_one_twist: the omega power
    std::optional<FqElement> trace_over_p;    // split_unramified_pair: alpha + alpha^{-1} = a_p / p
    std::string slope_condition;
    Classification classification;

    std::string str(const FiniteField& F) const
    {
        switch (kind) {
            case Kind::ind2: return "ind(w2^" + std::to_string(exponent) + ")";
            case Kind::split_unramified_pair:
                return "(nr(a) + nr(a^-1)) x w,  a + a^-1 = " + F.str(*trace_over_p);
            case Kind::ind_one_twist: return "ind(1) x w^" + std::to_string(exponent);
        }
        return "";
    }
};

// Reduction of the crystalline representation of weight k and positive slope
// v_p(a_p), for the proven range 2 <= k <= p+2:
//   k <= p+1                  -> ind(w2^{k-1})
//   k = p+2, 0 < slope < 1    -> ind(w2^2)
//   k = p+2, slope = 1        -> (nr(a) + nr(a^-1)) x w with a + a^-1 = a_p/p,
//                                which must reduce to a nonzero trace
//   k = p+2, slope > 1        -> ind(1) x w
inline ReductionShape reduce_crystalline_small_weight(const FiniteField& F, std::int64_t k,
                                                      const Rational& slope,
                                                      std::optional<FqElement> trace_over_p = {})
{
    const std::int64_t p = F.characteristic();
    if (k < 2 || k > p + 2)
        fail(Errc::out_of_range, "k = " + std::to_string(k) + " outside the proven range [2, p+2]");
    if (slope <= 0) fail(Errc::bad_argument, "slope must be > 0");

    const auto classify_induced = [&](std::int64_t s, std::int64_t j) {
        return is_irregular(LocalRep::induced(F, s, j));
    };

    ReductionShape out;
    if (k <= p + 1) {
        out.kind = ReductionShape::Kind::ind2;
        out.exponent = k - 1;
        out.slope_condition = "0 < v_p(a_p)";
        out.classification = classify_induced(k - 1, 0);
        return out;
    }
    if (slope < 1) {
        out.kind = ReductionShape::Kind::ind2;
        out.exponent = 2;
        out.slope_condition = "0 < v_p(a_p) < 1";
        out.classification = classify_induced(2, 0);
        return out;
    }
    if (slope == 1) {
        if (!trace_over_p || F.is_zero(*trace_over_p))
            fail(Errc::trace_required,
                 "slope 1 at weight p+2 needs a nonzero trace a_p/p in the residue field");
        out.kind = ReductionShape::Kind::split_unramified_pair;
        out.trace_over_p = trace_over_p;
        out.slope_condition = "v_p(a_p) = 1";
        // nr(a) + nr(a^-1) is an unramified pair; it is irregular exactly
        // when the trace a + a^-1 vanishes, which the error above excludes
        out.classification = {false, "unramified pair with Frobenius trace " + F.str(*trace_over_p) + " != 0"};
        return out;
    }
    out.kind = ReductionShape::Kind::ind_one_twist;
    out.exponent = 1;
    out.slope_condition = "1 < v_p(a_p)";
    out.classification = classify_induced(0, 1);
    return out;
}

// --- textual rep descriptors (grammar version 1) ---------------------------
//
//   split p=<p> m=<m> modulus=<c0,...,cm> alpha=<c0,...> beta=<c0,...> t=<t> j=<j>
//   ind p=<p> s=<s> j=<j>
//
// Tokens are whitespace-separated key=value pairs after the form keyword; an
// optional leading "v1" pins the grammar version. Polynomials are
// constant-first coefficient lists. Induced descriptors pick their working
// field automatically: F_p when it already contains sqrt(-1) (p = 1 mod 4),
// else F_{p^2}.
inline LocalRep parse_local_rep(const std::string& text, bool allow_small_prime = false)
{
    std::istringstream is(text);
    std::string form;
    is >> form;
    if (form == "v1") is >> form;
    std::map<std::string, std::string> kv;
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size())
            fail(Errc::parse_error, "expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    const auto need = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) fail(Errc::parse_error, "rep descriptor is missing " + key + "=");
        return it->second;
    };
    const auto strict_int = [](const std::string& text, const std::string& what) {
        try {
            std::size_t pos = 0;
            const std::int64_t v = std::stoll(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return v;
        } catch (const std::exception&) {
            fail(Errc::parse_error, "bad integer '" + text + "' for " + what);
        }
    };
    const auto as_int = [&](const std::string& key) { return strict_int(need(key), key + "="); };
    const auto as_coeffs = [&](const std::string& key) {
        std::vector<std::int64_t> out;
        std::istringstream cs(need(key));
        std::string c;
        while (std::getline(cs, c, ',')) out.push_back(strict_int(c, key + "="));
        return out;
    };

    if (form == "split") {
        Prime p(as_int("p"), allow_small_prime);
        const std::int64_t m = as_int("m");
        auto modulus = as_coeffs("modulus");
        if (static_cast<std::int64_t>(modulus.size()) != m + 1)
            fail(Errc::parse_error, "m = " + std::to_string(m) + " does not match the modulus degree");
        FiniteField F(p, modulus);
        return LocalRep::split(F, F.element(as_coeffs("alpha")), F.element(as_coeffs("beta")),
                               as_int("t"), as_int("j"));
    }
    if (form == "ind") {
        Prime p(as_int("p"), allow_small_prime);
        FiniteField F = (p.value() % 4 == 1) ? FiniteField::prime_field(p)
                                             : FiniteField::quadratic_extension(p);
        return LocalRep::induced(F, as_int("s"), as_int("j"));
    }
    fail(Errc::parse_error, "rep descriptor must start with 'split' or 'ind', got '" + form + "'");
}

} // namespace ghost
