#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "ghost/errors.hpp"

namespace ghost {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "n" or "n/d" with an optional leading sign; anything else
// (decimals, exponents, blanks) is a parse error. All slope and valuation
// I/O goes through here so no floating point ever enters the data path.
inline Rational parse_rational(const std::string& text)
{
    // strip an explicit '+': the big-integer parser takes only '-'
    const std::string s = (!text.empty() && text[0] == '+') ? text.substr(1) : text;
    std::size_t i = 0;
    const auto digits = [&](std::size_t from) {
        std::size_t n = from;
        while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
        return n;
    };
    if (i < s.size() && s[i] == '-') ++i;
    std::size_t num_end = digits(i);
    if (num_end == i) fail(Errc::parse_error, "not an exact rational: '" + text + "'");
    if (num_end == s.size())
        return Rational(BigInt(s));
    if (s[num_end] != '/') fail(Errc::parse_error, "not an exact rational: '" + text + "'");
    std::size_t den_begin = num_end + 1;
    std::size_t den_end = digits(den_begin);
    if (den_end == den_begin || den_end != s.size())
        fail(Errc::parse_error, "not an exact rational: '" + text + "'");
    BigInt den(s.substr(den_begin));
    if (den == 0) fail(Errc::parse_error, "zero denominator: '" + text + "'");
    return Rational(BigInt(s.substr(0, num_end)), den);
}

inline std::string to_string(const Rational& r)
{
    std::ostringstream os;
    os << r;
    return os.str();
}

inline BigInt rational_ceil(const Rational& r)
{
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r); // canonical: den > 0
    BigInt q = num / den;
    if (num % den != 0 && num > 0) ++q;
    return q;
}

} // namespace ghost
