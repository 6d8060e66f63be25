/**
 * Exact integer and rational scalars used throughout the library.
 *
 * Every rank, coefficient and degree is exact; there is no floating point
 * anywhere in the computation.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace hfsurg {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Greatest integer less than or equal to a / b, for b != 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    if (b == 0)
        throw std::domain_error("floor_div: division by zero");
    std::int64_t quot = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --quot;
    return quot;
}

/// Least nonnegative residue of a modulo m, for m > 0.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    return a - m * floor_div(a, m);
}

/// Exact fraction string "a/b" with b >= 1 (integers are written "a/1").
inline std::string fraction_string(const Rational& value)
{
    return boost::multiprecision::numerator(value).str() + "/" +
           boost::multiprecision::denominator(value).str();
}

/// Parses "a/b" or "a"; rejects anything else (including a zero denominator).
inline Rational parse_fraction(std::string_view text)
{
    auto parse_int = [](std::string_view s) -> Integer {
        if (s.empty())
            throw std::invalid_argument("empty integer in fraction");
        std::size_t pos = 0;
        if (s[0] == '-' || s[0] == '+')
            pos = 1;
        if (pos == s.size())
            throw std::invalid_argument("malformed integer in fraction");
        for (std::size_t k = pos; k < s.size(); ++k) {
            if (s[k] < '0' || s[k] > '9')
                throw std::invalid_argument("malformed integer in fraction: " + std::string(s));
        }
        return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };

    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    Integer num = parse_int(text.substr(0, slash));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in fraction");
    return Rational(num, den);
}

inline bool is_integer(const Rational& value)
{
    return boost::multiprecision::denominator(value) == 1;
}

}   // namespace hfsurg
