#ifndef RODMAT_RATIONAL_HPP
#define RODMAT_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "error.hpp"

namespace rodmat {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational rat(long p, long q = 1)
{
    if (q == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// "p/q", or "p" when q == 1
inline std::string to_string(const Rational& r) { return r.get_str(); }

// Accepts "p/q", "p" and plain decimals such as "-0.25" (converted exactly).
inline Rational parse_rational(const std::string& text)
{
    std::string s = text;
    if (s.empty()) throw Error(ErrorKind::SchemaError, "empty rational");
    auto dot = s.find('.');
    try {
        if (dot != std::string::npos && s.find('/') == std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits == "" || digits == "-" || digits == "+")
                throw Error(ErrorKind::SchemaError, "bad rational '" + text + "'");
            if (digits[0] == '+') digits.erase(0, 1);
            Integer num(digits, 10);
            Integer den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, s.size() - dot - 1);
            Rational r(num, den);
            r.canonicalize();
            return r;
        }
        if (s[0] == '+') s.erase(0, 1);
        Rational r(s, 10);
        if (r.get_den() == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator in '" + text + "'");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::SchemaError, "bad rational '" + text + "'");
    }
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::optional<Integer> integer_sqrt_exact(const Integer& n)
{
    if (n < 0) return std::nullopt;
    Integer root;
    mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
    if (root * root != n) return std::nullopt;
    return root;
}

// Exact square root of a non-negative rational when it is a rational square.
inline std::optional<Rational> rational_sqrt(const Rational& r)
{
    if (r < 0) return std::nullopt;
    auto p = integer_sqrt_exact(r.get_num());
    auto q = integer_sqrt_exact(r.get_den());
    if (!p || !q) return std::nullopt;
    Rational out(*p, *q);
    out.canonicalize();
    return out;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

} // namespace rodmat

#endif
