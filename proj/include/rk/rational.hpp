// Exact rational scalar type backed by GMP. All symbolic computation in this
// library uses Rational; floating point appears only in the numerical harness.
#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace rk {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p" or "p/q". Decimal notation is rejected: exactness is a
// contract, not a convention.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    for (char ch : text) {
        bool ok = (ch >= '0' && ch <= '9') || ch == '/' || ch == '-' || ch == '+';
        if (!ok) throw std::invalid_argument("invalid rational literal: " + text);
    }
    Rational r;
    if (r.set_str(text, 10) != 0)
        throw std::invalid_argument("invalid rational literal: " + text);
    if (r.get_den() == 0)
        throw std::invalid_argument("zero denominator in rational literal: " + text);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace rk
