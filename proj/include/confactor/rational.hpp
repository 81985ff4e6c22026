#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace confactor {

// Exact rational scalar used for all breakpoints. Values stay in double;
// keeping the grid exact confines rounding to value arithmetic.
using Rational = mpq_class;

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "p/q" or a plain integer "p".
inline Rational rational_from_string(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("rational: cannot parse '" + s + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("rational: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    Rational q(x);
    q.canonicalize();
    return q;
}

// Nearest rational with denominator 2^63. Used when a root of a linear
// piece has to be inserted into a rational breakpoint grid.
inline Rational round_to_dyadic63(const Rational& t) {
    static const mpz_class two63 = mpz_class(1) << 63;
    mpq_class scaled = t * two63;
    // round half up
    mpz_class num;
    mpz_class twice = scaled.get_num() * 2 + scaled.get_den();
    mpz_fdiv_q(num.get_mpz_t(), twice.get_mpz_t(),
               mpz_class(scaled.get_den() * 2).get_mpz_t());
    Rational out(num, two63);
    out.canonicalize();
    return out;
}

}  // namespace confactor
