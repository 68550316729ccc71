#pragma once
#include <gmpxx.h>
#include <string>
#include <stdexcept>

namespace helpkit {

// Exact arbitrary-precision rational. mpq_class already maintains the
// canonical form we need (reduced, positive denominator); this header adds
// the small amount of glue the rest of the engine wants.
using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer numer(const Rational& r) { return r.get_num(); }
inline Integer denom(const Rational& r) { return r.get_den(); }

// Floor division for rationals: largest integer <= r.
inline Integer rational_floor(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer rational_ceil(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Accepts "a" or "a/b", optionally signed. Throws on malformed input.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    mpq_class r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("malformed rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace helpkit
