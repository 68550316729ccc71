#pragma once
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "helpkit/rational.hpp"

namespace helpkit {

// Exact element of Q(zeta_n), stored in the power basis
// 1, zeta, ..., zeta^{phi(n)-1} reduced modulo the n-th cyclotomic
// polynomial, with the conductor minimized (rationals live at conductor 1).
// Only nonzero coefficients are stored, so equality is map equality.
class Cyclotomic {
public:
    Cyclotomic() : conductor_(1) {}                       // zero
    Cyclotomic(const Rational& r);                        // rational value
    Cyclotomic(long n, std::map<long, Rational> coeffs);  // canonicalizes

    static Cyclotomic zero() { return Cyclotomic(); }
    static Cyclotomic one() { return Cyclotomic(Rational(1)); }

    long conductor() const { return conductor_; }
    const std::map<long, Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const { return conductor_ == 1; }
    // Precondition: is_rational().
    Rational rational_value() const;

    bool operator==(const Cyclotomic& o) const {
        return conductor_ == o.conductor_ && coeffs_ == o.coeffs_;
    }
    bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

    Cyclotomic operator+(const Cyclotomic& o) const;
    Cyclotomic operator-(const Cyclotomic& o) const;
    Cyclotomic operator-() const;
    Cyclotomic operator*(const Cyclotomic& o) const;
    Cyclotomic scaled(const Rational& r) const;

    // Galois automorphism sigma_k : zeta -> zeta^k. Requires gcd(k, n) = 1.
    Cyclotomic galois(long k) const;

    // Complex conjugation (= galois(-1)).
    Cyclotomic conj() const { return galois(-1); }

    // Numerical evaluation, for the floating-point cross-check oracle only.
    std::complex<double> to_complex() const;

    std::string str() const;

private:
    long conductor_;
    std::map<long, Rational> coeffs_;  // exponent -> nonzero coefficient

    void canonicalize();  // reduce mod Phi_n, drop zeros, minimize conductor
    friend Cyclotomic root_of_unity(long, long);
};

// zeta_n ^ j, canonical (conductor minimized).
Cyclotomic root_of_unity(long n, long j);

inline Cyclotomic add(const Cyclotomic& a, const Cyclotomic& b) { return a + b; }
inline Cyclotomic mul(const Cyclotomic& a, const Cyclotomic& b) { return a * b; }
inline Cyclotomic scale(const Cyclotomic& a, const Rational& r) { return a.scaled(r); }

// Tr_{Q(zeta_n)/Q}(a) = sum of all Galois conjugates; always rational.
Rational trace_to_Q(const Cyclotomic& a);

// Closed form Tr_{Q(zeta_m)/Q}(zeta_m^j) = mobius(m0) * phi(m) / phi(m0),
// where m0 = m / gcd(j, m).
long trace_of_root(long m, long j);

// Number-theory helpers shared across modules.
long euler_phi(long n);
int mobius(long n);
std::vector<long> divisors(long n);
std::vector<std::pair<long, int>> factorize(long n);

// Coefficients of the n-th cyclotomic polynomial (degree phi(n), monic),
// index = power. Cached; safe for concurrent use.
const std::vector<Integer>& cyclotomic_polynomial(long n);

}  // namespace helpkit
