#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "helpkit/cyclo.hpp"

using namespace helpkit;

namespace {

// Deterministic RNG so failures reproduce.
std::mt19937 rng(20240817);

Cyclotomic random_element(long n, int terms) {
    std::uniform_int_distribution<long> exp_d(0, n - 1);
    std::uniform_int_distribution<long> num_d(-9, 9);
    std::uniform_int_distribution<long> den_d(1, 4);
    std::map<long, Rational> c;
    for (int i = 0; i < terms; ++i) {
        Rational r(num_d(rng), den_d(rng));
        r.canonicalize();  // mpq_class(n, d) does not reduce on its own
        c[exp_d(rng)] += r;
    }
    return Cyclotomic(n, std::move(c));
}

}  // namespace

TEST_CASE("number-theory helpers") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(17) == 16);
    CHECK(euler_phi(119) == 96);
    CHECK(mobius(1) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(divisors(28) == std::vector<long>{1, 2, 4, 7, 14, 28});
    auto f = factorize(14280);
    CHECK(f == std::vector<std::pair<long, int>>{{2, 3}, {3, 1}, {5, 1}, {7, 1}, {17, 1}});
}

TEST_CASE("roots of unity and conductor minimization") {
    CHECK(root_of_unity(6, 0) == Cyclotomic::one());
    // zeta_4^2 = -1 lives in Q.
    Cyclotomic m1 = root_of_unity(4, 2);
    CHECK(m1.is_rational());
    CHECK(m1.rational_value() == Rational(-1));
    // zeta_6 = -zeta_3^2: conductor must drop from 6 to 3.
    CHECK(root_of_unity(6, 1).conductor() == 3);
    // 1 + zeta_5 + ... + zeta_5^4 = 0.
    Cyclotomic s = Cyclotomic::one();
    for (long j = 1; j < 5; ++j) s = s + root_of_unity(5, j);
    CHECK(s.is_zero());
}

TEST_CASE("closed-form root trace matches trace_to_Q for all conductors <= 60") {
    // trace_of_root is the trace from Q(zeta_m); trace_to_Q works from the
    // minimal field Q(zeta_c), so the two differ by the field degree ratio.
    for (long m = 1; m <= 60; ++m)
        for (long j = 0; j < m; ++j) {
            CAPTURE(m);
            CAPTURE(j);
            Cyclotomic z = root_of_unity(m, j);
            Rational ratio(euler_phi(m), euler_phi(z.conductor()));
            ratio.canonicalize();
            CHECK(Rational(trace_of_root(m, j)) == trace_to_Q(z) * ratio);
        }
}

TEST_CASE("trace equals sum of Galois conjugates and matches numerics") {
    for (long n : {5L, 8L, 12L, 17L, 31L, 40L, 60L}) {
        for (int rep = 0; rep < 5; ++rep) {
            Cyclotomic a = random_element(n, 4);
            // Conjugate sum over the Galois group of Q(zeta_c).
            long c = a.conductor();
            Cyclotomic sum;
            for (long k = 1; k <= c; ++k)
                if (std::gcd(k, c) == 1) sum = sum + a.galois(k);
            REQUIRE(sum.is_rational());
            Rational tr = trace_to_Q(a);
            CHECK(sum.rational_value() == tr);
            // Floating-point cross-check.
            std::complex<double> approx{0.0, 0.0};
            for (long k = 1; k <= c; ++k)
                if (std::gcd(k, c) == 1) approx += a.galois(k).to_complex();
            CHECK(std::abs(approx.real() - tr.get_d()) < 1e-9);
            CHECK(std::abs(approx.imag()) < 1e-9);
        }
    }
}

TEST_CASE("field algebra: ring axioms on random elements") {
    for (long n : {7L, 9L, 15L, 16L, 24L, 35L}) {
        for (int rep = 0; rep < 4; ++rep) {
            Cyclotomic a = random_element(n, 3);
            Cyclotomic b = random_element(n, 3);
            Cyclotomic c = random_element(n, 3);
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK((a + b) * c == a * c + b * c);
            CHECK(a - a == Cyclotomic::zero());
            CHECK(a * Cyclotomic::one() == a);
            // Numerical agreement of products.
            auto lhs = (a * b).to_complex();
            auto rhs = a.to_complex() * b.to_complex();
            CHECK(std::abs(lhs - rhs) < 1e-6);
        }
    }
}

TEST_CASE("galois automorphisms respect multiplication and fix Q") {
    Cyclotomic a = random_element(17, 4);
    Cyclotomic b = random_element(17, 4);
    for (long k : {2L, 3L, 16L}) {
        CHECK(a.galois(k) * b.galois(k) == (a * b).galois(k));
        CHECK(trace_to_Q(a.galois(k)) == trace_to_Q(a));
    }
    Cyclotomic r{Rational(7, 3)};
    CHECK(r.galois(5) == r);
    // conj is an involution.
    CHECK(a.conj().conj() == a);
}

TEST_CASE("quadratic irrationalities via quadratic-residue sums") {
    // (1 - sqrt(17)) / 2 = -(sum of zeta_17^r over quadratic residues r).
    std::map<long, Rational> qr;
    for (long r : {1, 2, 4, 8, 9, 13, 15, 16}) qr[r] = Rational(-1);
    Cyclotomic x(17, std::move(qr));
    // x satisfies x^2 - x - 4 = 0.
    CHECK(x * x - x - Cyclotomic(Rational(4)) == Cyclotomic::zero());
    CHECK(std::abs(x.to_complex().real() - (1.0 - std::sqrt(17.0)) / 2.0) < 1e-9);
}

TEST_CASE("cyclotomic polynomial cache") {
    const auto& phi12 = cyclotomic_polynomial(12);  // x^4 - x^2 + 1
    REQUIRE(phi12.size() == 5);
    CHECK(phi12[0] == 1);
    CHECK(phi12[2] == -1);
    CHECK(phi12[4] == 1);
    const auto& phi1 = cyclotomic_polynomial(1);  // x - 1
    CHECK(phi1.size() == 2);
}
