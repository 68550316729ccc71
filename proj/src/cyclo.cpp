#include "helpkit/cyclo.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace helpkit {

std::vector<std::pair<long, int>> factorize(long n) {
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.push_back({p, e});
        }
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

long euler_phi(long n) {
    long r = 1;
    for (auto [p, e] : factorize(n)) {
        r *= (p - 1);
        for (int i = 1; i < e; ++i) r *= p;
    }
    return r;
}

int mobius(long n) {
    int r = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        (void)p;
        r = -r;
    }
    return r;
}

std::vector<long> divisors(long n) {
    std::vector<long> out;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

long trace_of_root_uncached(long m, long j) {
    long m0 = m / std::gcd(j, m);
    return mobius(m0) * (euler_phi(m) / euler_phi(m0));
}

std::unordered_map<long, std::vector<long>> g_trace_cache;
std::mutex g_trace_mutex;

}  // namespace

long trace_of_root(long m, long j) {
    j %= m;
    if (j < 0) j += m;
    // The trace depends only on gcd(j, m), so one table of m entries answers
    // every exponent; the inner mu-form loops hit this for every l.
    {
        std::lock_guard<std::mutex> lock(g_trace_mutex);
        auto it = g_trace_cache.find(m);
        if (it != g_trace_cache.end()) return it->second[j];
    }
    std::vector<long> table(m);
    for (long e = 0; e < m; ++e) table[e] = trace_of_root_uncached(m, e);
    std::lock_guard<std::mutex> lock(g_trace_mutex);
    return g_trace_cache.emplace(m, std::move(table)).first->second[j];
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials, cached per conductor.

namespace {

// Exact division of integer polynomials (b monic divides a).
std::vector<Integer> poly_divide_exact(std::vector<Integer> a,
                                       const std::vector<Integer>& b) {
    std::vector<Integer> q(a.size() - b.size() + 1, 0);
    for (long d = (long)a.size() - 1; d >= (long)b.size() - 1; --d) {
        Integer c = a[d];
        if (c == 0) continue;
        long shift = d - ((long)b.size() - 1);
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    }
    return q;
}

std::unordered_map<long, std::vector<Integer>> g_phi_cache;
std::mutex g_phi_mutex;

std::vector<Integer> compute_cyclotomic(long n) {
    // x^n - 1 divided by Phi_d for every proper divisor d of n.
    std::vector<Integer> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (long d : divisors(n)) {
        if (d == n) continue;
        poly = poly_divide_exact(std::move(poly), cyclotomic_polynomial(d));
    }
    return poly;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(long n) {
    {
        std::lock_guard<std::mutex> lock(g_phi_mutex);
        auto it = g_phi_cache.find(n);
        if (it != g_phi_cache.end()) return it->second;
    }
    std::vector<Integer> value = compute_cyclotomic(n);
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    return g_phi_cache.emplace(n, std::move(value)).first->second;
}

// ---------------------------------------------------------------------------
// Cyclotomic

namespace {

// Reduce a dense coefficient vector (indexed by exponent, any length) modulo
// Phi_n; returns a vector of length phi(n).
std::vector<Rational> reduce_mod_phi(std::vector<Rational> dense, long n) {
    long deg = euler_phi(n);
    const auto& phi_poly = cyclotomic_polynomial(n);
    if ((long)dense.size() < deg) dense.resize(deg);
    for (long d = (long)dense.size() - 1; d >= deg; --d) {
        Rational c = dense[d];
        if (c == 0) continue;
        long shift = d - deg;
        for (long i = 0; i <= deg; ++i) {
            if (phi_poly[i] == 0) continue;
            dense[shift + i] -= c * Rational(phi_poly[i]);
        }
    }
    dense.resize(deg);
    return dense;
}

std::map<long, Rational> to_sparse(const std::vector<Rational>& dense) {
    std::map<long, Rational> out;
    for (long e = 0; e < (long)dense.size(); ++e)
        if (dense[e] != 0) out[e] = dense[e];
    return out;
}

// Solve A c = v exactly (A: rows x cols, column-major basis images).
// Returns true and fills c on success; false if inconsistent.
bool solve_linear(std::vector<std::vector<Rational>> cols,
                  std::vector<Rational> v, std::vector<Rational>& c) {
    size_t rows = v.size(), ncols = cols.size();
    // Build augmented row-major matrix.
    std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(ncols + 1));
    for (size_t r = 0; r < rows; ++r) {
        for (size_t j = 0; j < ncols; ++j) m[r][j] = cols[j][r];
        m[r][ncols] = v[r];
    }
    std::vector<long> pivot_col(rows, -1);
    size_t rank = 0;
    for (size_t j = 0; j < ncols && rank < rows; ++j) {
        size_t piv = rank;
        while (piv < rows && m[piv][j] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[rank], m[piv]);
        Rational inv = 1 / m[rank][j];
        for (size_t t = j; t <= ncols; ++t) m[rank][t] *= inv;
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][j] == 0) continue;
            Rational f = m[r][j];
            for (size_t t = j; t <= ncols; ++t) m[r][t] -= f * m[rank][t];
        }
        pivot_col[rank] = (long)j;
        ++rank;
    }
    for (size_t r = rank; r < rows; ++r)
        if (m[r][ncols] != 0) return false;
    c.assign(ncols, Rational(0));
    for (size_t r = 0; r < rank; ++r) c[pivot_col[r]] = m[r][ncols];
    return true;
}

}  // namespace

Cyclotomic::Cyclotomic(const Rational& r) : conductor_(1) {
    if (r != 0) coeffs_[0] = r;
}

Cyclotomic::Cyclotomic(long n, std::map<long, Rational> coeffs)
    : conductor_(n), coeffs_(std::move(coeffs)) {
    canonicalize();
}

Rational Cyclotomic::rational_value() const {
    if (conductor_ != 1) throw std::logic_error("value is not rational");
    auto it = coeffs_.find(0);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

void Cyclotomic::canonicalize() {
    if (conductor_ < 1) throw std::invalid_argument("conductor must be >= 1");
    // Fold exponents into [0, n) and reduce modulo Phi_n.
    std::vector<Rational> dense(conductor_);
    for (auto& [e, c] : coeffs_) {
        long ee = e % conductor_;
        if (ee < 0) ee += conductor_;
        dense[ee] += c;
    }
    coeffs_ = to_sparse(reduce_mod_phi(std::move(dense), conductor_));
    if (coeffs_.empty()) { conductor_ = 1; return; }

    // Minimize the conductor by stepwise Galois descent n -> n/p.
    bool descended = true;
    while (descended && conductor_ > 1) {
        descended = false;
        for (auto [p, e] : factorize(conductor_)) {
            (void)e;
            long n = conductor_, n2 = n / p;
            // Invariance under Gal(Q(zeta_n)/Q(zeta_n2)) = {sigma_j : j=1 mod n2}.
            bool invariant = true;
            for (long j = 1 + n2; j < n && invariant; j += n2) {
                if (std::gcd(j, n) != 1) continue;
                // Apply sigma_j without re-canonicalizing (stay at conductor n).
                std::vector<Rational> dense2(n);
                for (auto& [ee, c] : coeffs_) dense2[(ee * j) % n] += c;
                if (to_sparse(reduce_mod_phi(std::move(dense2), n)) != coeffs_)
                    invariant = false;
            }
            if (!invariant) continue;
            // Express in the zeta_{n2} power basis: zeta_{n2} = zeta_n^p.
            long deg = euler_phi(n), deg2 = euler_phi(n2);
            std::vector<std::vector<Rational>> basis_images;
            for (long i = 0; i < deg2; ++i) {
                std::vector<Rational> mono(n);
                mono[(i * p) % n] = 1;
                auto red = reduce_mod_phi(std::move(mono), n);
                red.resize(deg);
                basis_images.push_back(std::move(red));
            }
            std::vector<Rational> target(deg);
            for (auto& [ee, c] : coeffs_) target[ee] = c;
            std::vector<Rational> c2;
            if (!solve_linear(std::move(basis_images), std::move(target), c2))
                continue;  // invariant but not representable: cannot happen
            conductor_ = n2;
            coeffs_.clear();
            for (long i = 0; i < deg2; ++i)
                if (c2[i] != 0) coeffs_[i] = c2[i];
            if (coeffs_.empty()) { conductor_ = 1; return; }
            descended = true;
            break;
        }
    }
}

Cyclotomic root_of_unity(long n, long j) {
    if (n < 1) throw std::invalid_argument("conductor must be >= 1");
    j %= n;
    if (j < 0) j += n;
    long g = std::gcd(j, n);
    n /= g;
    j /= g;  // primitive n-th root now
    Cyclotomic out;
    out.conductor_ = n;
    out.coeffs_[j] = 1;
    out.canonicalize();
    return out;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
    long L = std::lcm(conductor_, o.conductor_);
    std::map<long, Rational> sum;
    for (auto& [e, c] : coeffs_) sum[e * (L / conductor_)] += c;
    for (auto& [e, c] : o.coeffs_) sum[e * (L / o.conductor_)] += c;
    return Cyclotomic(L, std::move(sum));
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic out = *this;
    for (auto& [e, c] : out.coeffs_) c = -c;
    return out;
}

Cyclotomic Cyclotomic::operator-(const Cyclotomic& o) const { return *this + (-o); }

Cyclotomic Cyclotomic::operator*(const Cyclotomic& o) const {
    long L = std::lcm(conductor_, o.conductor_);
    std::map<long, Rational> prod;
    for (auto& [e1, c1] : coeffs_)
        for (auto& [e2, c2] : o.coeffs_)
            prod[(e1 * (L / conductor_) + e2 * (L / o.conductor_)) % L] += c1 * c2;
    return Cyclotomic(L, std::move(prod));
}

Cyclotomic Cyclotomic::scaled(const Rational& r) const {
    if (r == 0) return Cyclotomic();
    Cyclotomic out = *this;
    for (auto& [e, c] : out.coeffs_) c *= r;
    return out;
}

Cyclotomic Cyclotomic::galois(long k) const {
    long n = conductor_;
    k %= n;
    if (k < 0) k += n;
    if (std::gcd(k, n) != 1)
        throw std::domain_error("galois exponent not coprime to conductor");
    std::map<long, Rational> out;
    for (auto& [e, c] : coeffs_) out[(e * k) % n] += c;
    return Cyclotomic(n, std::move(out));
}

Rational trace_to_Q(const Cyclotomic& a) {
    Rational t = 0;
    for (auto& [e, c] : a.coeffs()) t += c * Rational(trace_of_root(a.conductor(), e));
    return t;
}

std::complex<double> Cyclotomic::to_complex() const {
    std::complex<double> s = 0;
    const double tau = 6.283185307179586476925286766559;
    for (auto& [e, c] : coeffs_) {
        double arg = tau * (double)e / (double)conductor_;
        s += to_double(c) * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return s;
}

std::string Cyclotomic::str() const {
    if (is_zero()) return "0";
    if (is_rational()) return to_string(rational_value());
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        if (e == 0) { os << to_string(c); continue; }
        if (c != 1) os << "(" << to_string(c) << ")*";
        os << "z" << conductor_;
        if (e != 1) os << "^" << e;
    }
    return os.str();
}

}  // namespace helpkit
