#include "helpkit/solver.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace helpkit {

ReducedSystem merge_variables(const ConstraintSystem& sys) {
    // Column signature of each variable across all forms.
    auto column = [&](const std::string& var) {
        std::ostringstream os;
        for (const auto& row : sys.rows) {
            auto it = row.form.coeffs.find(var);
            os << (it == row.form.coeffs.end() ? "0" : to_string(it->second)) << "|";
        }
        return os.str();
    };
    std::map<std::string, size_t> group_of_key;
    ReducedSystem out;
    std::vector<std::string> keys;
    for (const auto& var : sys.variables) {
        std::string key = column(var);
        auto it = group_of_key.find(key);
        if (it == group_of_key.end()) {
            group_of_key[key] = out.groups.size();
            out.groups.push_back({var});
            keys.push_back(key);
        } else {
            out.groups[it->second].push_back(var);
        }
    }
    out.sys.k = sys.k;
    std::map<std::string, std::string> agg_of_var;
    for (const auto& g : out.groups) {
        std::string name = g[0];
        for (size_t i = 1; i < g.size(); ++i) name += "+" + g[i];
        out.sys.variables.push_back(name);
        for (const auto& v : g) agg_of_var[v] = name;
    }
    for (const auto& row : sys.rows) {
        ConstraintRow r;
        r.upper_bound = row.upper_bound;
        r.label = row.label;
        r.form.divisor_k = row.form.divisor_k;
        r.form.constant = row.form.constant;
        for (size_t gi = 0; gi < out.groups.size(); ++gi) {
            auto it = row.form.coeffs.find(out.groups[gi][0]);
            if (it != row.form.coeffs.end() && it->second != 0)
                r.form.coeffs[out.sys.variables[gi]] = it->second;
        }
        out.sys.rows.push_back(std::move(r));
    }
    return out;
}

namespace {

// Integer inequality a . x <= rhs, kept gcd-reduced so that proportional
// inequalities share one canonical representative (cheap exact dedup) and
// Fourier-Motzkin combinations stay small.
struct Ineq {
    std::vector<Integer> a;
    Integer rhs;
    bool operator<(const Ineq& o) const {
        return rhs != o.rhs ? rhs < o.rhs : a < o.a;
    }
};

void gcd_reduce(Ineq& q) {
    Integer g = abs(q.rhs);
    for (const auto& c : q.a) {
        g = gcd(g, c);
        if (g == 1) return;
    }
    if (g <= 1) return;
    for (auto& c : q.a) c /= g;
    q.rhs /= g;
}

std::vector<Ineq> system_inequalities(const ConstraintSystem& sys) {
    size_t n = sys.variables.size();
    std::map<std::string, size_t> idx;
    for (size_t i = 0; i < n; ++i) idx[sys.variables[i]] = i;
    std::vector<Ineq> rows;
    for (const auto& row : sys.rows) {
        // Clear denominators: the mu-numerator s = const + sum coeff x obeys
        // 0 <= s <= k * deg after scaling by L = lcm of the denominators.
        Integer L = denom(row.form.constant);
        for (auto& [c, coeff] : row.form.coeffs)
            L = L * denom(coeff) / gcd(L, denom(coeff));
        Ineq lo, hi;
        lo.a.assign(n, 0);
        hi.a.assign(n, 0);
        for (auto& [c, coeff] : row.form.coeffs) {
            Integer ai = numer(coeff * Rational(L));
            lo.a[idx.at(c)] = -ai;
            hi.a[idx.at(c)] = ai;
        }
        Integer C = numer(row.form.constant * Rational(L));
        lo.rhs = C;  // -sum a x <= const   (mu >= 0)
        hi.rhs = Integer(row.form.divisor_k) * L * row.upper_bound - C;
        gcd_reduce(lo);
        gcd_reduce(hi);
        rows.push_back(std::move(lo));
        rows.push_back(std::move(hi));
    }
    Ineq up, dn;  // sum x <= 1 and -sum x <= -1
    up.a.assign(n, 1);
    up.rhs = 1;
    dn.a.assign(n, -1);
    dn.rhs = -1;
    rows.push_back(up);
    rows.push_back(dn);
    return rows;
}

}  // namespace

Box derive_box(const ConstraintSystem& sys, long max_rows) {
    Box box;
    size_t n = sys.variables.size();
    if (n == 0) return box;
    std::vector<Ineq> base = system_inequalities(sys);

    for (size_t target = 0; target < n; ++target) {
        std::vector<Ineq> rows = base;
        bool capped = false;
        for (size_t j = 0; j < n && !capped; ++j) {
            if (j == target) continue;
            std::vector<Ineq> pos, neg, zero;
            for (auto& q : rows) {
                if (q.a[j] > 0) pos.push_back(std::move(q));
                else if (q.a[j] < 0) neg.push_back(std::move(q));
                else zero.push_back(std::move(q));
            }
            if (pos.size() * neg.size() + zero.size() > (size_t)max_rows) {
                capped = true;
                break;
            }
            std::set<Ineq> seen;
            std::vector<Ineq> next;
            for (auto& q : zero) {
                if (seen.insert(q).second) next.push_back(std::move(q));
            }
            for (const auto& P : pos) {
                for (const auto& N : neg) {
                    Ineq c;
                    c.a.assign(n, 0);
                    Integer wp = -N.a[j], wn = P.a[j];  // both positive
                    for (size_t t = 0; t < n; ++t)
                        c.a[t] = wp * P.a[t] + wn * N.a[t];
                    c.rhs = wp * P.rhs + wn * N.rhs;
                    gcd_reduce(c);
                    if (seen.insert(c).second) next.push_back(std::move(c));
                }
            }
            rows = std::move(next);
        }

        std::optional<Rational> lb, ub;
        if (capped) {
            // Fallback: only rows that involve the target variable alone.
            for (const auto& q : base) {
                bool single = q.a[target] != 0;
                for (size_t t = 0; t < n && single; ++t)
                    if (t != target && q.a[t] != 0) single = false;
                if (!single) continue;
                Rational b{q.rhs, q.a[target]};
                b.canonicalize();
                if (q.a[target] > 0) { if (!ub || b < *ub) ub = b; }
                else { if (!lb || b > *lb) lb = b; }
            }
        } else {
            for (const auto& q : rows) {
                if (q.a[target] != 0) {
                    Rational b{q.rhs, q.a[target]};
                    b.canonicalize();
                    if (q.a[target] > 0) {
                        if (!ub || b < *ub) ub = b;
                    } else {
                        if (!lb || b > *lb) lb = b;
                    }
                } else if (q.rhs < 0) {
                    box.infeasible = true;  // 0 <= negative: contradiction
                }
            }
        }
        if (!lb || !ub) throw UnboundedError(sys.variables[target]);
        Integer lo = rational_ceil(*lb), hi = rational_floor(*ub);
        if (lo > hi) box.infeasible = true;
        box.ranges[sys.variables[target]] = {lo, hi};
    }
    return box;
}

namespace {

// One constraint scaled to integers: mu = (C + sum A x) / M must be an
// integer in [0, deg], i.e. M | s and 0 <= s <= M * deg for s = C + sum A x.
struct ScaledRow {
    Integer C;
    std::vector<Integer> A;
    Integer M;
    Integer smax;  // M * deg
};

std::vector<ScaledRow> scale_rows(const ConstraintSystem& sys) {
    size_t n = sys.variables.size();
    std::map<std::string, size_t> idx;
    for (size_t i = 0; i < n; ++i) idx[sys.variables[i]] = i;
    std::vector<ScaledRow> out;
    for (const auto& row : sys.rows) {
        Integer L = denom(row.form.constant);
        for (auto& [c, coeff] : row.form.coeffs)
            L = L * denom(coeff) / gcd(L, denom(coeff));
        ScaledRow r;
        r.A.assign(n, 0);
        r.C = numer(row.form.constant * Rational(L));
        for (auto& [c, coeff] : row.form.coeffs)
            r.A[idx.at(c)] = numer(coeff * Rational(L));
        r.M = Integer(row.form.divisor_k) * L;
        r.smax = r.M * row.upper_bound;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<AugTuple> enumerate_tuples(const ConstraintSystem& sys, const Box& box) {
    std::vector<AugTuple> result;
    if (box.infeasible) return result;
    size_t n = sys.variables.size();
    if (n == 0) return result;
    std::vector<std::pair<Integer, Integer>> range;
    for (const auto& v : sys.variables) range.push_back(box.ranges.at(v));
    std::vector<ScaledRow> rows = scale_rows(sys);

    std::vector<Integer> x(n);
    auto accept = [&](const std::vector<Integer>& xs) {
        Integer total = 0;
        for (const auto& v : xs) total += v;
        if (total != 1) return false;
        for (const auto& r : rows) {
            Integer s = r.C;
            for (size_t i = 0; i < n; ++i) s += r.A[i] * xs[i];
            if (s < 0 || s > r.smax || s % r.M != 0) return false;
        }
        return true;
    };
    auto emit = [&](const std::vector<Integer>& xs) {
        AugTuple t;
        t.order = sys.k;
        for (size_t i = 0; i < n; ++i)
            if (xs[i] != 0) t.entries[sys.variables[i]] = (long)xs[i].get_si();
        result.push_back(std::move(t));
    };

    if (n == 1) {
        // Normalization forces x = 1 when it lies inside the box.
        x[0] = 1;
        if (range[0].first <= 1 && 1 <= range[0].second && accept(x)) emit(x);
        return result;
    }

    // Free loops over x_0..x_{n-2}; x_{n-1} = 1 - sum is forced. The innermost
    // free variable is stepped through a congruence of one constraint row
    // (integrality sieve) instead of scanned exhaustively.
    size_t inner = n - 2;
    const ScaledRow* sieve = nullptr;
    Integer sa;  // effective inner coefficient after the substitution
    for (const auto& r : rows) {
        Integer a = r.A[inner] - r.A[n - 1];
        if (a % r.M != 0) { sieve = &r; sa = a; break; }
    }

    std::function<void(size_t, Integer)> walk = [&](size_t depth, Integer partial_sum) {
        if (depth == inner) {
            auto try_inner = [&](const Integer& v) {
                x[inner] = v;
                x[n - 1] = 1 - partial_sum - v;
                if (x[n - 1] < range[n - 1].first || x[n - 1] > range[n - 1].second)
                    return;
                if (accept(x)) emit(x);
            };
            const Integer &lo = range[inner].first, &hi = range[inner].second;
            if (!sieve) {
                for (Integer v = lo; v <= hi; ++v) try_inner(v);
                return;
            }
            // Solve C' + sa * v == 0 (mod M), where C' fixes the outer vars
            // and substitutes x_{n-1} = 1 - partial_sum - v.
            Integer rest = sieve->C + sieve->A[n - 1] * (1 - partial_sum);
            for (size_t i = 0; i < inner; ++i) rest += sieve->A[i] * x[i];
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                       sa.get_mpz_t(), sieve->M.get_mpz_t());
            if (rest % g != 0) return;  // congruence unsolvable: no points
            Integer step = sieve->M / g;
            Integer v0 = (-rest / g * s) % step;
            // First candidate >= lo.
            Integer start = v0 + step * ((lo - v0 + step - 1) / step);
            while (start - step >= lo) start -= step;
            while (start < lo) start += step;
            for (Integer v = start; v <= hi; v += step) try_inner(v);
            return;
        }
        for (Integer v = range[depth].first; v <= range[depth].second; ++v) {
            x[depth] = v;
            walk(depth + 1, partial_sum + v);
        }
    };
    walk(0, 0);
    std::sort(result.begin(), result.end());
    return result;
}

VerifyResult verify(const ConstraintSystem& sys, const AugTuple& tuple) {
    VerifyResult out;
    long total = 0;
    for (auto& [c, v] : tuple.entries) {
        if (std::find(sys.variables.begin(), sys.variables.end(), c) ==
            sys.variables.end() && v != 0) {
            out.ok = false;
            out.violation = "unknown variable " + c;
            return out;
        }
        total += v;
    }
    if (total != 1) {
        out.ok = false;
        out.violation = "normalization: sum(nu) = " + std::to_string(total) +
                        " != 1";
        return out;
    }
    for (const auto& row : sys.rows) {
        Rational v = row.form.eval(tuple);
        out.mu_values.push_back({row.label.str(), v});
        if (!is_integer(v) || v < 0 || v > row.upper_bound) {
            out.ok = false;
            out.violation = row.label.str() + " = " + to_string(v) +
                            " is not an integer in [0, " +
                            std::to_string(row.upper_bound) + "]";
            return out;
        }
    }
    return out;
}

FeasibleSet solve_system(const ConstraintSystem& sys, const Tower& tower) {
    ReducedSystem red = merge_variables(sys);
    Box box = derive_box(red.sys);
    FeasibleSet fs;
    fs.k = sys.k;
    fs.tower = tower;
    fs.variables = red.sys.variables;
    fs.groups = red.groups;
    fs.tuples = enumerate_tuples(red.sys, box);
    return fs;
}

}  // namespace helpkit
