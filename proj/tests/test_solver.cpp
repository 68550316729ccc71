#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpkit/solver.hpp"

using namespace helpkit;

namespace {

std::mt19937 rng(493827);

ConstraintRow make_row(const std::vector<std::string>& vars,
                       const std::vector<long>& coeffs, long constant,
                       long divisor, long upper) {
    ConstraintRow row;
    row.form.constant = constant;
    row.form.divisor_k = divisor;
    for (size_t i = 0; i < vars.size(); ++i)
        if (coeffs[i] != 0) row.form.coeffs[vars[i]] = coeffs[i];
    row.upper_bound = upper;
    row.label.chi = CharRef{0, "t"};
    return row;
}

ConstraintSystem random_system(int nvar) {
    std::uniform_int_distribution<long> coeff_d(-4, 4);
    std::uniform_int_distribution<long> const_d(0, 30);
    std::uniform_int_distribution<long> div_d(1, 3);
    std::uniform_int_distribution<long> ub_d(5, 40);
    std::uniform_int_distribution<int> nrow_d(3, 6);

    ConstraintSystem sys;
    sys.k = 6;
    for (int i = 0; i < nvar; ++i) sys.variables.push_back("v" + std::to_string(i));
    int nrows = nrow_d(rng);
    for (int r = 0; r < nrows; ++r) {
        std::vector<long> c(nvar);
        for (auto& x : c) x = coeff_d(rng);
        ConstraintRow row = make_row(sys.variables, c, const_d(rng), div_d(rng),
                                     ub_d(rng));
        row.label.l = r;
        sys.rows.push_back(row);
    }
    return sys;
}

bool row_accepts(const ConstraintRow& row, const AugTuple& t) {
    Rational v = row.form.eval(t);
    return is_integer(v) && v >= 0 && v <= row.upper_bound;
}

// All sum-1 integer points of [lo, hi]^n satisfying every row.
std::vector<AugTuple> brute_force(const ConstraintSystem& sys, long lo, long hi) {
    std::vector<AugTuple> out;
    size_t n = sys.variables.size();
    std::vector<long> point(n, lo);
    while (true) {
        long sum = 0;
        for (long x : point) sum += x;
        if (sum == 1) {
            AugTuple t;
            t.order = sys.k;
            for (size_t i = 0; i < n; ++i)
                if (point[i] != 0) t.entries[sys.variables[i]] = point[i];
            bool ok = true;
            for (const auto& row : sys.rows)
                if (!row_accepts(row, t)) { ok = false; break; }
            if (ok) out.push_back(t);
        }
        size_t i = 0;
        while (i < n && point[i] == hi) point[i++] = lo;
        if (i == n) break;
        ++point[i];
    }
    return out;
}

std::set<std::map<std::string, long>> key_set(const std::vector<AugTuple>& ts) {
    std::set<std::map<std::string, long>> s;
    for (const auto& t : ts) s.insert(t.entries);
    return s;
}

bool inside(const AugTuple& t, long lo, long hi) {
    return std::all_of(t.entries.begin(), t.entries.end(), [&](const auto& e) {
        return e.second >= lo && e.second <= hi;
    });
}

}  // namespace

TEST_CASE("solver agrees with brute force on 200 random small systems") {
    const long LO = -25, HI = 25;
    int bounded = 0;
    for (int trial = 0; trial < 200; ++trial) {
        CAPTURE(trial);
        int nvar = 1 + trial % 3;
        ConstraintSystem sys = random_system(nvar);
        std::vector<AugTuple> solved;
        try {
            ReducedSystem red = merge_variables(sys);
            // Skip the rare case of merged columns: brute force over the
            // original variables cannot be compared coordinate-wise.
            if (red.groups.size() != sys.variables.size()) continue;
            Box box = derive_box(red.sys);
            if (!box.infeasible) solved = enumerate_tuples(red.sys, box);
        } catch (const UnboundedError&) {
            continue;  // nothing to compare; counted below via `bounded`
        }
        ++bounded;
        // Every solver tuple must satisfy the raw constraints...
        for (const auto& t : solved)
            for (const auto& row : sys.rows) CHECK(row_accepts(row, t));
        // ...and inside the window the two solution sets must coincide.
        std::vector<AugTuple> windowed;
        for (const auto& t : solved)
            if (inside(t, LO, HI)) windowed.push_back(t);
        auto expect = key_set(brute_force(sys, LO, HI));
        auto got = key_set(windowed);
        CHECK(expect == got);
    }
    // The generator must actually exercise the solver.
    CHECK(bounded >= 60);
}

TEST_CASE("merge_variables groups identical coefficient columns") {
    std::vector<std::string> vars{"a", "b", "c"};
    ConstraintSystem sys;
    sys.k = 4;
    sys.variables = vars;
    // b and c share every column; a differs.
    sys.rows.push_back(make_row(vars, {3, 1, 1}, 7, 2, 10));
    sys.rows.push_back(make_row(vars, {-3, -1, -1}, 9, 2, 10));
    ReducedSystem red = merge_variables(sys);
    REQUIRE(red.sys.variables.size() == 2);
    CHECK(red.sys.variables[1] == "b+c");
    CHECK(red.groups[1] == std::vector<std::string>{"b", "c"});
    // Solutions over the aggregate match brute force over the original with
    // the aggregate value equal to the group sum.
    Box box = derive_box(red.sys);
    auto agg = enumerate_tuples(red.sys, box);
    std::set<std::pair<long, long>> agg_pairs;
    for (const auto& t : agg) agg_pairs.insert({t.get("a"), t.get("b+c")});
    std::set<std::pair<long, long>> brute_pairs;
    for (const auto& t : brute_force(sys, -15, 15))
        brute_pairs.insert({t.get("a"), t.get("b") + t.get("c")});
    CHECK(agg_pairs == brute_pairs);
}

TEST_CASE("adding constraints can only shrink the feasible set") {
    std::vector<std::string> vars{"x", "y"};
    ConstraintSystem sys;
    sys.k = 6;
    sys.variables = vars;
    sys.rows.push_back(make_row(vars, {5, 1}, 10, 1, 12));
    sys.rows.push_back(make_row(vars, {-5, -1}, 8, 1, 12));
    Box box = derive_box(sys);
    auto before = key_set(enumerate_tuples(sys, box));
    CHECK(!before.empty());
    sys.rows.push_back(make_row(vars, {2, -1}, 1, 3, 4));
    Box box2 = derive_box(sys);
    auto after = key_set(enumerate_tuples(sys, box2));
    for (const auto& t : after) CHECK(before.count(t) == 1);
    CHECK(after.size() <= before.size());
}

TEST_CASE("verify accepts enumerated tuples and rejects others") {
    std::vector<std::string> vars{"x", "y"};
    ConstraintSystem sys;
    sys.k = 6;
    sys.variables = vars;
    sys.rows.push_back(make_row(vars, {5, 1}, 10, 1, 12));
    sys.rows.push_back(make_row(vars, {-5, -1}, 8, 1, 12));
    Box box = derive_box(sys);
    auto sols = enumerate_tuples(sys, box);
    REQUIRE(!sols.empty());
    auto keys = key_set(sols);
    for (const auto& t : sols) {
        VerifyResult r = verify(sys, t);
        CHECK(r.ok);
        CHECK(r.violation.empty());
        CHECK(r.mu_values.size() == sys.rows.size());
        for (auto& [label, v] : r.mu_values) CHECK(is_integer(v));
    }
    // Every sum-1 point in a window around the box that is not enumerated
    // must fail verification.
    int rejected = 0;
    for (long x = -8; x <= 8; ++x) {
        long y = 1 - x;
        AugTuple t;
        t.order = 6;
        if (x != 0) t.entries["x"] = x;
        if (y != 0) t.entries["y"] = y;
        if (keys.count(t.entries)) continue;
        VerifyResult r = verify(sys, t);
        CHECK_FALSE(r.ok);
        CHECK_FALSE(r.violation.empty());
        ++rejected;
    }
    CHECK(rejected > 0);
}

TEST_CASE("an unconstrained direction raises UnboundedError") {
    std::vector<std::string> vars{"a", "b", "c", "d"};
    ConstraintSystem sys;
    sys.k = 12;
    sys.variables = vars;
    // One row cannot pin four variables: (a, b) = (2t, -t) keeps the form
    // constant while sum(nu) = 1 is restored through c.
    sys.rows.push_back(make_row(vars, {1, 2, 0, 0}, 5, 2, 9));
    ReducedSystem red = merge_variables(sys);
    CHECK_THROWS_AS(derive_box(red.sys), UnboundedError);
}

TEST_CASE("infeasible systems are reported before enumeration") {
    std::vector<std::string> vars{"x"};
    ConstraintSystem sys;
    sys.k = 2;
    sys.variables = vars;
    // x >= 3 from the first row, x <= 1 from the second.
    sys.rows.push_back(make_row(vars, {1}, -3, 1, 100));
    sys.rows.push_back(make_row(vars, {-1}, 1, 1, 100));
    Box box = derive_box(sys);
    if (!box.infeasible) {
        CHECK(enumerate_tuples(sys, box).empty());
    }
}
