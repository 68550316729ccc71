#include <doctest.h>

#include "helpkit/constraints.hpp"

using namespace helpkit;

namespace {

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

const CharacterTable& he_table() {
    static CharacterTable t = load_table(fixture("He.ctbl"));
    return t;
}

const CharacterTable& on_table() {
    static CharacterTable t = load_table(fixture("ON.ctbl"));
    return t;
}

}  // namespace

TEST_CASE("admissible classes follow divisor structure") {
    const auto& he = he_table();
    CHECK(admissible_classes(he, 2) == std::vector<std::string>{"2a", "2b"});
    CHECK(admissible_classes(he, 6) ==
          std::vector<std::string>{"2a", "2b", "3a", "3b", "6a", "6b"});
    CHECK(admissible_classes(he, 35) ==
          std::vector<std::string>{"5a", "7a", "7b", "7c", "7d", "7e"});
}

TEST_CASE("mu form: He order 2 with chi2 reproduces the textbook system") {
    const auto& he = he_table();
    const Character* chi2 = he.find_character(0, "chi2");
    REQUIRE(chi2);
    Tower tw{2, {}};
    auto f0 = mu_form(he, 2, *chi2, 0, tw, 0);
    REQUIRE(f0.has_value());
    // mu_0 = (51 + 11 nu_2a + 3 nu_2b) / 2
    CHECK(f0->constant == Rational(51));
    CHECK(f0->divisor_k == 2);
    CHECK(f0->coeffs.at("2a") == Rational(11));
    CHECK(f0->coeffs.at("2b") == Rational(3));
    auto f1 = mu_form(he, 2, *chi2, 0, tw, 1);
    REQUIRE(f1.has_value());
    CHECK(f1->coeffs.at("2a") == Rational(-11));
    CHECK(f1->coeffs.at("2b") == Rational(-3));
}

TEST_CASE("sum over l of mu_l equals the degree on every generated system") {
    for (const char* name : {"A5.ctbl", "He.ctbl", "ON.ctbl"}) {
        CAPTURE(name);
        CharacterTable t = load_table(fixture(name));
        for (const auto& c : t.classes) {
            long k = c.element_order;
            if (k < 2) continue;
            Tower tw = trivial_tower(t, c.name);
            auto check_char = [&](const Character& ch, long p) {
                if (p > 0 && k % p == 0) return;
                Rational const_sum = 0;
                std::map<std::string, Rational> coeff_sum;
                for (long l = 0; l < k; ++l) {
                    auto f = mu_form(t, k, ch, p, tw, l);
                    if (!f) return;  // domain gap: nothing to check
                    const_sum += f->constant;
                    for (auto& [cls, a] : f->coeffs) coeff_sum[cls] += a;
                }
                // sum_l mu_l = deg for any normalized tuple: the nu
                // coefficients cancel and the constants add to k * deg.
                CHECK(const_sum == Rational(ch.degree) * Rational(k));
                for (auto& [cls, a] : coeff_sum) {
                    CAPTURE(cls);
                    CHECK(a == 0);
                }
            };
            for (const auto& ch : t.ordinary) check_char(ch, 0);
            for (const auto& [p, bt] : t.brauer)
                for (const auto& ch : bt.characters) check_char(ch, p);
        }
    }
}

TEST_CASE("pq rows match the direct mu forms (He order 35)") {
    const auto& he = he_table();
    const Character* xi = he.find_character(2, "sum1+2+3+6+8");
    REQUIRE(xi);
    Tower tw{35, {}};
    tw.tuples[5] = trivial_tuple(he, "5a");
    tw.tuples[7] = trivial_tuple(he, "7a");
    for (long l : {0L, 7L, 12L}) {
        PqRow row = pq_table_row(he, 35, *xi, 2, l);
        auto f = mu_form(he, 35, *xi, 2, tw, l);
        REQUIRE(f.has_value());
        CHECK(row.m1 == f->constant);
        Rational mp = f->coeffs.count("5a") ? f->coeffs.at("5a") : Rational(0);
        CHECK(row.mp == mp);
        for (const char* seven : {"7a", "7b", "7c", "7d", "7e"}) {
            Rational c = f->coeffs.count(seven) ? f->coeffs.at(seven) : Rational(0);
            CHECK(row.mq == c);
        }
    }
    // Frozen paper values.
    PqRow r0 = pq_table_row(he, 35, *xi, 2, 0);
    CHECK(r0.m1 == Rational(1045));
    CHECK(r0.mp == Rational(96));
    CHECK(r0.mq == Rational(0));
}

TEST_CASE("pq row preconditions") {
    const auto& he = he_table();
    const Character* chi2 = he.find_character(0, "chi2");
    REQUIRE(chi2);
    // 21 is an element order of He: the aggregated row does not apply.
    CHECK_THROWS_AS(pq_table_row(he, 21, *chi2, 0, 0), std::invalid_argument);
    // 30 = 2*3*5 is not a product of two primes.
    CHECK_THROWS_AS(pq_table_row(he, 30, *chi2, 0, 0), std::invalid_argument);
    // chi2 lacks rational values on the order-7 classes.
    CHECK_THROWS_AS(pq_table_row(he, 35, *chi2, 0, 0), table_error);
}

TEST_CASE("build_system skips characters with domain gaps and dedups rows") {
    const auto& he = he_table();
    Tower tw{2, {}};
    // chi7 knows nothing about the order-2 classes: only chi1/chi2 rows stay.
    ConstraintSystem sys = build_system(
        he, 2, tw, {{0, "chi1"}, {0, "chi2"}, {0, "chi7"}});
    CHECK(sys.variables == std::vector<std::string>{"2a", "2b"});
    for (const auto& row : sys.rows) CHECK(row.label.chi.id != "chi7");
    // chi1 gives one distinct row (l = 0 and l = 1 coincide after dedup
    // only if equal; with k = 2 they differ in sign), chi2 two rows.
    CHECK(sys.rows.size() == 4);
    // SystemBuilder produces identical systems.
    SystemBuilder builder(he, 2, {{0, "chi1"}, {0, "chi2"}, {0, "chi7"}});
    ConstraintSystem sys2 = builder.build(tw);
    REQUIRE(sys2.rows.size() == sys.rows.size());
    for (size_t i = 0; i < sys.rows.size(); ++i) {
        CHECK(sys2.rows[i].form.constant == sys.rows[i].form.constant);
        CHECK(sys2.rows[i].form.coeffs == sys.rows[i].form.coeffs);
    }
}

TEST_CASE("trivial towers follow the power maps") {
    const auto& he = he_table();
    Tower t35 = trivial_tower(he, "21a");
    CHECK(t35.order == 21);
    CHECK(t35.tuples.at(3).entries == std::map<std::string, long>{{"3a", 1}});
    CHECK(t35.tuples.at(7).entries == std::map<std::string, long>{{"7a", 1}});
    const auto& on = on_table();
    Tower t28 = trivial_tower(on, "28a");
    CHECK(t28.tuples.at(14).entries == std::map<std::string, long>{{"14a", 1}});
    CHECK(t28.tuples.at(7).entries == std::map<std::string, long>{{"7a", 1}});
    CHECK(t28.tuples.at(4).entries == std::map<std::string, long>{{"4a", 1}});
    CHECK(t28.tuples.at(2).entries == std::map<std::string, long>{{"2a", 1}});
}

TEST_CASE("Proposition-1 screen drops exactly the corrupt He character") {
    const auto& he = he_table();
    auto warnings = consistency_warnings(he);
    // The degree-5292 printed sum is inconsistent at orders 3 and 17 only.
    REQUIRE(warnings.size() == 2);
    for (const auto& w : warnings) {
        CHECK(w.find("sum24+28+33") != std::string::npos);
    }
    CHECK(warnings[0].find("order 3") != std::string::npos);
    CHECK(warnings[1].find("order 17") != std::string::npos);
    // The other fixtures are clean.
    CHECK(consistency_warnings(on_table()).empty());
    CHECK(consistency_warnings(load_table(fixture("A5.ctbl"))).empty());
}

TEST_CASE("screen keeps the corrupt character where no genuine element exists") {
    const auto& he = he_table();
    std::vector<std::string> w;
    auto kept = screen_selection(he, 51, {{0, "sum24+28+33"}}, &w);
    CHECK(kept.size() == 1);  // no elements of order 51: nothing to screen
    CHECK(w.empty());
    auto dropped = screen_selection(he, 3, {{0, "sum24+28+33"}}, &w);
    CHECK(dropped.empty());
    CHECK(w.size() == 1);
}
