#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpkit/tables.hpp"

using namespace helpkit;

namespace {

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("A5 fixture parses, validates and is orthogonal") {
    CharacterTable t = load_table(fixture("A5.ctbl"));
    CHECK(t.group_name == "A5");
    CHECK_FALSE(t.partial);
    CHECK(t.classes.size() == 5);
    CHECK(t.ordinary.size() == 5);
    CHECK(t.exponent == 30);
    CHECK_NOTHROW(validate_full(t));
    // Power maps: 5a^2 = 5b, 5a^4 = 5a.
    CHECK(t.power_class("5a", 2) == "5b");
    CHECK(t.power_class("5a", 4) == "5a");
    CHECK(t.power_class("5a", 5) == "1a");
    // Prime graph of A5 has no edges (no elements of order 6, 10, 15).
    PrimeGraph g = t.prime_graph();
    CHECK(g.vertices == std::set<long>{2, 3, 5});
    CHECK(g.edges.empty());
}

TEST_CASE("He and ON fixtures parse with Brauer data") {
    CharacterTable he = load_table(fixture("He.ctbl"));
    CHECK(he.partial);
    CHECK(he.classes.size() == 33);
    CHECK(he.brauer.count(2) == 1);
    CHECK(he.brauer.count(3) == 1);
    // Brauer alignment: chi4@2 on a 2-regular class, undefined on 2a.
    const Character* chi4 = he.find_character(2, "chi4");
    REQUIRE(chi4);
    auto v3a = he.value(*chi4, 2, "3a");
    REQUIRE(v3a.has_value());
    CHECK(v3a->rational_value() == Rational(-7));
    CHECK_FALSE(he.value(*chi4, 2, "2a").has_value());

    CharacterTable on = load_table(fixture("ON.ctbl"));
    CHECK(on.classes.size() == 30);
    CHECK(on.exponent == 10884720);
    CHECK(on.element_orders().count(57) == 0);
    CHECK(on.power_class("19a", 2) == "19b");
    CHECK(on.power_class("19a", 4) == "19c");
    CHECK(on.power_class("19a", 8) == "19a");
}

TEST_CASE("parse/serialize round-trip is stable on every fixture") {
    for (const char* name : {"A5.ctbl", "He.ctbl", "ON.ctbl"}) {
        CAPTURE(name);
        CharacterTable t = load_table(fixture(name));
        std::string once = serialize_table(t);
        CharacterTable t2 = parse_table(once);
        std::string twice = serialize_table(t2);
        CHECK(once == twice);
        CHECK(t2.group_name == t.group_name);
        CHECK(t2.classes.size() == t.classes.size());
        CHECK(t2.ordinary.size() == t.ordinary.size());
        // Values survive the round trip exactly.
        for (size_t ci = 0; ci < t.ordinary.size(); ++ci)
            for (size_t i = 0; i < t.classes.size(); ++i) {
                REQUIRE(t.ordinary[ci].values.size() == t.classes.size());
                CHECK(t.ordinary[ci].values[i] == t2.ordinary[ci].values[i]);
            }
    }
}

TEST_CASE("comment stripping and error cases") {
    std::string a5 = read_file(fixture("A5.ctbl"));

    SUBCASE("truncated file") {
        CHECK_THROWS_AS(parse_table(a5.substr(0, a5.size() / 2)), parse_error);
    }
    SUBCASE("misaligned character row") {
        std::string bad = a5;
        const std::string full = "[\"1\", \"1\", \"1\", \"1\", \"1\"]";
        auto pos = bad.find(full);
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, full.size(), "[\"1\", \"1\", \"1\", \"1\"]");
        CHECK_THROWS_AS(parse_table(bad), parse_error);
    }
    SUBCASE("unknown power-map class") {
        std::string bad = a5;
        auto pos = bad.find("\"2\": \"1a\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 9, "\"2\": \"9z\"");
        CHECK_THROWS_AS(parse_table(bad), table_error);
    }
    SUBCASE("duplicate class name") {
        std::string bad = a5;
        auto pos = bad.find("\"name\": \"2a\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 12, "\"name\": \"1a\"");
        CHECK_THROWS_AS(parse_table(bad), table_error);
    }
    SUBCASE("orthogonality failure after corrupting one value") {
        // chi2(2a) = -1 in the pristine table; 2 breaks column orthogonality.
        std::string bad = a5;
        const std::string row = "[\"3\", \"-1\", \"0\",";
        auto pos = bad.find(row);
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, row.size(), "[\"3\", \"2\", \"0\",");
        CharacterTable t = parse_table(bad);
        CHECK_THROWS_AS(validate_full(t), table_error);
    }
}

TEST_CASE("value lookup honors unknown entries") {
    CharacterTable he = load_table(fixture("He.ctbl"));
    const Character* chi2 = he.find_character(0, "chi2");
    REQUIRE(chi2);
    CHECK(he.value(*chi2, 0, "2a")->rational_value() == Rational(11));
    CHECK_FALSE(he.value(*chi2, 0, "4a").has_value());  // stored as "?"
    // chi7 on 17a is irrational with conductor 17.
    const Character* chi7 = he.find_character(0, "chi7");
    auto v = he.value(*chi7, 0, "17a");
    REQUIRE(v.has_value());
    CHECK(v->conductor() == 17);
}
