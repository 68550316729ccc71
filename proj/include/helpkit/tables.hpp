#pragma once
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "helpkit/cyclo.hpp"

namespace helpkit {

struct ConjugacyClass {
    std::string name;       // order-then-letter label, e.g. "2a", "17b"
    long element_order = 1;
    std::optional<long> size;          // may be absent in partial fixtures
    std::map<long, std::string> power_map;  // prime -> class of g^p
};

// A character row. Partial fixtures may know a character only on some
// classes; unknown values are stored as nullopt ("?" in the file).
struct Character {
    std::string id;
    long degree = 0;
    std::vector<std::optional<Cyclotomic>> values;  // aligned with class list

    bool defined_on(size_t class_index) const {
        return class_index < values.size() && values[class_index].has_value();
    }
};

struct BrauerTable {
    long prime = 0;
    std::vector<std::string> regular_classes;  // p-regular classes, in order
    std::vector<Character> characters;         // values aligned with regular_classes
};

struct PrimeGraph {
    std::set<long> vertices;
    std::set<std::pair<long, long>> edges;  // ordered pairs p < q

    bool has_edge(long p, long q) const {
        if (p > q) std::swap(p, q);
        return edges.count({p, q}) > 0;
    }
};

class CharacterTable {
public:
    std::string group_name;
    std::map<long, int> order_factorization;
    long exponent = 1;
    bool partial = false;
    std::vector<ConjugacyClass> classes;
    std::vector<Character> ordinary;
    std::map<long, BrauerTable> brauer;

    long group_order_valuation(long p) const {
        auto it = order_factorization.find(p);
        return it == order_factorization.end() ? 0 : it->second;
    }

    // Index of a class by name; throws on unknown name.
    size_t class_index(const std::string& name) const;
    bool has_class(const std::string& name) const;
    const ConjugacyClass& cls(const std::string& name) const {
        return classes[class_index(name)];
    }

    // Class of g^m for g in the given class, via chained prime power maps.
    std::string power_class(const std::string& class_name, long m) const;

    std::set<long> element_orders() const;
    PrimeGraph prime_graph() const;

    // Look up a character's value on a class, honoring Brauer alignment.
    // p == 0 means ordinary. Returns nullopt when the value is unknown or the
    // class is not p-regular.
    std::optional<Cyclotomic> value(const Character& ch, long p,
                                    const std::string& class_name) const;

    // Characters of the ordinary table (p == 0) or a Brauer table.
    const std::vector<Character>& characters(long p) const;
    const Character* find_character(long p, const std::string& id) const;
};

// Identifies one character row: p = 0 for ordinary, else the Brauer prime.
struct CharRef {
    long p = 0;
    std::string id;
    bool operator==(const CharRef& o) const { return p == o.p && id == o.id; }
    bool operator<(const CharRef& o) const {
        return p != o.p ? p < o.p : id < o.id;
    }
    std::string str() const { return p == 0 ? id : id + "@" + std::to_string(p); }
};

// Parse/serialize the .ctbl file format (JSON body; lines starting with '#'
// or '//' are comments and are stripped before parsing). Throws
// std::runtime_error with a descriptive message on malformed input, and
// table_error on validation failures.
struct parse_error : std::runtime_error { using std::runtime_error::runtime_error; };
struct table_error : std::runtime_error { using std::runtime_error::runtime_error; };

CharacterTable parse_table(const std::string& text);
CharacterTable load_table(const std::string& path);
std::string serialize_table(const CharacterTable& table);

// Full-table validation beyond structural checks (column orthogonality);
// only meaningful when !partial. Throws table_error on failure.
void validate_full(const CharacterTable& table);

// Cyclotomic <-> file encoding ("a/b" literal or {conductor, terms}).
Cyclotomic cyclo_from_text(const std::string& json_snippet);

}  // namespace helpkit
