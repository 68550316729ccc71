#pragma once
#include <optional>

#include "helpkit/tables.hpp"

namespace helpkit {

// Partial augmentations of one torsion unit: class name -> nu_C.
// Absent entries are zero; the identity class never appears; entries sum to 1.
struct AugTuple {
    long order = 1;
    std::map<std::string, long> entries;

    long get(const std::string& cls) const {
        auto it = entries.find(cls);
        return it == entries.end() ? 0 : it->second;
    }
    long sum() const {
        long s = 0;
        for (auto& [c, v] : entries) s += v;
        return s;
    }
    bool operator==(const AugTuple& o) const {
        return order == o.order && entries == o.entries;
    }
    bool operator<(const AugTuple& o) const {
        return order != o.order ? order < o.order : entries < o.entries;
    }
    std::string str() const;
};

// Tuples for every proper power of a unit of order k, keyed by the order m of
// the power (1 < m < k, m | k). The unit's own tuple is the unknown.
struct Tower {
    long order = 1;
    std::map<long, AugTuple> tuples;

    bool operator==(const Tower& o) const {
        return order == o.order && tuples == o.tuples;
    }
    bool operator<(const Tower& o) const {
        return order != o.order ? order < o.order : tuples < o.tuples;
    }
};

// mu_l = (constant + sum coeffs[C] * nu_C) / divisor_k, constrained to be an
// integer in [0, deg chi].
struct AffineForm {
    Rational constant;
    std::map<std::string, Rational> coeffs;
    long divisor_k = 1;

    Rational eval(const AugTuple& t) const {
        Rational s = constant;
        for (auto& [c, a] : coeffs) s += a * Rational(t.get(c));
        return s / Rational(divisor_k);
    }
};

struct FormLabel {
    CharRef chi;
    long l = 0;
    std::string str() const;
};

struct ConstraintRow {
    AffineForm form;
    long upper_bound = 0;  // deg chi
    FormLabel label;
};

struct ConstraintSystem {
    long k = 1;
    std::vector<std::string> variables;  // admissible classes, table order
    std::vector<ConstraintRow> rows;
    // Normalization sum(nu) = 1 is implicit and enforced by the solver.
};

// Non-identity classes whose element order divides k, in table order.
std::vector<std::string> admissible_classes(const CharacterTable& table, long k);

// sum nu_C * chi(C); nullopt when a needed value is unknown. Throws
// table_error when a class with nonzero nu is outside a Brauer regular set.
std::optional<Cyclotomic> chi_of_tuple(const CharacterTable& table,
                                       const Character& ch, long p,
                                       const AugTuple& t);

// The mu_l form of Proposition 1 / Eq. (2) for a unit of order k, with fixed
// power tuples. p = 0 for ordinary, else a Brauer prime coprime to k.
// nullopt when the character does not cover the needed classes.
// Throws std::invalid_argument on gcd(p, k) > 1 or a tower missing a divisor.
std::optional<AffineForm> mu_form(const CharacterTable& table, long k,
                                  const Character& ch, long p,
                                  const Tower& tower, long l);

// Aggregated (m1, mp, mq) row of Eqs. (3)-(5) for an order pq with no group
// element of that order. Requires the character to be constant (and here
// rational) on all order-p and all order-q classes.
struct PqRow {
    long p = 0, q = 0;
    Rational xi_p, xi_q;  // the constant character value on each family
    long l = 0;
    Rational m1, mp, mq;
};
PqRow pq_table_row(const CharacterTable& table, long k, const Character& ch,
                   long p_brauer, long l);

// One row per (character, l in 0..k-1), duplicates removed; characters that do
// not cover every admissible class (or whose tower values are unknown) are
// skipped. Throws std::invalid_argument for k < 2.
ConstraintSystem build_system(const CharacterTable& table, long k,
                              const Tower& tower,
                              const std::vector<CharRef>& selection);

// Builds the same systems as build_system but amortizes the work that does not
// depend on the tower: the nu-coefficient of every row is fixed by (chi, l)
// alone, and a character's rows depend on the tower only through the induced
// values chi(u^d), so each character's row block is cached by those values.
class SystemBuilder {
public:
    SystemBuilder(const CharacterTable& table, long k,
                  const std::vector<CharRef>& selection);
    ConstraintSystem build(const Tower& tower);

private:
    struct PerChar {
        CharRef ref;
        const Character* ch = nullptr;
        bool covers = false;  // has values on every admissible class
        std::vector<std::map<std::string, Rational>> coeffs;  // per l
        // Rows keyed by the induced tower values; nullopt = skip this tower.
        std::map<std::string, std::optional<std::vector<ConstraintRow>>> rows;
    };
    const CharacterTable& table_;
    long k_;
    std::vector<std::string> variables_;
    std::vector<long> proper_divisors_;  // 1 < m < k
    std::vector<PerChar> chars_;
};

// The tower a genuine group element g in class C of order k induces through
// the power maps: the power of order m lies in the class of g^{k/m}.
Tower trivial_tower(const CharacterTable& table, const std::string& class_name);
AugTuple trivial_tuple(const CharacterTable& table, const std::string& class_name);

// Proposition-1 data screen: a character whose stored values make some genuine
// group element of order k violate its own mu_l constraints is corrupt for
// this order. Returns the members of `selection` that pass, appending a
// warning line per dropped character.
std::vector<CharRef> screen_selection(const CharacterTable& table, long k,
                                      const std::vector<CharRef>& selection,
                                      std::vector<std::string>* warnings);

// Table-wide Proposition-1 screen report (every element order).
std::vector<std::string> consistency_warnings(const CharacterTable& table);

}  // namespace helpkit
