#include "helpkit/constraints.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace helpkit {

std::string AugTuple::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [c, v] : entries) {
        if (v == 0) continue;
        if (!first) os << ", ";
        first = false;
        os << c << ":" << v;
    }
    os << "}";
    return os.str();
}

std::string FormLabel::str() const {
    return "mu_" + std::to_string(l) + "(" + chi.str() + ")";
}

std::vector<std::string> admissible_classes(const CharacterTable& table, long k) {
    std::vector<std::string> out;
    for (const auto& c : table.classes)
        if (c.element_order > 1 && k % c.element_order == 0)
            out.push_back(c.name);
    return out;
}

namespace {

// An entry key is either a class name or an aggregate "a+b+c" produced by the
// solver's variable merging. The character contributes through an aggregate
// only when it takes one common value on all member classes.
std::optional<Cyclotomic> value_on_group(const CharacterTable& table,
                                         const Character& ch, long p,
                                         const std::string& key) {
    std::optional<Cyclotomic> common;
    size_t start = 0;
    while (start <= key.size()) {
        size_t end = key.find('+', start);
        std::string cls = key.substr(start, end == std::string::npos
                                                ? std::string::npos
                                                : end - start);
        if (p > 0 && table.cls(cls).element_order % p == 0)
            throw table_error("class " + cls + " is " + std::to_string(p) +
                              "-singular; " + std::to_string(p) +
                              "-Brauer character " + ch.id + " is undefined there");
        auto v = table.value(ch, p, cls);
        if (!v) return std::nullopt;
        if (common && *common != *v) return std::nullopt;  // not constant
        common = *v;
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return common;
}

}  // namespace

std::optional<Cyclotomic> chi_of_tuple(const CharacterTable& table,
                                       const Character& ch, long p,
                                       const AugTuple& t) {
    Cyclotomic sum;
    for (auto& [cls, nu] : t.entries) {
        if (nu == 0) continue;
        auto v = value_on_group(table, ch, p, cls);
        if (!v) return std::nullopt;
        sum = sum + v->scaled(Rational(nu));
    }
    return sum;
}

namespace {

// Tr_{Q(zeta_m)/Q}(y * zeta_m^j) for y with conductor dividing m, computed
// term by term through the closed-form root trace (no products needed).
Rational trace_with_root(long m, const Cyclotomic& y, long j) {
    if (m % y.conductor() != 0)
        throw std::logic_error("value outside Q(zeta_m) in trace computation");
    long lift = m / y.conductor();
    Rational t = 0;
    for (auto& [e, c] : y.coeffs()) t += c * Rational(trace_of_root(m, e * lift + j));
    return t;
}

}  // namespace

std::optional<AffineForm> mu_form(const CharacterTable& table, long k,
                                  const Character& ch, long p,
                                  const Tower& tower, long l) {
    if (k < 2) throw std::invalid_argument("unit order must be at least 2");
    if (p > 0 && std::gcd(p, k) != 1)
        throw std::invalid_argument("Brauer prime " + std::to_string(p) +
                                    " divides unit order " + std::to_string(k));
    l %= k;
    if (l < 0) l += k;

    AffineForm form;
    form.divisor_k = k;
    // d = k term: chi(u^k) = chi(1) = deg, trace over Q.
    form.constant = Rational(ch.degree);
    // Proper power terms: the power of order m = k/d contributes
    // Tr_{Q(zeta_m)/Q}(chi(u^d) zeta_m^{-l}).
    for (long m : divisors(k)) {
        if (m == 1 || m == k) continue;
        auto it = tower.tuples.find(m);
        if (it == tower.tuples.end())
            throw std::invalid_argument("tower for order " + std::to_string(k) +
                                        " lacks the power of order " +
                                        std::to_string(m));
        auto val = chi_of_tuple(table, ch, p, it->second);
        if (!val) return std::nullopt;
        form.constant += trace_with_root(m, *val, -l);
    }
    // d = 1 term: unknown nu_C with coefficient Tr_{Q(zeta_k)/Q}(chi(C) z^{-l}).
    for (const auto& cls : admissible_classes(table, k)) {
        auto v = table.value(ch, p, cls);
        if (!v) return std::nullopt;
        Rational coeff = trace_with_root(k, *v, -l);
        if (coeff != 0) form.coeffs[cls] = coeff;
    }
    return form;
}

PqRow pq_table_row(const CharacterTable& table, long k, const Character& ch,
                   long p_brauer, long l) {
    auto fact = factorize(k);
    if (fact.size() != 2 || fact[0].second != 1 || fact[1].second != 1)
        throw std::invalid_argument(std::to_string(k) +
                                    " is not a product of two distinct primes");
    long p = fact[0].first, q = fact[1].first;
    if (table.element_orders().count(k))
        throw std::invalid_argument("group has elements of order " +
                                    std::to_string(k) +
                                    "; the aggregated pq row does not apply");

    auto family_value = [&](long prime) -> Rational {
        std::optional<Rational> common;
        for (const auto& c : table.classes) {
            if (c.element_order != prime) continue;
            auto v = table.value(ch, p_brauer, c.name);
            if (!v || !v->is_rational())
                throw table_error("character " + ch.id +
                                  " lacks a rational value on class " + c.name);
            if (common && *common != v->rational_value())
                throw table_error("character " + ch.id +
                                  " is not constant on the order-" +
                                  std::to_string(prime) + " classes");
            common = v->rational_value();
        }
        if (!common)
            throw table_error("no classes of order " + std::to_string(prime));
        return *common;
    };

    PqRow row;
    row.p = p;
    row.q = q;
    row.l = ((l % k) + k) % k;
    row.xi_p = family_value(p);
    row.xi_q = family_value(q);
    // m1 = deg + xi(C_q) Tr_{Q(z^p)}(z^{-pl}) + xi(C_p) Tr_{Q(z^q)}(z^{-ql});
    // z^p has order q and z^q has order p.
    row.m1 = Rational(ch.degree) + row.xi_q * Rational(trace_of_root(q, -row.l)) +
             row.xi_p * Rational(trace_of_root(p, -row.l));
    row.mp = row.xi_p * Rational(trace_of_root(k, -row.l));
    row.mq = row.xi_q * Rational(trace_of_root(k, -row.l));
    return row;
}

namespace {

std::string form_key(const AffineForm& f, long upper) {
    std::ostringstream os;
    os << to_string(f.constant) << "|" << upper;
    for (auto& [c, a] : f.coeffs) os << "|" << c << ":" << to_string(a);
    return os.str();
}

}  // namespace

SystemBuilder::SystemBuilder(const CharacterTable& table, long k,
                             const std::vector<CharRef>& selection)
    : table_(table), k_(k) {
    if (k < 2)
        throw std::invalid_argument("no torsion unit of order " +
                                    std::to_string(k) + " to constrain");
    variables_ = admissible_classes(table, k);
    for (long m : divisors(k))
        if (m > 1 && m < k) proper_divisors_.push_back(m);

    for (const auto& ref : selection) {
        PerChar pc;
        pc.ref = ref;
        pc.ch = table.find_character(ref.p, ref.id);
        if (!pc.ch)
            throw table_error("no character " + ref.str() + " in the table");
        if (ref.p > 0 && std::gcd(ref.p, k) != 1)
            throw std::invalid_argument("Brauer prime " + std::to_string(ref.p) +
                                        " divides unit order " + std::to_string(k));
        pc.covers = true;
        pc.coeffs.resize(k);
        for (const auto& cls : variables_) {
            auto v = table.value(*pc.ch, ref.p, cls);
            if (!v) {
                pc.covers = false;
                break;
            }
            for (long l = 0; l < k; ++l) {
                Rational coeff = trace_with_root(k, *v, -l);
                if (coeff != 0) pc.coeffs[l][cls] = coeff;
            }
        }
        chars_.push_back(std::move(pc));
    }
}

ConstraintSystem SystemBuilder::build(const Tower& tower) {
    ConstraintSystem sys;
    sys.k = k_;
    sys.variables = variables_;
    std::set<std::string> seen;
    for (auto& pc : chars_) {
        if (!pc.covers) continue;
        // Induced values chi(u^d) for the powers of order m = k/d.
        std::map<long, Cyclotomic> vals;
        std::string sig;
        bool ok = true;
        for (long m : proper_divisors_) {
            auto it = tower.tuples.find(m);
            if (it == tower.tuples.end())
                throw std::invalid_argument("tower for order " + std::to_string(k_) +
                                            " lacks the power of order " +
                                            std::to_string(m));
            auto v = chi_of_tuple(table_, *pc.ch, pc.ref.p, it->second);
            if (!v) {
                ok = false;  // domain gap: skip this character entirely
                break;
            }
            sig += v->str();
            sig += ";";
            vals.emplace(m, std::move(*v));
        }
        if (!ok) sig = "~";
        auto cit = pc.rows.find(sig);
        if (cit == pc.rows.end()) {
            std::optional<std::vector<ConstraintRow>> block;
            if (ok) {
                block.emplace();
                for (long l = 0; l < k_; ++l) {
                    AffineForm form;
                    form.divisor_k = k_;
                    form.constant = Rational(pc.ch->degree);
                    for (auto& [m, v] : vals)
                        form.constant += trace_with_root(m, v, -l);
                    form.coeffs = pc.coeffs[l];
                    block->push_back({std::move(form), pc.ch->degree, {pc.ref, l}});
                }
            }
            cit = pc.rows.emplace(std::move(sig), std::move(block)).first;
        }
        if (!cit->second) continue;
        for (const auto& row : *cit->second) {
            std::string key = form_key(row.form, row.upper_bound);
            if (!seen.insert(key).second) continue;
            sys.rows.push_back(row);
        }
    }
    return sys;
}

ConstraintSystem build_system(const CharacterTable& table, long k,
                              const Tower& tower,
                              const std::vector<CharRef>& selection) {
    return SystemBuilder(table, k, selection).build(tower);
}

AugTuple trivial_tuple(const CharacterTable& table, const std::string& class_name) {
    AugTuple t;
    t.order = table.cls(class_name).element_order;
    t.entries[class_name] = 1;
    return t;
}

Tower trivial_tower(const CharacterTable& table, const std::string& class_name) {
    Tower tw;
    tw.order = table.cls(class_name).element_order;
    for (long m : divisors(tw.order)) {
        if (m == 1 || m == tw.order) continue;
        tw.tuples[m] = trivial_tuple(table, table.power_class(class_name, tw.order / m));
    }
    return tw;
}

std::vector<CharRef> screen_selection(const CharacterTable& table, long k,
                                      const std::vector<CharRef>& selection,
                                      std::vector<std::string>* warnings) {
    std::vector<std::string> order_k_classes;
    for (const auto& c : table.classes)
        if (c.element_order == k) order_k_classes.push_back(c.name);

    std::vector<CharRef> kept;
    for (const auto& ref : selection) {
        const Character* ch = table.find_character(ref.p, ref.id);
        if (!ch) continue;
        bool ok = true;
        std::string reason;
        for (const auto& cls : order_k_classes) {
            Tower tw = trivial_tower(table, cls);
            AugTuple unit = trivial_tuple(table, cls);
            for (long l = 0; l < k && ok; ++l) {
                auto form = mu_form(table, k, *ch, ref.p, tw, l);
                if (!form) break;  // cannot evaluate: nothing to screen
                Rational v = form->eval(unit);
                if (!is_integer(v) || v < 0 || v > ch->degree) {
                    ok = false;
                    reason = "mu_" + std::to_string(l) + "(" + cls + ") = " +
                             to_string(v);
                }
            }
            if (!ok) break;
        }
        if (ok) {
            kept.push_back(ref);
        } else if (warnings) {
            warnings->push_back(
                "character " + ref.str() + " violates Proposition 1 on a genuine "
                "group element of order " + std::to_string(k) + " (" + reason +
                "); its stored values are inconsistent and it is ignored for "
                "this order");
        }
    }
    return kept;
}

std::vector<std::string> consistency_warnings(const CharacterTable& table) {
    std::vector<std::string> warnings;
    for (long k : table.element_orders()) {
        if (k < 2) continue;
        std::vector<CharRef> sel;
        for (const auto& ch : table.ordinary) sel.push_back({0, ch.id});
        for (const auto& [p, bt] : table.brauer) {
            if (std::gcd(p, k) != 1) continue;
            for (const auto& ch : bt.characters) sel.push_back({p, ch.id});
        }
        screen_selection(table, k, sel, &warnings);
    }
    return warnings;
}

}  // namespace helpkit
