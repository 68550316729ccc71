#include "helpkit/tables.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace helpkit {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Cyclotomic value encoding

namespace {

Cyclotomic cyclo_from_json(const json& j) {
    if (j.is_string()) return Cyclotomic(parse_rational(j.get<std::string>()));
    if (j.is_number_integer()) return Cyclotomic(Rational(j.get<long>()));
    if (j.is_object()) {
        long n = j.at("conductor").get<long>();
        std::map<long, Rational> coeffs;
        long prev = -1;
        for (const auto& term : j.at("terms")) {
            long e = term.at(0).get<long>();
            if (e <= prev)
                throw parse_error("cyclotomic terms must have strictly increasing exponents");
            prev = e;
            Rational c = term.at(1).is_string()
                             ? parse_rational(term.at(1).get<std::string>())
                             : Rational(term.at(1).get<long>());
            coeffs[e] += c;
        }
        return Cyclotomic(n, std::move(coeffs));
    }
    throw parse_error("invalid cyclotomic value encoding: " + j.dump());
}

json cyclo_to_json(const Cyclotomic& v) {
    if (v.is_rational()) return json(to_string(v.rational_value()));
    json terms = json::array();
    for (const auto& [e, c] : v.coeffs()) terms.push_back({e, to_string(c)});
    return json{{"conductor", v.conductor()}, {"terms", terms}};
}

std::vector<std::optional<Cyclotomic>> parse_values(const json& arr,
                                                    size_t expected,
                                                    const std::string& where) {
    if (!arr.is_array() || arr.size() != expected)
        throw parse_error("value row for " + where + " has " +
                          std::to_string(arr.size()) + " entries, expected " +
                          std::to_string(expected));
    std::vector<std::optional<Cyclotomic>> out;
    for (const auto& v : arr) {
        if (v.is_string() && v.get<std::string>() == "?")
            out.push_back(std::nullopt);
        else
            out.push_back(cyclo_from_json(v));
    }
    return out;
}

Character parse_character(const json& j, size_t ncols, const std::string& ctx) {
    Character ch;
    ch.id = j.at("id").get<std::string>();
    ch.degree = j.at("degree").get<long>();
    ch.values = parse_values(j.at("values"), ncols, ctx + "/" + ch.id);
    return ch;
}

json character_to_json(const Character& ch) {
    json values = json::array();
    for (const auto& v : ch.values)
        values.push_back(v ? cyclo_to_json(*v) : json("?"));
    return json{{"id", ch.id}, {"degree", ch.degree}, {"values", values}};
}

std::string strip_comments(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        size_t i = line.find_first_not_of(" \t");
        if (i != std::string::npos &&
            (line[i] == '#' || line.compare(i, 2, "//") == 0))
            continue;
        out << line << '\n';
    }
    return out.str();
}

}  // namespace

Cyclotomic cyclo_from_text(const std::string& snippet) {
    return cyclo_from_json(json::parse(snippet));
}

// ---------------------------------------------------------------------------
// CharacterTable accessors

size_t CharacterTable::class_index(const std::string& name) const {
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i].name == name) return i;
    throw table_error("unknown class: " + name);
}

bool CharacterTable::has_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return true;
    return false;
}

std::string CharacterTable::power_class(const std::string& class_name, long m) const {
    std::string cur = class_name;
    (void)class_index(cur);  // existence check
    for (auto [p, e] : factorize(m)) {
        for (int i = 0; i < e; ++i) {
            const auto& pm = cls(cur).power_map;
            auto it = pm.find(p);
            if (it == pm.end())
                throw table_error("class " + cur + " lacks a power map for prime " +
                                  std::to_string(p));
            cur = it->second;
        }
    }
    return cur;
}

std::set<long> CharacterTable::element_orders() const {
    std::set<long> out;
    for (const auto& c : classes) out.insert(c.element_order);
    return out;
}

PrimeGraph CharacterTable::prime_graph() const {
    PrimeGraph g;
    for (const auto& [p, e] : order_factorization) g.vertices.insert(p);
    std::set<long> orders = element_orders();
    for (long p : g.vertices)
        for (long q : g.vertices)
            if (p < q && orders.count(p * q)) g.edges.insert({p, q});
    return g;
}

std::optional<Cyclotomic> CharacterTable::value(const Character& ch, long p,
                                               const std::string& class_name) const {
    if (p == 0) {
        size_t i = class_index(class_name);
        return ch.defined_on(i) ? ch.values[i] : std::nullopt;
    }
    auto bt = brauer.find(p);
    if (bt == brauer.end()) return std::nullopt;
    const auto& reg = bt->second.regular_classes;
    for (size_t i = 0; i < reg.size(); ++i)
        if (reg[i] == class_name)
            return ch.defined_on(i) ? ch.values[i] : std::nullopt;
    return std::nullopt;  // class is not p-regular
}

const std::vector<Character>& CharacterTable::characters(long p) const {
    if (p == 0) return ordinary;
    auto it = brauer.find(p);
    if (it == brauer.end())
        throw table_error("no Brauer table for p=" + std::to_string(p));
    return it->second.characters;
}

const Character* CharacterTable::find_character(long p, const std::string& id) const {
    for (const auto& ch : characters(p))
        if (ch.id == id) return &ch;
    return nullptr;
}

// ---------------------------------------------------------------------------
// Parsing & validation

namespace {

void validate_structure(const CharacterTable& t) {
    // Classes: unique names, identity present, power-map sanity.
    std::set<std::string> names;
    int identity_count = 0;
    long lcm_orders = 1;
    for (const auto& c : t.classes) {
        if (!names.insert(c.name).second)
            throw table_error("duplicate class name: " + c.name);
        if (c.element_order < 1) throw table_error("bad element order for " + c.name);
        if (c.element_order == 1) {
            ++identity_count;
            if (c.name != "1a") throw table_error("identity class must be named 1a");
            if (c.size && *c.size != 1) throw table_error("identity class size must be 1");
        }
        lcm_orders = std::lcm(lcm_orders, c.element_order);
    }
    if (identity_count != 1) throw table_error("exactly one identity class required");
    if (lcm_orders != t.exponent)
        throw table_error("exponent " + std::to_string(t.exponent) +
                          " does not equal lcm of element orders " +
                          std::to_string(lcm_orders));
    long order_from_fact = 1;
    for (const auto& c : t.classes) {
        long m = c.element_order;
        for (const auto& [p, target] : c.power_map) {
            if (!t.has_class(target))
                throw table_error("unknown class '" + target + "' in power map of " + c.name);
            long target_order = t.cls(target).element_order;
            long expected = (m % p == 0) ? m / p : m;
            if (target_order != expected)
                throw table_error("power map " + c.name + " ^" + std::to_string(p) +
                                  " -> " + target + " has order " +
                                  std::to_string(target_order) + ", expected " +
                                  std::to_string(expected));
        }
    }
    (void)order_from_fact;

    // Class sizes must sum to |G| when all are present.
    bool all_sizes = true;
    for (const auto& c : t.classes) all_sizes = all_sizes && c.size.has_value();
    if (all_sizes) {
        Integer total = 0;
        for (const auto& c : t.classes) total += *c.size;
        Integer order = 1;
        for (const auto& [p, e] : t.order_factorization)
            for (int i = 0; i < e; ++i) order *= p;
        if (total != order)
            throw table_error("class sizes sum to " + total.get_str() +
                              ", group order is " + order.get_str());
    } else if (!t.partial) {
        throw table_error("full tables must carry all class sizes");
    }

    // Characters: degree at identity.
    auto check_char = [&](const Character& ch, size_t identity_idx, const char* ctx) {
        if (!ch.defined_on(identity_idx))
            throw table_error(std::string(ctx) + " " + ch.id + ": value at 1a required");
        const Cyclotomic& v = *ch.values[identity_idx];
        if (!v.is_rational() || v.rational_value() != ch.degree)
            throw table_error(std::string(ctx) + " " + ch.id +
                              ": value at 1a must equal the degree");
    };
    size_t id_idx = t.class_index("1a");
    for (const auto& ch : t.ordinary) check_char(ch, id_idx, "ordinary character");
    for (const auto& [p, bt] : t.brauer) {
        if (bt.prime != p) throw table_error("brauer table prime mismatch");
        size_t bid = bt.regular_classes.size();
        for (size_t i = 0; i < bt.regular_classes.size(); ++i) {
            const auto& cn = bt.regular_classes[i];
            if (t.cls(cn).element_order % p == 0)
                throw table_error("class " + cn + " is not " + std::to_string(p) +
                                  "-regular");
            if (cn == "1a") bid = i;
        }
        if (bid == bt.regular_classes.size())
            throw table_error("brauer table for p=" + std::to_string(p) +
                              " must list class 1a");
        for (const auto& ch : bt.characters) check_char(ch, bid, "Brauer character");
    }

    if (!t.partial && t.ordinary.size() != t.classes.size())
        throw table_error("full table must have as many ordinary characters as classes");
}

}  // namespace

CharacterTable parse_table(const std::string& text) {
    json doc;
    try {
        doc = json::parse(strip_comments(text));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("unexpected end of input or malformed file: ") +
                          e.what());
    }
    CharacterTable t;
    try {
        const json& g = doc.at("group");
        t.group_name = g.at("name").get<std::string>();
        for (const auto& pe : g.at("order"))
            t.order_factorization[pe.at(0).get<long>()] = pe.at(1).get<int>();
        t.exponent = g.at("exponent").get<long>();
        t.partial = doc.value("partial", false);
        for (const auto& jc : doc.at("classes")) {
            ConjugacyClass c;
            c.name = jc.at("name").get<std::string>();
            c.element_order = jc.at("order").get<long>();
            if (jc.contains("size")) c.size = jc.at("size").get<long>();
            if (jc.contains("powermap"))
                for (const auto& [k, v] : jc.at("powermap").items())
                    c.power_map[std::stol(k)] = v.get<std::string>();
            t.classes.push_back(std::move(c));
        }
        for (const auto& jc : doc.at("characters"))
            t.ordinary.push_back(parse_character(jc, t.classes.size(), "ordinary"));
        if (doc.contains("brauer")) {
            for (const auto& [k, jb] : doc.at("brauer").items()) {
                BrauerTable bt;
                bt.prime = std::stol(k);
                for (const auto& cn : jb.at("classes"))
                    bt.regular_classes.push_back(cn.get<std::string>());
                for (const auto& jch : jb.at("characters"))
                    bt.characters.push_back(parse_character(
                        jch, bt.regular_classes.size(), "brauer p=" + k));
                t.brauer[bt.prime] = std::move(bt);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("missing or malformed field: ") + e.what());
    }
    validate_structure(t);
    return t;
}

CharacterTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_table(ss.str());
}

std::string serialize_table(const CharacterTable& t) {
    json g;
    g["name"] = t.group_name;
    json order = json::array();
    for (const auto& [p, e] : t.order_factorization) order.push_back({p, e});
    g["order"] = order;
    g["exponent"] = t.exponent;
    json doc;
    doc["group"] = g;
    if (t.partial) doc["partial"] = true;
    json jclasses = json::array();
    for (const auto& c : t.classes) {
        json jc;
        jc["name"] = c.name;
        jc["order"] = c.element_order;
        if (c.size) jc["size"] = *c.size;
        json pm;
        for (const auto& [p, target] : c.power_map) pm[std::to_string(p)] = target;
        jc["powermap"] = pm;
        jclasses.push_back(std::move(jc));
    }
    doc["classes"] = jclasses;
    json jchars = json::array();
    for (const auto& ch : t.ordinary) jchars.push_back(character_to_json(ch));
    doc["characters"] = jchars;
    if (!t.brauer.empty()) {
        json jb;
        for (const auto& [p, bt] : t.brauer) {
            json b;
            b["classes"] = bt.regular_classes;
            json bchars = json::array();
            for (const auto& ch : bt.characters) bchars.push_back(character_to_json(ch));
            b["characters"] = bchars;
            jb[std::to_string(p)] = std::move(b);
        }
        doc["brauer"] = jb;
    }
    return doc.dump(2) + "\n";
}

void validate_full(const CharacterTable& t) {
    if (t.partial)
        throw table_error("orthogonality validation requires a full table");
    size_t n = t.classes.size();
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            Cyclotomic sum;
            for (const auto& ch : t.ordinary) {
                if (!ch.defined_on(i) || !ch.defined_on(j))
                    throw table_error("full table has undefined character values");
                sum = sum + (*ch.values[i]) * ch.values[j]->conj();
            }
            Integer order = 1;
            for (const auto& [p, e] : t.order_factorization)
                for (int k = 0; k < e; ++k) order *= p;
            Cyclotomic expected;
            if (i == j) {
                if (!t.classes[i].size)
                    throw table_error("orthogonality needs class sizes");
                expected = Cyclotomic(Rational(order) / Rational(*t.classes[i].size));
            }
            if (sum != expected)
                throw table_error("column orthogonality fails for classes " +
                                  t.classes[i].name + ", " + t.classes[j].name);
        }
    }
}

}  // namespace helpkit
