#include "helpkit/report.hpp"

#include <algorithm>
#include <sstream>

namespace helpkit {

namespace {

Json table_header(const CharacterTable& table, const std::string& path) {
    Json j;
    j["name"] = table.group_name;
    j["path"] = path;
    j["partial"] = table.partial;
    return j;
}

Json tuple_json(const AugTuple& t) {
    Json j = Json::object();
    for (auto& [c, v] : t.entries)
        if (v != 0) j[c] = v;
    return j;
}

Json tower_json(const CharacterTable& table, long k, const Tower& tower,
                const FeasibleSet& fs, const std::vector<CharRef>& selection) {
    Json j;
    Json powers = Json::object();
    for (auto& [m, tup] : tower.tuples)
        powers[std::to_string(m)] = tuple_json(tup);
    j["powers"] = powers;
    j["variables"] = fs.variables;

    ConstraintSystem sys = build_system(table, k, tower, selection);
    ReducedSystem red = merge_variables(sys);
    Json tuples = Json::array();
    for (const auto& tup : fs.tuples) {
        Json e;
        e["nu"] = tuple_json(tup);
        VerifyResult vr = verify(red.sys, tup);
        Json mu = Json::object();
        for (auto& [label, value] : vr.mu_values) mu[label] = to_string(value);
        e["mu"] = mu;
        e["verified"] = vr.ok;
        tuples.push_back(std::move(e));
    }
    j["tuples"] = tuples;
    return j;
}

// Observed min/max of every variable across all surviving tuples.
Json range_json(const std::vector<std::pair<Tower, FeasibleSet>>& towers) {
    std::map<std::string, std::pair<long, long>> ranges;
    for (const auto& [tw, fs] : towers) {
        for (const auto& tup : fs.tuples) {
            for (const auto& var : fs.variables) {
                long v = tup.get(var);
                auto it = ranges.find(var);
                if (it == ranges.end())
                    ranges.emplace(var, std::make_pair(v, v));
                else {
                    it->second.first = std::min(it->second.first, v);
                    it->second.second = std::max(it->second.second, v);
                }
            }
        }
    }
    Json j = Json::object();
    for (auto& [var, r] : ranges) j[var] = Json::array({r.first, r.second});
    return j;
}

Json selection_json(const std::vector<CharRef>& selection) {
    Json j = Json::array();
    for (const auto& ref : selection) j.push_back(ref.str());
    return j;
}

Json order_body(const CharacterTable& table, const std::string& path,
                const OrderVerdict& v, const char* command) {
    Json j;
    j["command"] = command;
    j["table"] = table_header(table, path);
    j["k"] = v.k;
    j["element_order"] = table.element_orders().count(v.k) > 0;
    j["verdict"] = OrderVerdict::status_name(v.status);
    j["unbounded"] = v.unbounded;
    j["selection"] = selection_json(v.selection);
    j["notes"] = v.notes;
    size_t count = 0;
    Json towers = Json::array();
    for (const auto& [tw, fs] : v.towers) {
        towers.push_back(tower_json(table, v.k, tw, fs, v.selection));
        count += fs.tuples.size();
    }
    j["towers"] = towers;
    j["tuple_count"] = count;
    j["ranges"] = range_json(v.towers);
    return j;
}

}  // namespace

Json report_validate(const CharacterTable& table, const std::string& path,
                     const std::vector<std::string>& warnings) {
    Json j;
    j["command"] = "validate";
    j["table"] = table_header(table, path);
    j["classes"] = table.classes.size();
    j["ordinary_characters"] = table.ordinary.size();
    Json brauer = Json::object();
    for (auto& [p, bt] : table.brauer)
        brauer[std::to_string(p)] = bt.characters.size();
    j["brauer_characters"] = brauer;
    j["exponent"] = table.exponent;
    j["warnings"] = warnings;
    j["ok"] = true;
    return j;
}

Json report_order(const CharacterTable& table, const std::string& path,
                  const OrderVerdict& verdict) {
    return order_body(table, path, verdict, "order");
}

Json report_pq_table(const CharacterTable& table, const std::string& path,
                     long k, const std::vector<CharRef>& selection,
                     const std::vector<long>& ls) {
    Json j;
    j["command"] = "pq-table";
    j["table"] = table_header(table, path);
    j["k"] = k;
    Json rows = Json::array();
    for (const auto& ref : selection) {
        const Character* ch = table.find_character(ref.p, ref.id);
        if (!ch) throw table_error("no character " + ref.str() + " in the table");
        for (long l : ls) {
            PqRow r = pq_table_row(table, k, *ch, ref.p, l);
            Json row;
            row["order"] = k;
            row["p"] = r.p;
            row["q"] = r.q;
            row["character"] = ref.str();
            row["degree"] = ch->degree;
            row["xi_p"] = to_string(r.xi_p);
            row["xi_q"] = to_string(r.xi_q);
            row["l"] = r.l;
            row["m1"] = to_string(r.m1);
            row["mp"] = to_string(r.mp);
            row["mq"] = to_string(r.mq);
            rows.push_back(std::move(row));
        }
    }
    j["rows"] = rows;
    return j;
}

Json report_spectrum(const CharacterTable& table, const std::string& path,
                     const SpectrumReport& rep) {
    Json j;
    j["command"] = "spectrum";
    j["table"] = table_header(table, path);
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json je;
        je["order"] = e.order;
        switch (e.kind) {
            case SpectrumReport::Kind::ElementOrder:
                je["kind"] = "element-order";
                break;
            case SpectrumReport::Kind::ExcludedDirect:
                je["kind"] = "excluded";
                break;
            case SpectrumReport::Kind::ExcludedByClosure:
                je["kind"] = "excluded-by-closure";
                je["witness"] = e.closure_witness;
                break;
            case SpectrumReport::Kind::Open:
                je["kind"] = "open";
                break;
        }
        entries.push_back(std::move(je));
    }
    j["entries"] = entries;
    j["open"] = rep.open_orders();
    j["excluded"] = rep.excluded_orders();
    return j;
}

Json report_kimmerle(const CharacterTable& table, const std::string& path,
                     const KimmerleReport& rep) {
    Json j;
    j["command"] = "kimmerle";
    j["table"] = table_header(table, path);
    Json graph;
    graph["vertices"] = rep.group_graph.vertices;
    Json edges = Json::array();
    for (auto& [p, q] : rep.group_graph.edges) edges.push_back(Json::array({p, q}));
    graph["edges"] = edges;
    j["group_prime_graph"] = graph;
    Json missing = Json::array();
    for (const auto& e : rep.missing_edges) {
        Json je;
        je["p"] = e.p;
        je["q"] = e.q;
        je["order"] = e.order;
        je["status"] = OrderVerdict::status_name(e.status);
        missing.push_back(std::move(je));
    }
    j["missing_edges"] = missing;
    j["confirmed"] = rep.confirmed;
    j["unresolved"] = rep.unresolved;
    return j;
}

Json report_zassenhaus(const CharacterTable& table, const std::string& path,
                       const OrderVerdict& verdict) {
    Json j = order_body(table, path, verdict, "zassenhaus");
    std::string claim;
    bool element = j["element_order"].get<bool>();
    std::string name = j["table"]["name"].get<std::string>();
    std::string k = std::to_string(verdict.k);
    switch (verdict.status) {
        case OrderVerdict::Status::RationallyTrivial:
            claim = "every normalized torsion unit of order " + k + " in Z" +
                    name + " is rationally conjugate to a group element";
            break;
        case OrderVerdict::Status::Excluded:
            claim = "V(Z" + name + ") has no elements of order " + k;
            break;
        default:
            claim = element
                        ? "open: surviving non-trivial partial augmentations "
                          "of order " + k
                        : "open: order " + k + " not excluded by the "
                          "available constraints";
            break;
    }
    j["claim"] = claim;
    return j;
}

// ---------------------------------------------------------------------------
// Text rendering (pure function of the JSON document).

namespace {

std::string pad(const std::string& s, size_t w) {
    return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string tuple_text(const Json& nu) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto it = nu.begin(); it != nu.end(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << it.key() << ":" << it.value().get<long>();
    }
    os << "}";
    return os.str();
}

void render_header(std::ostringstream& os, const Json& j) {
    const Json& t = j["table"];
    os << t["name"].get<std::string>()
       << (t["partial"].get<bool>() ? " (partial table)" : " (full table)")
       << " -- " << t["path"].get<std::string>() << "\n";
}

void render_order_like(std::ostringstream& os, const Json& j) {
    render_header(os, j);
    os << j["command"].get<std::string>() << " " << j["k"].get<long>() << ": "
       << j["verdict"].get<std::string>() << "\n";
    if (j.contains("claim"))
        os << "  " << j["claim"].get<std::string>() << "\n";
    os << "selection:";
    for (const auto& s : j["selection"]) os << " " << s.get<std::string>();
    os << "\n";
    for (const auto& n : j["notes"])
        os << "note: " << n.get<std::string>() << "\n";
    size_t ti = 0;
    for (const auto& tw : j["towers"]) {
        ++ti;
        os << "tower " << ti << "/" << j["towers"].size() << ":\n";
        for (auto it = tw["powers"].begin(); it != tw["powers"].end(); ++it)
            os << "  u^(k/" << it.key() << ") -> " << tuple_text(it.value())
               << "\n";
        os << "  tuples (" << tw["tuples"].size() << "):\n";
        for (const auto& e : tw["tuples"]) {
            os << "    " << tuple_text(e["nu"]);
            const Json& mu = e["mu"];
            if (!mu.empty()) {
                os << "   ";
                bool first = true;
                for (auto it = mu.begin(); it != mu.end(); ++it) {
                    if (!first) os << ", ";
                    first = false;
                    os << it.key() << "=" << it.value().get<std::string>();
                }
            }
            os << "\n";
        }
    }
    os << "total surviving tuples: " << j["tuple_count"].get<size_t>() << "\n";
    const Json& ranges = j["ranges"];
    if (!ranges.empty()) {
        os << "ranges:";
        for (auto it = ranges.begin(); it != ranges.end(); ++it)
            os << " " << it.key() << " in [" << it.value()[0].get<long>()
               << ", " << it.value()[1].get<long>() << "]";
        os << "\n";
    }
}

void render_pq_table(std::ostringstream& os, const Json& j) {
    render_header(os, j);
    os << "constraint rows for |u| = " << j["k"].get<long>() << "\n";
    // Column layout mirrors the paper: |u| p q character xi(C_p) xi(C_q) l m1 mp mq.
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"|u|", "p", "q", "character", "deg", "xi(C_p)", "xi(C_q)",
                     "l", "m1", "mp", "mq"});
    for (const auto& r : j["rows"]) {
        cells.push_back({std::to_string(r["order"].get<long>()),
                         std::to_string(r["p"].get<long>()),
                         std::to_string(r["q"].get<long>()),
                         r["character"].get<std::string>(),
                         std::to_string(r["degree"].get<long>()),
                         r["xi_p"].get<std::string>(),
                         r["xi_q"].get<std::string>(),
                         std::to_string(r["l"].get<long>()),
                         r["m1"].get<std::string>(),
                         r["mp"].get<std::string>(),
                         r["mq"].get<std::string>()});
    }
    std::vector<size_t> width(cells[0].size(), 0);
    for (const auto& row : cells)
        for (size_t i = 0; i < row.size(); ++i)
            width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
        for (size_t i = 0; i < row.size(); ++i)
            os << pad(row[i], width[i]) << (i + 1 < row.size() ? "  " : "");
        os << "\n";
    }
}

void render_spectrum(std::ostringstream& os, const Json& j) {
    render_header(os, j);
    os << "spectrum of normalized torsion units (divisors of the exponent):\n";
    for (const auto& e : j["entries"]) {
        os << "  " << e["order"].get<long>() << ": "
           << e["kind"].get<std::string>();
        if (e.contains("witness"))
            os << " (divisor " << e["witness"].get<long>() << " excluded)";
        os << "\n";
    }
    os << "excluded:";
    for (const auto& d : j["excluded"]) os << " " << d.get<long>();
    os << "\nopen:";
    for (const auto& d : j["open"]) os << " " << d.get<long>();
    os << "\n";
}

void render_kimmerle(std::ostringstream& os, const Json& j) {
    render_header(os, j);
    os << "prime graph vertices:";
    for (const auto& p : j["group_prime_graph"]["vertices"])
        os << " " << p.get<long>();
    os << "\ngroup edges:";
    for (const auto& e : j["group_prime_graph"]["edges"])
        os << " " << e[0].get<long>() << "-" << e[1].get<long>();
    os << "\nmissing edges:\n";
    for (const auto& e : j["missing_edges"])
        os << "  " << e["p"].get<long>() << "-" << e["q"].get<long>()
           << " (order " << e["order"].get<long>() << "): "
           << e["status"].get<std::string>() << "\n";
    if (j["confirmed"].get<bool>()) {
        os << "Kimmerle conjecture: Confirmed\n";
    } else {
        os << "Kimmerle conjecture: Open {";
        bool first = true;
        for (const auto& d : j["unresolved"]) {
            if (!first) os << ", ";
            first = false;
            os << d.get<long>();
        }
        os << "}\n";
    }
}

void render_validate(std::ostringstream& os, const Json& j) {
    render_header(os, j);
    os << j["classes"].get<size_t>() << " classes, "
       << j["ordinary_characters"].get<size_t>() << " ordinary characters";
    const Json& b = j["brauer_characters"];
    for (auto it = b.begin(); it != b.end(); ++it)
        os << ", " << it.value().get<size_t>() << " " << it.key()
           << "-Brauer characters";
    os << "; exponent " << j["exponent"].get<long>() << "\n";
    for (const auto& w : j["warnings"])
        os << "warning: " << w.get<std::string>() << "\n";
    os << (j["ok"].get<bool>() ? "OK" : "INVALID") << "\n";
}

}  // namespace

std::string render_text(const Json& report) {
    std::ostringstream os;
    const std::string cmd = report.at("command").get<std::string>();
    if (cmd == "validate")
        render_validate(os, report);
    else if (cmd == "order" || cmd == "zassenhaus")
        render_order_like(os, report);
    else if (cmd == "pq-table")
        render_pq_table(os, report);
    else if (cmd == "spectrum")
        render_spectrum(os, report);
    else if (cmd == "kimmerle")
        render_kimmerle(os, report);
    else
        throw std::invalid_argument("unknown report command: " + cmd);
    return os.str();
}

}  // namespace helpkit
