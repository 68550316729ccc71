#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "helpkit/report.hpp"

namespace {

using namespace helpkit;

// Exit codes: 0 success, 1 Open verdict under --strict, 2 parse/usage error,
// 3 validation error, 4 unbounded system.
constexpr int kExitOpen = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitUnbounded = 4;

struct Options {
    std::string table_path;
    long k = 0;
    std::vector<std::string> chars;    // --chars chi2,chi7 (ordinary ids)
    std::vector<std::string> brauer;   // --brauer 2:chi6
    std::vector<std::string> sums;     // --sum 1+2+3+6+8@2 (xi index list)
    std::vector<long> ls;              // -l rows for pq-table
    std::string format = "text";
    bool strict = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t end = s.find(sep, start);
        out.push_back(s.substr(start, end == std::string::npos
                                          ? std::string::npos
                                          : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

// "1+2+3@7" -> sum of the family-7 characters chi1, chi2, chi3 when all of
// them are present; otherwise falls back to a stored character named
// "sum1+2+3" (partial fixtures carry the paper's sums directly).
CharRef resolve_sum(CharacterTable& table, const std::string& spec) {
    std::string list = spec;
    long p = 0;
    if (auto at = spec.find('@'); at != std::string::npos) {
        list = spec.substr(0, at);
        try {
            p = std::stol(spec.substr(at + 1));
        } catch (const std::exception&) {
            throw parse_error("bad --sum family in '" + spec + "'");
        }
    }
    std::string id = "sum" + list;
    if (table.find_character(p, id)) return {p, id};

    std::vector<const Character*> parts;
    for (const auto& ix : split(list, '+')) {
        const Character* ch = table.find_character(p, "chi" + ix);
        if (!ch)
            throw table_error("--sum " + spec + ": no character chi" + ix +
                              (p ? " in the " + std::to_string(p) +
                                       "-Brauer table"
                                 : " in the ordinary table") +
                              " and no stored " + id);
        parts.push_back(ch);
    }
    Character sum;
    sum.id = id;
    size_t ncols = parts[0]->values.size();
    sum.values.assign(ncols, Cyclotomic(Rational(0)));
    for (const Character* ch : parts) {
        sum.degree += ch->degree;
        for (size_t i = 0; i < ncols; ++i) {
            if (!sum.values[i] || !ch->values[i]) {
                sum.values[i] = std::nullopt;
                continue;
            }
            sum.values[i] = *sum.values[i] + *ch->values[i];
        }
    }
    if (p == 0)
        table.ordinary.push_back(std::move(sum));
    else
        table.brauer.at(p).characters.push_back(std::move(sum));
    return {p, id};
}

std::optional<std::vector<CharRef>> build_restriction(CharacterTable& table,
                                                      const Options& opt) {
    if (opt.chars.empty() && opt.brauer.empty() && opt.sums.empty())
        return std::nullopt;  // all characters (the engine default)
    std::vector<CharRef> refs;
    for (const auto& group : opt.chars)
        for (const auto& id : split(group, ',')) {
            if (!table.find_character(0, id))
                throw table_error("no ordinary character " + id);
            refs.push_back({0, id});
        }
    for (const auto& spec : opt.brauer) {
        auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw parse_error("--brauer expects p:chiN, got '" + spec + "'");
        long p;
        try {
            p = std::stol(spec.substr(0, colon));
        } catch (const std::exception&) {
            throw parse_error("bad --brauer prime in '" + spec + "'");
        }
        std::string id = spec.substr(colon + 1);
        if (!table.brauer.count(p) || !table.find_character(p, id))
            throw table_error("no " + std::to_string(p) + "-Brauer character " +
                              id);
        refs.push_back({p, id});
    }
    for (const auto& spec : opt.sums) refs.push_back(resolve_sum(table, spec));
    return refs;
}

void emit(const Json& report, const Options& opt) {
    if (opt.format == "json")
        std::cout << report.dump(2) << "\n";
    else
        std::cout << render_text(report);
}

int run(const std::string& command, Options& opt) {
    CharacterTable table = load_table(opt.table_path);

    if (command == "validate") {
        if (!table.partial) validate_full(table);
        Json rep = report_validate(table, opt.table_path,
                                   consistency_warnings(table));
        emit(rep, opt);
        return 0;
    }

    auto restriction = build_restriction(table, opt);

    if (command == "pq-table") {
        std::vector<CharRef> selection;
        if (restriction) {
            selection = *restriction;
        } else {
            // Default: every character that admits the aggregated row.
            auto usable = [&](long p, const Character& ch) {
                try {
                    pq_table_row(table, opt.k, ch, p, 0);
                    return true;
                } catch (const table_error&) {
                    return false;
                }
            };
            for (const auto& ch : table.ordinary)
                if (usable(0, ch)) selection.push_back({0, ch.id});
            for (const auto& [p, bt] : table.brauer) {
                if (opt.k % p == 0) continue;
                for (const auto& ch : bt.characters)
                    if (usable(p, ch)) selection.push_back({p, ch.id});
            }
        }
        std::vector<long> ls = opt.ls.empty() ? std::vector<long>{0} : opt.ls;
        Json rep = report_pq_table(table, opt.table_path, opt.k, selection, ls);
        emit(rep, opt);
        return 0;
    }

    Engine engine(table, restriction);

    if (command == "order" || command == "zassenhaus") {
        OrderVerdict v = engine.order_verdict(opt.k);
        Json rep = command == "order"
                       ? report_order(table, opt.table_path, v)
                       : report_zassenhaus(table, opt.table_path, v);
        emit(rep, opt);
        if (v.unbounded) return kExitUnbounded;
        if (opt.strict && v.status == OrderVerdict::Status::Open)
            return kExitOpen;
        return 0;
    }
    if (command == "spectrum") {
        SpectrumReport rep = engine.spectrum();
        emit(report_spectrum(table, opt.table_path, rep), opt);
        if (opt.strict && !rep.open_orders().empty()) return kExitOpen;
        return 0;
    }
    if (command == "kimmerle") {
        KimmerleReport rep = engine.kimmerle();
        emit(report_kimmerle(table, opt.table_path, rep), opt);
        if (opt.strict && !rep.confirmed) return kExitOpen;
        return 0;
    }
    throw std::logic_error("unhandled command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "helpkit: exact Luthar-Passi (HeLP) constraints on torsion units of "
        "integral group rings"};
    app.require_subcommand(1);

    std::string command;
    Options opt;
    auto add_common = [&](CLI::App* sub, bool with_k, bool with_selection) {
        sub->add_option("table", opt.table_path, "character table (.ctbl)")
            ->required();
        if (with_k)
            sub->add_option("k", opt.k, "unit order")->required();
        if (with_selection) {
            sub->add_option("--chars", opt.chars,
                            "ordinary characters, comma separated");
            sub->add_option("--brauer", opt.brauer,
                            "Brauer character as p:chiN (repeatable)");
            sub->add_option("--sum", opt.sums,
                            "character sum as i+j+...[@p] (repeatable)");
        }
        sub->add_option("--format", opt.format, "text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--strict", opt.strict,
                      "exit 1 when the verdict stays Open");
        sub->callback([&command, sub] { command = sub->get_name(); });
    };
    add_common(app.add_subcommand("validate", "parse and validate a table"),
               false, false);
    add_common(app.add_subcommand("order",
                                  "feasible partial augmentations of order k"),
               true, true);
    auto* pq = app.add_subcommand(
        "pq-table", "aggregated (m1, mp, mq) rows for a mixed order pq");
    add_common(pq, true, true);
    pq->add_option("-l", opt.ls, "residues l for the rows (comma list or repeated)")
        ->delimiter(',');
    add_common(app.add_subcommand("spectrum",
                                  "verdicts for all divisors of the exponent"),
               false, true);
    add_common(app.add_subcommand("kimmerle",
                                  "prime-graph check over missing edges"),
               false, true);
    add_common(app.add_subcommand("zassenhaus",
                                  "rational conjugacy verdict for order k"),
               true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        return run(command, opt);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const table_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const UnboundedError& e) {
        std::cerr << "unbounded: " << e.what() << "\n";
        return kExitUnbounded;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
