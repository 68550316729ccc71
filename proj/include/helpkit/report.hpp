#pragma once
#include <json.hpp>

#include "helpkit/engine.hpp"

namespace helpkit {

using Json = nlohmann::ordered_json;

// Structured reports for every CLI command. The text renderer is a pure
// function of the JSON document: `--format json` output fed back through
// render_text reproduces the text output exactly.

Json report_validate(const CharacterTable& table, const std::string& path,
                     const std::vector<std::string>& warnings);

// Includes every surviving tower with its tuples and exact mu values
// (recomputed through verify on the merged system).
Json report_order(const CharacterTable& table, const std::string& path,
                  const OrderVerdict& verdict);

// One row per (character, l): the (m1, mp, mq) table of Eqs. (3)-(5).
Json report_pq_table(const CharacterTable& table, const std::string& path,
                     long k, const std::vector<CharRef>& selection,
                     const std::vector<long>& ls);

Json report_spectrum(const CharacterTable& table, const std::string& path,
                     const SpectrumReport& rep);

Json report_kimmerle(const CharacterTable& table, const std::string& path,
                     const KimmerleReport& rep);

// The order verdict read as a Zassenhaus-conjecture statement for one order.
Json report_zassenhaus(const CharacterTable& table, const std::string& path,
                       const OrderVerdict& verdict);

std::string render_text(const Json& report);

}  // namespace helpkit
