#ifndef SIMPSON_JSON_H_
#define SIMPSON_JSON_H_

// JSON forms of tables and results.
//
// A rational is written as {"num": n, "den": d, "decimal": x}; n and d are
// strings when they do not fit in 64 bits. On input a count or probability
// may be an integer, a string such as "3/10" or "0.25", an object with num
// and den, or a floating-point number (converted to the nearest simple
// fraction within 1e-12).
//
// Table schema:
//   {"stratifier": "Z",
//    "strata": [{"label": "male", "success_exposed": 18, "failure_exposed": 12,
//                "success_unexposed": 7, "failure_unexposed": 3}, ...]}

#include <nlohmann/json.hpp>

#include "simpson/analysis.h"
#include "simpson/figure.h"
#include "simpson/ingest.h"
#include "simpson/mixture.h"
#include "simpson/synthesis.h"
#include "simpson/tables.h"

namespace simpson {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Json to_json(const Probability& p);
Json to_json(const CellCounts& c);
Json to_json(const StratifiedTable& t);
Json to_json(const ReversalReport& r);
Json to_json(const SynthesisResult& r);
Json to_json(const ScanResult& r);
Json to_json(const FigureModel& m);
Json to_json(const Verification& v);

// All throw ParseError on malformed input.
Rational rational_from_json(const Json& j);
CellCounts cell_counts_from_json(const Json& j);
StratifiedTable table_from_json(const Json& j);
// Accepts a table object, or one stratum's cells (an object with the four cell
// fields) as a single 2x2 table.
CellCounts marginal_from_json(const Json& j);

Json parse_json(std::string_view text);

}  // namespace simpson

#endif  // SIMPSON_JSON_H_
