#ifndef SIMPSON_INGEST_H_
#define SIMPSON_INGEST_H_

// Raw records to stratified tables, and the reverse, plus a scan that tries
// each candidate column as the stratifier.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simpson/analysis.h"
#include "simpson/tables.h"

namespace simpson {

struct Records {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws UnknownColumn.
  std::size_t column_index(std::string_view name) const;
};

// Delimiter-separated values with a header row. Fields may be wrapped in double
// quotes; a doubled quote inside a quoted field stands for one quote. Throws
// ParseError on ragged rows or an unterminated quote, EmptyInput without a
// header.
Records parse_dsv(std::string_view text, char delimiter = ',');
Records read_dsv(const std::filesystem::path& path, char delimiter = ',');
std::string write_dsv(const Records& records, char delimiter = ',');

// Fields that are empty or "NA" (surrounding blanks ignored) are missing.
bool is_missing(std::string_view field);

struct ColumnMapping {
  std::string outcome_column;
  std::string exposure_column;
  std::vector<std::string> stratifier_columns;
  std::string success_label;
  std::string exposed_label;
  // When unset, the single other value seen in the column takes this role.
  std::optional<std::string> failure_label;
  std::optional<std::string> unexposed_label;
  std::size_t max_strata = 16;
};

// Conditioning margins below this trigger a warning.
inline constexpr int kSmallMarginThreshold = 30;

struct Aggregation {
  StratifiedTable table;
  std::size_t dropped_missing = 0;  // records with a missing mapped field
  std::vector<std::string> warnings;
};

// Counts records per (outcome, exposure, stratum); strata appear in order of
// first appearance. Throws UnknownColumn, NonBinaryValue, EmptyInput and
// TooManyStrata.
Aggregation aggregate(const Records& records, const ColumnMapping& mapping,
                      std::string_view stratifier_column);

// Column names and value labels used when expanding a table into records.
struct RecordLabels {
  std::string outcome_column = "outcome";
  std::string exposure_column = "exposure";
  std::string stratifier_column;  // empty: the table's stratifier name, else "stratum"
  std::string success = "x";
  std::string failure = "x'";
  std::string exposed = "y";
  std::string unexposed = "y'";
};

// One record per unit of count, stratum by stratum. Requires integer cells and
// at least one record in every stratum (InvalidArgument otherwise).
Records disaggregate(const StratifiedTable& table, const RecordLabels& labels = {});

// Mapping that reads back what `disaggregate` wrote.
ColumnMapping mapping_for(const StratifiedTable& table, const RecordLabels& labels = {});

struct ScanOptions {
  AnalysisOptions analysis;
  // Rank weak reversals together with non-reversals.
  bool strict_only = false;
  // Evaluate candidate columns concurrently.
  bool parallel = true;
};

struct ScanEntry {
  std::string column;
  std::optional<ReversalReport> report;
  std::optional<std::string> skip_reason;
  // |pooled delta - sum_k w_k delta_k| with w_k the stratum share of records.
  std::optional<Rational> confounding_gap;
  std::size_t dropped_missing = 0;
  std::vector<std::string> warnings;
};

struct ScanResult {
  // Strict reversals first, then weak, then none, then skipped columns; ties
  // by descending confounding gap, then column order.
  std::vector<ScanEntry> entries;
};

// Outcome and exposure problems (unknown column, non-binary value, no records)
// throw; per-column problems of a candidate become a skip reason.
ScanResult scan_covariates(const Records& records, const ColumnMapping& mapping,
                           const ScanOptions& options = {});

}  // namespace simpson

#endif  // SIMPSON_INGEST_H_
