#include "simpson/ingest.h"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <unordered_map>

namespace simpson {

std::size_t Records::column_index(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw Error(ErrorCode::kUnknownColumn, "no column named '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

Records parse_dsv(std::string_view text, char delimiter) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line_no = 1;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // Skip blank lines.
    if (!(row.size() == 1 && row[0].empty())) lines.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      end_row();
      ++line_no;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParseError, "unterminated quote at line " + std::to_string(line_no));
  }
  if (!field.empty() && field.back() == '\r') field.pop_back();
  if (!field.empty() || !row.empty()) end_row();

  if (lines.empty()) throw Error(ErrorCode::kEmptyInput, "input has no header row");
  Records records;
  records.header = std::move(lines.front());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != records.header.size()) {
      throw Error(ErrorCode::kParseError,
                  "record " + std::to_string(r) + " has " + std::to_string(lines[r].size()) +
                      " fields, header has " + std::to_string(records.header.size()));
    }
    records.rows.push_back(std::move(lines[r]));
  }
  return records;
}

Records read_dsv(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dsv(buffer.str(), delimiter);
}

std::string write_dsv(const Records& records, char delimiter) {
  std::string out;
  auto put_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += delimiter;
      const std::string& f = row[i];
      if (f.find_first_of(std::string("\"\r\n") + delimiter) == std::string::npos) {
        out += f;
        continue;
      }
      out += '"';
      for (char c : f) {
        if (c == '"') out += '"';
        out += c;
      }
      out += '"';
    }
    out += '\n';
  };
  put_row(records.header);
  for (const auto& row : records.rows) put_row(row);
  return out;
}

bool is_missing(std::string_view field) {
  const auto first = field.find_first_not_of(" \t");
  if (first == std::string_view::npos) return true;
  const auto last = field.find_last_not_of(" \t");
  return field.substr(first, last - first + 1) == "NA";
}

namespace {

// Assigns each value of a two-valued column to the named label or its
// counterpart, rejecting a third value.
class BinaryColumn {
 public:
  BinaryColumn(std::string column, std::string positive, std::optional<std::string> negative)
      : column_(std::move(column)), positive_(std::move(positive)), negative_(std::move(negative)) {}

  bool is_positive(const std::string& value) {
    if (value == positive_) return true;
    if (!negative_) {
      negative_ = value;
      return false;
    }
    if (value == *negative_) return false;
    throw Error(ErrorCode::kNonBinaryValue,
                "column '" + column_ + "' has value '" + value + "' besides '" + positive_ +
                    "' and '" + *negative_ + "'");
  }

 private:
  std::string column_;
  std::string positive_;
  std::optional<std::string> negative_;
};

struct MappedColumns {
  std::size_t outcome;
  std::size_t exposure;
};

MappedColumns locate(const Records& records, const ColumnMapping& mapping) {
  return {records.column_index(mapping.outcome_column),
          records.column_index(mapping.exposure_column)};
}

// Outcome and exposure checks that do not depend on the stratifier.
void validate_arms(const Records& records, const ColumnMapping& mapping) {
  if (records.rows.empty()) throw Error(ErrorCode::kEmptyInput, "no records");
  const auto cols = locate(records, mapping);
  BinaryColumn outcome(mapping.outcome_column, mapping.success_label, mapping.failure_label);
  BinaryColumn exposure(mapping.exposure_column, mapping.exposed_label, mapping.unexposed_label);
  for (const auto& row : records.rows) {
    if (!is_missing(row[cols.outcome])) outcome.is_positive(row[cols.outcome]);
    if (!is_missing(row[cols.exposure])) exposure.is_positive(row[cols.exposure]);
  }
}

}  // namespace

Aggregation aggregate(const Records& records, const ColumnMapping& mapping,
                      std::string_view stratifier_column) {
  const auto cols = locate(records, mapping);
  const std::size_t z_col = records.column_index(stratifier_column);
  if (records.rows.empty()) throw Error(ErrorCode::kEmptyInput, "no records");

  BinaryColumn outcome(mapping.outcome_column, mapping.success_label, mapping.failure_label);
  BinaryColumn exposure(mapping.exposure_column, mapping.exposed_label, mapping.unexposed_label);

  Aggregation result;
  std::vector<std::string> labels;
  std::vector<std::array<std::int64_t, 4>> counts;
  std::unordered_map<std::string, std::size_t> index;

  for (const auto& row : records.rows) {
    const std::string& xv = row[cols.outcome];
    const std::string& yv = row[cols.exposure];
    const std::string& zv = row[z_col];
    if (is_missing(xv) || is_missing(yv) || is_missing(zv)) {
      ++result.dropped_missing;
      continue;
    }
    const Outcome x = outcome.is_positive(xv) ? Outcome::kSuccess : Outcome::kFailure;
    const Exposure y = exposure.is_positive(yv) ? Exposure::kExposed : Exposure::kUnexposed;
    auto [it, inserted] = index.try_emplace(zv, labels.size());
    if (inserted) {
      if (labels.size() == mapping.max_strata) {
        throw Error(ErrorCode::kTooManyStrata,
                    "column '" + std::string(stratifier_column) + "' has more than " +
                        std::to_string(mapping.max_strata) + " distinct values");
      }
      labels.push_back(zv);
      counts.push_back({0, 0, 0, 0});
    }
    ++counts[it->second][CellCounts::index(x, y)];
  }
  if (labels.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "every record has a missing value in a mapped column");
  }

  std::vector<Stratum> strata;
  strata.reserve(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& c = counts[k];
    strata.push_back({labels[k], CellCounts(c[0], c[1], c[2], c[3])});
    for (Exposure side : {Exposure::kExposed, Exposure::kUnexposed}) {
      const std::int64_t m = side == Exposure::kExposed ? c[0] + c[1] : c[2] + c[3];
      if (m < kSmallMarginThreshold) {
        result.warnings.push_back("stratum '" + labels[k] + "': " +
                                  (side == Exposure::kExposed ? "exposed" : "unexposed") +
                                  " margin " + std::to_string(m) + " is below " +
                                  std::to_string(kSmallMarginThreshold));
      }
    }
  }
  result.table = StratifiedTable(std::move(strata), std::string(stratifier_column));
  return result;
}

namespace {

std::string stratifier_column_of(const StratifiedTable& table, const RecordLabels& labels) {
  if (!labels.stratifier_column.empty()) return labels.stratifier_column;
  return table.stratifier().empty() ? "stratum" : table.stratifier();
}

}  // namespace

Records disaggregate(const StratifiedTable& table, const RecordLabels& labels) {
  Records records;
  records.header = {labels.outcome_column, labels.exposure_column,
                    stratifier_column_of(table, labels)};
  for (const auto& s : table.strata()) {
    if (!s.counts.is_integral()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stratum '" + s.label + "' has non-integer cells; records need counts");
    }
    if (s.counts.total().is_zero()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stratum '" + s.label + "' is empty and would vanish from the records");
    }
    for (Exposure y : {Exposure::kExposed, Exposure::kUnexposed}) {
      for (Outcome x : {Outcome::kSuccess, Outcome::kFailure}) {
        const std::int64_t n = s.counts.cell(x, y).num_int64();
        for (std::int64_t i = 0; i < n; ++i) {
          records.rows.push_back({x == Outcome::kSuccess ? labels.success : labels.failure,
                                  y == Exposure::kExposed ? labels.exposed : labels.unexposed,
                                  s.label});
        }
      }
    }
  }
  return records;
}

ColumnMapping mapping_for(const StratifiedTable& table, const RecordLabels& labels) {
  ColumnMapping m;
  m.outcome_column = labels.outcome_column;
  m.exposure_column = labels.exposure_column;
  m.stratifier_columns = {stratifier_column_of(table, labels)};
  m.success_label = labels.success;
  m.exposed_label = labels.exposed;
  m.failure_label = labels.failure;
  m.unexposed_label = labels.unexposed;
  m.max_strata = std::max<std::size_t>(m.max_strata, table.size());
  return m;
}

namespace {

Rational confounding_gap(const ReversalReport& report, const StratifiedTable& table) {
  // Weights are the record shares of the retained strata.
  Rational grand;
  Rational weighted;
  for (const auto& assoc : report.per_stratum) {
    for (const auto& s : table.strata()) {
      if (s.label != assoc.label) continue;
      const Rational n = s.counts.total();
      grand += n;
      weighted += n * assoc.measure.delta;
      break;
    }
  }
  return (report.pooled.measure.delta - weighted / grand).abs();
}

ScanEntry scan_one(const Records& records, const ColumnMapping& mapping, const std::string& column,
                   const AnalysisOptions& options) {
  ScanEntry entry;
  entry.column = column;
  Aggregation agg;
  try {
    agg = aggregate(records, mapping, column);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTooManyStrata && e.code() != ErrorCode::kEmptyInput) throw;
    entry.skip_reason = e.what();
    return entry;
  }
  entry.dropped_missing = agg.dropped_missing;
  entry.warnings = std::move(agg.warnings);
  try {
    entry.report = detect_reversal(agg.table, options);
    entry.confounding_gap = confounding_gap(*entry.report, agg.table);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroMargin && e.code() != ErrorCode::kEmptyStratifiedTable) throw;
    entry.skip_reason = e.what();
  }
  return entry;
}

int rank_of(const ScanEntry& e, bool strict_only) {
  if (!e.report) return 3;
  switch (e.report->reversal) {
    case ReversalKind::kStrict: return 0;
    case ReversalKind::kWeak: return strict_only ? 2 : 1;
    case ReversalKind::kNone: return 2;
  }
  return 2;
}

}  // namespace

ScanResult scan_covariates(const Records& records, const ColumnMapping& mapping,
                           const ScanOptions& options) {
  ScanResult result;
  if (mapping.stratifier_columns.empty()) return result;
  validate_arms(records, mapping);
  for (const auto& column : mapping.stratifier_columns) records.column_index(column);

  result.entries.reserve(mapping.stratifier_columns.size());
  if (options.parallel && mapping.stratifier_columns.size() > 1) {
    std::vector<std::future<ScanEntry>> pending;
    pending.reserve(mapping.stratifier_columns.size());
    for (const auto& column : mapping.stratifier_columns) {
      pending.push_back(std::async(std::launch::async, scan_one, std::cref(records),
                                   std::cref(mapping), std::cref(column),
                                   std::cref(options.analysis)));
    }
    for (auto& f : pending) result.entries.push_back(f.get());
  } else {
    for (const auto& column : mapping.stratifier_columns) {
      result.entries.push_back(scan_one(records, mapping, column, options.analysis));
    }
  }

  std::stable_sort(result.entries.begin(), result.entries.end(),
                   [&](const ScanEntry& a, const ScanEntry& b) {
                     const int ra = rank_of(a, options.strict_only);
                     const int rb = rank_of(b, options.strict_only);
                     if (ra != rb) return ra < rb;
                     if (a.confounding_gap && b.confounding_gap) {
                       return *a.confounding_gap > *b.confounding_gap;
                     }
                     return false;
                   });
  return result;
}

}  // namespace simpson
