#include "simpson/tables.h"

#include <set>
#include <utility>

namespace simpson {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroMargin: return "ZeroMargin";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kEmptyStratifiedTable: return "EmptyStratifiedTable";
    case ErrorCode::kNotBinaryStratifier: return "NotBinaryStratifier";
    case ErrorCode::kDegenerateSegment: return "DegenerateSegment";
    case ErrorCode::kExtremeDependence: return "ExtremeDependence";
    case ErrorCode::kInfeasibleAtResolution: return "InfeasibleAtResolution";
    case ErrorCode::kDegenerateMarginal: return "DegenerateMarginal";
    case ErrorCode::kPriorNotNormalized: return "PriorNotNormalized";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kNonBinaryValue: return "NonBinaryValue";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kTooManyStrata: return "TooManyStrata";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Probability::Probability(Rational value) : value_(std::move(value)) {
  if (value_ < Rational(0) || value_ > Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "probability " + value_.to_string() + " outside [0, 1]");
  }
}

Sign sign_of(const Rational& r) { return static_cast<Sign>(r.sign()); }

std::string_view sign_name(Sign s) {
  switch (s) {
    case Sign::kNegative: return "negative";
    case Sign::kZero: return "zero";
    case Sign::kPositive: return "positive";
  }
  return "zero";
}

CellCounts::CellCounts(Rational success_exposed, Rational failure_exposed,
                       Rational success_unexposed, Rational failure_unexposed)
    : cells_{std::move(success_exposed), std::move(failure_exposed),
             std::move(success_unexposed), std::move(failure_unexposed)} {
  for (const auto& c : cells_) {
    if (c.sign() < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative cell count " + c.to_string());
    }
  }
}

Rational CellCounts::total() const { return cells_[0] + cells_[1] + cells_[2] + cells_[3]; }

bool CellCounts::is_integral() const {
  for (const auto& c : cells_) {
    if (!c.is_integer()) return false;
  }
  return true;
}

CellCounts CellCounts::relabel_outcome() const {
  return CellCounts(cells_[1], cells_[0], cells_[3], cells_[2]);
}

CellCounts CellCounts::relabel_exposure() const {
  return CellCounts(cells_[2], cells_[3], cells_[0], cells_[1]);
}

CellCounts& CellCounts::operator+=(const CellCounts& rhs) {
  for (int i = 0; i < 4; ++i) cells_[i] += rhs.cells_[i];
  return *this;
}

StratifiedTable::StratifiedTable(std::vector<Stratum> strata, std::string stratifier)
    : strata_(std::move(strata)), stratifier_(std::move(stratifier)) {
  if (strata_.empty()) {
    throw Error(ErrorCode::kEmptyStratifiedTable, "a stratified table needs at least one stratum");
  }
  std::set<std::string_view> seen;
  for (const auto& s : strata_) {
    if (!seen.insert(s.label).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate stratum label '" + s.label + "'");
    }
  }
}

StratifiedTable StratifiedTable::relabel_outcome() const {
  std::vector<Stratum> out;
  out.reserve(strata_.size());
  for (const auto& s : strata_) out.push_back({s.label, s.counts.relabel_outcome()});
  return StratifiedTable(std::move(out), stratifier_);
}

StratifiedTable StratifiedTable::relabel_exposure() const {
  std::vector<Stratum> out;
  out.reserve(strata_.size());
  for (const auto& s : strata_) out.push_back({s.label, s.counts.relabel_exposure()});
  return StratifiedTable(std::move(out), stratifier_);
}

Probability cond_prob(const CellCounts& table, Outcome outcome, Exposure given) {
  const Rational margin = table.margin(given);
  if (margin.is_zero()) {
    throw Error(ErrorCode::kZeroMargin, given == Exposure::kExposed
                                            ? "exposed margin (y) is empty"
                                            : "unexposed margin (y') is empty");
  }
  return Probability(table.cell(outcome, given) / margin);
}

CellCounts pool(const StratifiedTable& stratified) {
  CellCounts out;
  for (const auto& s : stratified.strata()) out += s.counts;
  return out;
}

AssociationMeasure association(const CellCounts& table) {
  Rational delta = cond_prob(table, Outcome::kSuccess, Exposure::kExposed).value() -
                   cond_prob(table, Outcome::kSuccess, Exposure::kUnexposed).value();
  const Sign s = sign_of(delta);
  return {std::move(delta), s};
}

JointDistribution to_joint(const StratifiedTable& stratified) {
  const Rational grand = pool(stratified).total();
  if (grand.is_zero()) throw Error(ErrorCode::kEmptyTable, "grand total is zero");
  JointDistribution joint;
  joint.cells.reserve(stratified.size());
  for (const auto& s : stratified.strata()) {
    std::array<Probability, 4> row;
    for (Outcome x : {Outcome::kSuccess, Outcome::kFailure}) {
      for (Exposure y : {Exposure::kExposed, Exposure::kUnexposed}) {
        row[CellCounts::index(x, y)] = Probability(s.counts.cell(x, y) / grand);
      }
    }
    joint.cells.push_back(std::move(row));
  }
  return joint;
}

}  // namespace simpson
