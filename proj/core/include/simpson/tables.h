#ifndef SIMPSON_TABLES_H_
#define SIMPSON_TABLES_H_

// Exact 2x2 and 2x2xK count tables over an outcome X (success x / failure x')
// and an exposure Y (exposed y / unexposed y'), stratified by a variable Z.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "simpson/error.h"
#include "simpson/rational.h"

namespace simpson {

enum class Outcome { kSuccess, kFailure };
enum class Exposure { kExposed, kUnexposed };

inline Exposure other(Exposure e) {
  return e == Exposure::kExposed ? Exposure::kUnexposed : Exposure::kExposed;
}

// A rational in [0, 1].
class Probability {
 public:
  Probability() = default;
  explicit Probability(Rational value);
  Probability(std::int64_t num, std::int64_t den) : Probability(Rational(num, den)) {}

  const Rational& value() const { return value_; }
  double to_double() const { return value_.to_double(); }
  Probability complement() const { return Probability(Rational(1) - value_); }

  friend bool operator==(const Probability&, const Probability&) = default;
  friend auto operator<=>(const Probability& a, const Probability& b) {
    return a.value_ <=> b.value_;
  }

 private:
  Rational value_;
};

enum class Sign { kNegative = -1, kZero = 0, kPositive = 1 };

Sign sign_of(const Rational& r);
std::string_view sign_name(Sign s);

// Risk difference p(x|y) - p(x|y') together with its exact sign.
struct AssociationMeasure {
  Rational delta;
  Sign sign = Sign::kZero;

  friend bool operator==(const AssociationMeasure&, const AssociationMeasure&) = default;
};

// One 2x2 table. Cells hold nonnegative exact masses: integer counts for
// observed data, arbitrary nonnegative rationals for probability tables and
// fractional splits.
class CellCounts {
 public:
  CellCounts() = default;
  CellCounts(Rational success_exposed, Rational failure_exposed,
             Rational success_unexposed, Rational failure_unexposed);

  const Rational& success_exposed() const { return cells_[0]; }
  const Rational& failure_exposed() const { return cells_[1]; }
  const Rational& success_unexposed() const { return cells_[2]; }
  const Rational& failure_unexposed() const { return cells_[3]; }

  const Rational& cell(Outcome x, Exposure y) const { return cells_[index(x, y)]; }

  Rational margin(Exposure y) const { return cell(Outcome::kSuccess, y) + cell(Outcome::kFailure, y); }
  Rational outcome_total(Outcome x) const {
    return cell(x, Exposure::kExposed) + cell(x, Exposure::kUnexposed);
  }
  Rational total() const;
  bool is_integral() const;

  // Success/failure swapped, i.e. x <-> x'.
  CellCounts relabel_outcome() const;
  // Exposed/unexposed swapped, i.e. y <-> y'.
  CellCounts relabel_exposure() const;

  CellCounts& operator+=(const CellCounts& rhs);
  friend CellCounts operator+(CellCounts lhs, const CellCounts& rhs) { return lhs += rhs; }
  friend bool operator==(const CellCounts&, const CellCounts&) = default;

  static constexpr int index(Outcome x, Exposure y) {
    return (y == Exposure::kExposed ? 0 : 2) + (x == Outcome::kSuccess ? 0 : 1);
  }

 private:
  Rational cells_[4];
};

struct Stratum {
  std::string label;
  CellCounts counts;

  friend bool operator==(const Stratum&, const Stratum&) = default;
};

// Ordered, uniquely labelled strata of one stratifier. Construction accepts a
// single stratum so raw aggregation can report what it saw; every analysis
// that needs a stratified comparison rejects K < 2.
class StratifiedTable {
 public:
  StratifiedTable() = default;
  explicit StratifiedTable(std::vector<Stratum> strata, std::string stratifier = {});

  std::span<const Stratum> strata() const { return strata_; }
  std::size_t size() const { return strata_.size(); }
  const Stratum& operator[](std::size_t k) const { return strata_[k]; }
  const std::string& stratifier() const { return stratifier_; }

  StratifiedTable relabel_outcome() const;
  StratifiedTable relabel_exposure() const;

  friend bool operator==(const StratifiedTable&, const StratifiedTable&) = default;

 private:
  std::vector<Stratum> strata_;
  std::string stratifier_;
};

// p(outcome | given); throws ZeroMargin when the conditioning margin is empty.
Probability cond_prob(const CellCounts& table, Outcome outcome, Exposure given);

CellCounts pool(const StratifiedTable& stratified);

AssociationMeasure association(const CellCounts& table);

// Joint distribution p(x, y, z_k) normalized by the grand total.
struct JointDistribution {
  // cells[k][CellCounts::index(x, y)]
  std::vector<std::array<Probability, 4>> cells;

  const Probability& at(std::size_t stratum, Outcome x, Exposure y) const {
    return cells[stratum][CellCounts::index(x, y)];
  }
};

JointDistribution to_joint(const StratifiedTable& stratified);

}  // namespace simpson

#endif  // SIMPSON_TABLES_H_
