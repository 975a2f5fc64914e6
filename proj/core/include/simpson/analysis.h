#ifndef SIMPSON_ANALYSIS_H_
#define SIMPSON_ANALYSIS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simpson/tables.h"

namespace simpson {

enum class ReversalKind { kNone, kWeak, kStrict };
enum class CaseLabel { kCase1, kCase2, kCase3, kCase4, kMixed };

std::string_view reversal_kind_name(ReversalKind kind);
std::string_view case_label_name(CaseLabel label);

struct AnalysisOptions {
  // Drop strata whose exposed or unexposed margin is empty instead of
  // failing; dropped labels are listed in the report.
  bool skip_zero_margin_strata = false;
  // Evaluate the interval conditions with Min/Max over all strata when K > 2.
  // Off by default: the conditions are only established for a binary Z.
  bool interval_conditions_all_strata = false;
};

struct StratumAssociation {
  std::string label;
  Probability exposed;    // p(x | y, z_k)
  Probability unexposed;  // p(x | y', z_k)
  AssociationMeasure measure;
};

struct ReversalReport {
  std::vector<StratumAssociation> per_stratum;
  StratumAssociation pooled;

  // Weak: every stratum delta >= 0 and the pooled delta < 0. Strict: every
  // stratum delta > 0. When `mirror` is set the same holds with all signs
  // flipped (strata <= 0, pooled > 0).
  ReversalKind reversal = ReversalKind::kNone;
  bool mirror = false;

  // Interval conditions; empty when K > 2 and the all-strata extension is off.
  std::optional<bool> necessary_condition_holds;
  std::optional<bool> sufficient_avoidance_holds;

  CaseLabel case_label = CaseLabel::kCase1;

  std::vector<Probability> weights_u;  // p(z_k | y)
  std::vector<Probability> weights_v;  // p(z_k | y')

  std::vector<std::string> skipped_strata;

  bool is_reversal() const { return reversal != ReversalKind::kNone; }
  // v_k - u_k for each stratum.
  std::vector<Rational> weight_gaps() const;
};

ReversalReport detect_reversal(const StratifiedTable& stratified, const AnalysisOptions& options = {});

// Min_k p(x|y,z_k) < Max_k p(x|y',z_k): the exposed and unexposed intervals
// overlap in the direction a reversal needs.
bool check_necessary_condition(const StratifiedTable& stratified, const AnalysisOptions& options = {});

// Min_k p(x|y,z_k) >= Max_k p(x|y',z_k); guarantees no reversal.
bool check_sufficient_avoidance(const StratifiedTable& stratified, const AnalysisOptions& options = {});

// How the marginal p(x|side) cuts the segment between p(x|side,z') and
// p(x|side,z) (z is the first stratum): left = p(x|side) - p(x|side,z'),
// right = p(x|side,z) - p(x|side). left : right equals p(z|side) : p(z'|side).
struct Dissection {
  Rational left;
  Rational right;

  Rational ratio() const { return left / right; }
};

Dissection dissection(const StratifiedTable& stratified, Exposure side);

// Orders the conditionals within each exposure arm. Ties count as the weak
// ">=" ordering. With K > 2 every adjacent pair of strata is classified and
// disagreement yields kMixed.
CaseLabel classify_case(const StratifiedTable& stratified);

struct IndependenceGap {
  Rational marginal;                 // p(x,y) - p(x)p(y)
  std::vector<Rational> conditional;  // p(x,y|z_k) - p(x|z_k)p(y|z_k)
};

IndependenceGap independence_gap(const StratifiedTable& stratified);

// p(x)p(y) - sum_{j != k} p(x,z_j) p(y,z_k). Whenever every conditional gap is
// nonnegative, p(x,y) is at least this value.
Rational dependence_lower_bound(const StratifiedTable& stratified);

}  // namespace simpson

#endif  // SIMPSON_ANALYSIS_H_
