#include "simpson/analysis.h"

#include <algorithm>
#include <utility>

namespace simpson {

std::string_view reversal_kind_name(ReversalKind kind) {
  switch (kind) {
    case ReversalKind::kNone: return "none";
    case ReversalKind::kWeak: return "weak";
    case ReversalKind::kStrict: return "strict";
  }
  return "none";
}

std::string_view case_label_name(CaseLabel label) {
  switch (label) {
    case CaseLabel::kCase1: return "Case1";
    case CaseLabel::kCase2: return "Case2";
    case CaseLabel::kCase3: return "Case3";
    case CaseLabel::kCase4: return "Case4";
    case CaseLabel::kMixed: return "mixed";
  }
  return "mixed";
}

std::vector<Rational> ReversalReport::weight_gaps() const {
  std::vector<Rational> gaps;
  gaps.reserve(weights_u.size());
  for (std::size_t k = 0; k < weights_u.size(); ++k) {
    gaps.push_back(weights_v[k].value() - weights_u[k].value());
  }
  return gaps;
}

namespace {

struct Conditionals {
  std::string_view label;
  const CellCounts* counts;
  Probability exposed;
  Probability unexposed;
};

void require_stratified(const StratifiedTable& t) {
  if (t.size() < 2) {
    throw Error(ErrorCode::kEmptyStratifiedTable,
                "need at least two strata, got " + std::to_string(t.size()));
  }
}

void require_binary(std::size_t k, const AnalysisOptions& options) {
  if (k != 2 && !(options.interval_conditions_all_strata && k > 2)) {
    throw Error(ErrorCode::kNotBinaryStratifier,
                "interval conditions need exactly two strata, got " + std::to_string(k));
  }
}

Error stratum_zero_margin(std::string_view label, Exposure side) {
  return Error(ErrorCode::kZeroMargin,
               "stratum '" + std::string(label) + "': " +
                   (side == Exposure::kExposed ? "exposed margin (y) is empty"
                                               : "unexposed margin (y') is empty"));
}

std::vector<Conditionals> conditionals_of(const StratifiedTable& t, bool skip_empty,
                                          std::vector<std::string>* skipped) {
  std::vector<Conditionals> out;
  out.reserve(t.size());
  for (const auto& s : t.strata()) {
    const Rational my = s.counts.margin(Exposure::kExposed);
    const Rational mu = s.counts.margin(Exposure::kUnexposed);
    if (my.is_zero() || mu.is_zero()) {
      if (skip_empty) {
        if (skipped) skipped->push_back(s.label);
        continue;
      }
      throw stratum_zero_margin(s.label, my.is_zero() ? Exposure::kExposed : Exposure::kUnexposed);
    }
    out.push_back({s.label, &s.counts,
                   Probability(s.counts.success_exposed() / my),
                   Probability(s.counts.success_unexposed() / mu)});
  }
  return out;
}

// (a, b) = (p(x|y,z) >= p(x|y,z'), p(x|y',z) >= p(x|y',z')).
CaseLabel case_of_pair(const Conditionals& z, const Conditionals& z_prime) {
  const bool a = z.exposed >= z_prime.exposed;
  const bool b = z.unexposed >= z_prime.unexposed;
  if (a && b) return CaseLabel::kCase1;
  if (!a && !b) return CaseLabel::kCase2;
  if (!a) return CaseLabel::kCase3;
  return CaseLabel::kCase4;
}

CaseLabel case_of(const std::vector<Conditionals>& c) {
  CaseLabel label = case_of_pair(c[0], c[1]);
  for (std::size_t k = 1; k + 1 < c.size(); ++k) {
    if (case_of_pair(c[k], c[k + 1]) != label) return CaseLabel::kMixed;
  }
  return label;
}

// Min over strata of p(x|y,z_k) and Max of p(x|y',z_k).
std::pair<Rational, Rational> interval_extremes(const std::vector<Conditionals>& c) {
  Rational min_exposed = c[0].exposed.value();
  Rational max_unexposed = c[0].unexposed.value();
  for (std::size_t k = 1; k < c.size(); ++k) {
    if (c[k].exposed.value() < min_exposed) min_exposed = c[k].exposed.value();
    if (c[k].unexposed.value() > max_unexposed) max_unexposed = c[k].unexposed.value();
  }
  return {std::move(min_exposed), std::move(max_unexposed)};
}

}  // namespace

ReversalReport detect_reversal(const StratifiedTable& stratified, const AnalysisOptions& options) {
  require_stratified(stratified);
  ReversalReport report;
  const auto cond = conditionals_of(stratified, options.skip_zero_margin_strata,
                                    &report.skipped_strata);
  if (cond.size() < 2) {
    throw Error(ErrorCode::kEmptyStratifiedTable,
                "fewer than two strata with defined conditionals");
  }

  CellCounts pooled;
  for (const auto& c : cond) pooled += *c.counts;
  const Rational pooled_my = pooled.margin(Exposure::kExposed);
  const Rational pooled_mu = pooled.margin(Exposure::kUnexposed);

  bool all_ge = true, all_gt = true, all_le = true, all_lt = true;
  report.per_stratum.reserve(cond.size());
  report.weights_u.reserve(cond.size());
  report.weights_v.reserve(cond.size());
  for (const auto& c : cond) {
    Rational delta = c.exposed.value() - c.unexposed.value();
    const Sign s = sign_of(delta);
    all_ge = all_ge && s != Sign::kNegative;
    all_gt = all_gt && s == Sign::kPositive;
    all_le = all_le && s != Sign::kPositive;
    all_lt = all_lt && s == Sign::kNegative;
    report.per_stratum.push_back(
        {std::string(c.label), c.exposed, c.unexposed, {std::move(delta), s}});
    report.weights_u.emplace_back(c.counts->margin(Exposure::kExposed) / pooled_my);
    report.weights_v.emplace_back(c.counts->margin(Exposure::kUnexposed) / pooled_mu);
  }

  Probability p_exposed(pooled.success_exposed() / pooled_my);
  Probability p_unexposed(pooled.success_unexposed() / pooled_mu);
  Rational pooled_delta = p_exposed.value() - p_unexposed.value();
  const Sign pooled_sign = sign_of(pooled_delta);
  report.pooled = {"pooled", std::move(p_exposed), std::move(p_unexposed),
                   {std::move(pooled_delta), pooled_sign}};

  if (pooled_sign == Sign::kNegative && all_ge) {
    report.reversal = all_gt ? ReversalKind::kStrict : ReversalKind::kWeak;
  } else if (pooled_sign == Sign::kPositive && all_le) {
    report.reversal = all_lt ? ReversalKind::kStrict : ReversalKind::kWeak;
    report.mirror = true;
  }

  if (cond.size() == 2 || options.interval_conditions_all_strata) {
    const auto [min_exposed, max_unexposed] = interval_extremes(cond);
    report.necessary_condition_holds = min_exposed < max_unexposed;
    report.sufficient_avoidance_holds = min_exposed >= max_unexposed;
  }
  report.case_label = case_of(cond);
  return report;
}

bool check_necessary_condition(const StratifiedTable& stratified, const AnalysisOptions& options) {
  require_binary(stratified.size(), options);
  const auto cond = conditionals_of(stratified, false, nullptr);
  const auto [min_exposed, max_unexposed] = interval_extremes(cond);
  return min_exposed < max_unexposed;
}

bool check_sufficient_avoidance(const StratifiedTable& stratified, const AnalysisOptions& options) {
  return !check_necessary_condition(stratified, options);
}

Dissection dissection(const StratifiedTable& stratified, Exposure side) {
  require_binary(stratified.size(), {});
  const CellCounts& z = stratified[0].counts;
  const CellCounts& z_prime = stratified[1].counts;
  const Rational m_z = z.margin(side);
  const Rational m_zp = z_prime.margin(side);
  if (m_z.is_zero()) throw stratum_zero_margin(stratified[0].label, side);
  if (m_zp.is_zero()) throw stratum_zero_margin(stratified[1].label, side);
  const Rational q = z.cell(Outcome::kSuccess, side) / m_z;
  const Rational r = z_prime.cell(Outcome::kSuccess, side) / m_zp;
  if (q == r) {
    throw Error(ErrorCode::kDegenerateSegment,
                "p(x|" + std::string(side == Exposure::kExposed ? "y" : "y'") +
                    ",z) equals p(x|" + std::string(side == Exposure::kExposed ? "y" : "y'") +
                    ",z') = " + q.to_string() + "; the segment has zero length");
  }
  const Rational p = (z.cell(Outcome::kSuccess, side) + z_prime.cell(Outcome::kSuccess, side)) /
                     (m_z + m_zp);
  return {p - r, q - p};
}

CaseLabel classify_case(const StratifiedTable& stratified) {
  require_stratified(stratified);
  return case_of(conditionals_of(stratified, false, nullptr));
}

IndependenceGap independence_gap(const StratifiedTable& stratified) {
  const CellCounts pooled = pool(stratified);
  const Rational grand = pooled.total();
  if (grand.is_zero()) throw Error(ErrorCode::kEmptyTable, "grand total is zero");

  auto gap = [](const CellCounts& t, const Rational& n) {
    const Rational p_xy = t.success_exposed() / n;
    const Rational p_x = t.outcome_total(Outcome::kSuccess) / n;
    const Rational p_y = t.margin(Exposure::kExposed) / n;
    return p_xy - p_x * p_y;
  };

  IndependenceGap out;
  out.marginal = gap(pooled, grand);
  out.conditional.reserve(stratified.size());
  for (const auto& s : stratified.strata()) {
    const Rational n = s.counts.total();
    if (n.is_zero()) {
      throw Error(ErrorCode::kZeroMargin, "stratum '" + s.label + "' is empty");
    }
    out.conditional.push_back(gap(s.counts, n));
  }
  return out;
}

Rational dependence_lower_bound(const StratifiedTable& stratified) {
  const CellCounts pooled = pool(stratified);
  const Rational grand = pooled.total();
  if (grand.is_zero()) throw Error(ErrorCode::kEmptyTable, "grand total is zero");
  const Rational p_x = pooled.outcome_total(Outcome::kSuccess) / grand;
  const Rational p_y = pooled.margin(Exposure::kExposed) / grand;
  Rational bound = p_x * p_y;
  const auto strata = stratified.strata();
  for (std::size_t j = 0; j < strata.size(); ++j) {
    const Rational p_xz = strata[j].counts.outcome_total(Outcome::kSuccess) / grand;
    for (std::size_t k = 0; k < strata.size(); ++k) {
      if (j == k) continue;
      bound -= p_xz * (strata[k].counts.margin(Exposure::kExposed) / grand);
    }
  }
  return bound;
}

}  // namespace simpson
