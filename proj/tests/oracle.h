#ifndef SIMPSON_TESTS_ORACLE_H_
#define SIMPSON_TESTS_ORACLE_H_

// Brute-force reference checks on small integer tables. Everything here works
// on raw int64 counts with cross-multiplication and never calls the library,
// so it can serve as an independent oracle.

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "simpson/analysis.h"
#include "simpson/tables.h"

namespace oracle {

// Cells in the order success_exposed, failure_exposed, success_unexposed,
// failure_unexposed.
using Cells = std::array<std::int64_t, 4>;
__extension__ typedef __int128 Wide;

inline int sgn(Wide v) { return (v > 0) - (v < 0); }

// Fraction n/d with d > 0.
struct Frac {
  std::int64_t n;
  std::int64_t d;
};

inline int compare(Frac a, Frac b) { return sgn(Wide{a.n} * b.d - Wide{b.n} * a.d); }

inline Frac exposed_rate(const Cells& c) { return {c[0], c[0] + c[1]}; }
inline Frac unexposed_rate(const Cells& c) { return {c[2], c[2] + c[3]}; }

inline bool defined(const Cells& c) { return c[0] + c[1] > 0 && c[2] + c[3] > 0; }

// Sign of p(x|y) - p(x|y').
inline int delta_sign(const Cells& c) { return compare(exposed_rate(c), unexposed_rate(c)); }

inline Cells add(const Cells& a, const Cells& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

enum class Kind { kNone, kWeak, kStrict };

struct Verdict {
  Kind kind = Kind::kNone;
  bool mirror = false;
};

// Inequalities (stratum deltas vs pooled delta) evaluated directly.
inline Verdict reversal(const std::vector<Cells>& strata) {
  Cells pooled{0, 0, 0, 0};
  bool all_ge = true, all_gt = true, all_le = true, all_lt = true;
  for (const auto& s : strata) {
    pooled = add(pooled, s);
    const int d = delta_sign(s);
    all_ge = all_ge && d >= 0;
    all_gt = all_gt && d > 0;
    all_le = all_le && d <= 0;
    all_lt = all_lt && d < 0;
  }
  const int p = delta_sign(pooled);
  if (p < 0 && all_ge) return {all_gt ? Kind::kStrict : Kind::kWeak, false};
  if (p > 0 && all_le) return {all_lt ? Kind::kStrict : Kind::kWeak, true};
  return {};
}

// Min_k p(x|y,z_k) < Max_k p(x|y',z_k).
inline bool necessary(const std::vector<Cells>& strata) {
  Frac lo = exposed_rate(strata[0]);
  Frac hi = unexposed_rate(strata[0]);
  for (const auto& s : strata) {
    if (compare(exposed_rate(s), lo) < 0) lo = exposed_rate(s);
    if (compare(unexposed_rate(s), hi) > 0) hi = unexposed_rate(s);
  }
  return compare(lo, hi) < 0;
}

// 0..3 for Case1..Case4 on a pair of strata.
inline int case_index(const Cells& z, const Cells& zp) {
  const bool a = compare(exposed_rate(z), exposed_rate(zp)) >= 0;
  const bool b = compare(unexposed_rate(z), unexposed_rate(zp)) >= 0;
  if (a && b) return 0;
  if (!a && !b) return 1;
  if (!a) return 2;
  return 3;
}

// n * p(x,y|z) - p(x|z) p(y|z) * n, scaled by n^2: n*a - (a+c)(a+b).
inline std::int64_t conditional_gap_scaled(const Cells& c) {
  const std::int64_t n = c[0] + c[1] + c[2] + c[3];
  return n * c[0] - (c[0] + c[2]) * (c[0] + c[1]);
}

// p(x,y) - [p(x)p(y) - sum_{j != k} p(x,z_j) p(y,z_k)], scaled by N^2.
inline Wide dependence_slack_scaled(const std::vector<Cells>& strata) {
  std::int64_t grand = 0, xy = 0, x = 0, y = 0;
  for (const auto& s : strata) {
    grand += s[0] + s[1] + s[2] + s[3];
    xy += s[0];
    x += s[0] + s[2];
    y += s[0] + s[1];
  }
  Wide cross = 0;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    for (std::size_t k = 0; k < strata.size(); ++k) {
      if (j != k) cross += Wide{strata[j][0] + strata[j][2]} * (strata[k][0] + strata[k][1]);
    }
  }
  return Wide{xy} * grand - (Wide{x} * y - cross);
}

inline simpson::StratifiedTable to_table(const std::vector<Cells>& strata) {
  std::vector<simpson::Stratum> out;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    const auto& c = strata[k];
    out.push_back({"s" + std::to_string(k), simpson::CellCounts(c[0], c[1], c[2], c[3])});
  }
  return simpson::StratifiedTable(std::move(out), "Z");
}

// Random 2x2 table whose four cells sum to at most `max_total`.
inline Cells random_cells(std::mt19937_64& rng, std::int64_t max_total) {
  std::uniform_int_distribution<std::int64_t> total_dist(0, max_total);
  const std::int64_t total = total_dist(rng);
  // Three cut points in [0, total].
  std::uniform_int_distribution<std::int64_t> cut(0, total);
  std::array<std::int64_t, 3> cuts{cut(rng), cut(rng), cut(rng)};
  std::sort(cuts.begin(), cuts.end());
  return {cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1], total - cuts[2]};
}

inline simpson::ReversalKind to_kind(Kind k) {
  switch (k) {
    case Kind::kNone: return simpson::ReversalKind::kNone;
    case Kind::kWeak: return simpson::ReversalKind::kWeak;
    case Kind::kStrict: return simpson::ReversalKind::kStrict;
  }
  return simpson::ReversalKind::kNone;
}

}  // namespace oracle

#endif  // SIMPSON_TESTS_ORACLE_H_
