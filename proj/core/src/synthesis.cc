#include "simpson/synthesis.h"

#include <cstdint>
#include <set>
#include <utility>

namespace simpson {

namespace {

// Upper bound on candidate weight pairs examined before giving up.
constexpr std::int64_t kMaxCandidates = 1 << 22;

struct Split {
  CellCounts z;
  CellCounts z_prime;
  int level;
};

Error infeasible(int level, const std::string& why) {
  return Error(ErrorCode::kInfeasibleAtResolution,
               why + " (finest split attempted: step 1/" + std::to_string(std::int64_t{1} << level) +
                   ", level " + std::to_string(level) + ")");
}

// Stratum conditionals (q1 = p(x|y,z), q2 = p(x|y',z)) for fixed weights
// u = p(z|y), v = p(z|y') such that both strata have delta >= eps and z is
// the higher stratum in both arms. Works in the orientation p1 <= p2.
std::optional<std::pair<Rational, Rational>> solve_for_weights(
    const Rational& p1, const Rational& p2, const Rational& u, const Rational& v,
    const Rational& eps) {
  const Rational one(1);
  const Rational hi1 = min(one, p1 / u);  // keeps p(x|y,z') >= 0
  const Rational one_minus_u = one - u;
  const Rational one_minus_v = one - v;

  // q1 <= B(q2) = b0 + b1 q2 keeps p(x|y,z') - p(x|y',z') >= eps.
  const Rational b1 = one_minus_u * v / (one_minus_v * u);
  const Rational b0 = (p1 - one_minus_u * eps - one_minus_u * p2 / one_minus_v) / u;

  Rational lo = p2;
  Rational hi = min(min(one, p2 / v), hi1 - eps);
  // B(q2) - q2 - eps >= 0
  const Rational slope = b1 - one;
  const Rational offset = b0 - eps;
  if (slope.sign() > 0) {
    lo = max(lo, -offset / slope);
  } else if (slope.sign() < 0) {
    hi = min(hi, -offset / slope);
  } else if (offset.sign() < 0) {
    return std::nullopt;
  }
  if (lo > hi) return std::nullopt;

  Rational q2 = (lo + hi) / Rational(2);
  const Rational q1_lo = q2 + eps;
  const Rational q1_hi = min(hi1, b0 + b1 * q2);
  if (q1_lo > q1_hi) return std::nullopt;
  Rational q1 = (q1_lo + q1_hi) / Rational(2);
  return std::make_pair(std::move(q1), std::move(q2));
}

Split search_fractional(const CellCounts& m, const Rational& p1, const Rational& p2,
                        const Rational& eps, int max_level) {
  const Rational one(1);
  std::int64_t examined = 0;
  for (int level = 1; level <= max_level; ++level) {
    const std::int64_t n = std::int64_t{1} << level;
    for (std::int64_t i = 1; i < n; ++i) {
      const Rational u(i, n);
      for (std::int64_t j = n - 1; j >= 1; --j) {
        if (level > 1 && i % 2 == 0 && j % 2 == 0) continue;  // seen at a coarser level
        if (++examined > kMaxCandidates) {
          throw infeasible(level, "candidate budget exhausted");
        }
        const Rational v(j, n);
        auto sol = solve_for_weights(p1, p2, u, v, eps);
        if (!sol) continue;
        const auto& [q1, q2] = *sol;
        const Rational my = m.margin(Exposure::kExposed);
        const Rational mu = m.margin(Exposure::kUnexposed);
        // Stratum z holds mass u*my in the exposed arm, of which a share q1
        // succeeds; likewise v*mu and q2 in the unexposed arm.
        CellCounts z(u * my * q1, u * my * (one - q1), v * mu * q2, v * mu * (one - q2));
        CellCounts z_prime(m.success_exposed() - z.success_exposed(),
                           m.failure_exposed() - z.failure_exposed(),
                           m.success_unexposed() - z.success_unexposed(),
                           m.failure_unexposed() - z.failure_unexposed());
        return {std::move(z), std::move(z_prime), level};
      }
    }
  }
  throw infeasible(max_level, "no reversing split found");
}

Rational round_half_up(const Rational& x) { return (x + Rational(1, 2)).floor(); }

Split search_integer(const CellCounts& m, const Rational& eps, int max_level) {
  const Rational& a = m.success_exposed();
  const Rational& c = m.success_unexposed();
  const Rational ny = m.margin(Exposure::kExposed);
  const Rational nu = m.margin(Exposure::kUnexposed);
  const Rational one(1);
  if (ny < Rational(2) || nu < Rational(2)) {
    throw infeasible(0, "each exposure arm needs at least two records to split");
  }
  const Rational widest = max(ny, nu);
  std::set<std::pair<Rational, Rational>> tried;
  std::int64_t examined = 0;
  int level = 1;
  for (; level <= max_level; ++level) {
    const std::int64_t n = std::int64_t{1} << level;
    for (std::int64_t i = 1; i < n; ++i) {
      const Rational m1 = max(one, min(ny - one, round_half_up(Rational(i, n) * ny)));
      for (std::int64_t j = n - 1; j >= 1; --j) {
        if (level > 1 && i % 2 == 0 && j % 2 == 0) continue;
        const Rational m2 = max(one, min(nu - one, round_half_up(Rational(j, n) * nu)));
        if (!tried.emplace(m1, m2).second) continue;
        // s2 successes among the m2 unexposed in z; z must be the higher
        // stratum, so s2/m2 >= c/nu.
        Rational s2 = max(max(Rational(0), c - (nu - m2)), (m2 * c / nu).ceil());
        const Rational s2_hi = min(c, m2);
        for (; s2 <= s2_hi; s2 += one) {
          if (++examined > kMaxCandidates) {
            throw infeasible(level, "candidate budget exhausted");
          }
          const Rational s1_lo = max(max((m1 * (eps + s2 / m2)).ceil(), (m1 * a / ny).ceil()),
                                     max(Rational(0), a - (ny - m1)));
          const Rational s1_hi =
              min(min(a, m1), (a - (ny - m1) * (eps + (c - s2) / (nu - m2))).floor());
          if (s1_lo > s1_hi) continue;
          const Rational s1 = ((s1_lo + s1_hi) / Rational(2)).floor();
          CellCounts z(s1, m1 - s1, s2, m2 - s2);
          CellCounts z_prime(a - s1, m.failure_exposed() - (m1 - s1), c - s2,
                             m.failure_unexposed() - (m2 - s2));
          return {std::move(z), std::move(z_prime), level};
        }
      }
    }
    // Every integer split of both arms has been reached.
    if (Rational(n) >= widest) break;
  }
  throw infeasible(std::min(level, max_level), "no integer reversing split found");
}

}  // namespace

ResolvedSpec resolve(const SynthesisSpec& spec) {
  const CellCounts& m = spec.marginal;
  Probability p1 = cond_prob(m, Outcome::kSuccess, Exposure::kExposed);
  Probability p2 = cond_prob(m, Outcome::kSuccess, Exposure::kUnexposed);
  const Rational zero(0), one(1);
  for (const auto* p : {&p1, &p2}) {
    if (p->value() == zero || p->value() == one) {
      throw Error(ErrorCode::kExtremeDependence,
                  std::string(p == &p1 ? "p(x|y)" : "p(x|y')") + " = " + p->value().to_string() +
                      "; both conditionals must lie strictly inside (0, 1)");
    }
  }
  const Rational delta = p1.value() - p2.value();
  if (delta.is_zero() && !spec.allow_degenerate) {
    throw Error(ErrorCode::kDegenerateMarginal,
                "marginal delta is 0; there is no association to reverse");
  }
  if (spec.mode == SplitMode::kInteger && !m.is_integral()) {
    throw Error(ErrorCode::kInvalidArgument, "integer mode needs integer counts");
  }

  Sign target = Sign::kPositive;
  if (!delta.is_zero()) target = delta.sign() < 0 ? Sign::kPositive : Sign::kNegative;
  if (spec.target_direction) {
    if (*spec.target_direction == Sign::kZero) {
      throw Error(ErrorCode::kInvalidArgument, "target direction must be positive or negative");
    }
    if (!delta.is_zero() && *spec.target_direction != target) {
      throw Error(ErrorCode::kInvalidArgument,
                  "target direction must be opposite to the marginal association");
    }
    target = *spec.target_direction;
  }

  Rational eps;
  if (spec.margin_epsilon) {
    eps = *spec.margin_epsilon;
    if (eps.sign() <= 0) throw Error(ErrorCode::kInvalidArgument, "margin epsilon must be > 0");
  } else {
    const Rational low = min(p1.value(), p2.value());
    const Rational high = max(p1.value(), p2.value());
    Rational room = min(low, one - high);
    if (!delta.is_zero()) room = min(room, delta.abs());
    eps = room / Rational(100);
  }
  return {std::move(eps), target, std::move(p1), std::move(p2)};
}

SynthesisResult synthesize_reverser(const SynthesisSpec& spec) {
  const ResolvedSpec r = resolve(spec);
  // Work with strata that must come out positive; a negative target is the
  // same problem with the exposure arms swapped.
  const bool swapped = r.target == Sign::kNegative;
  const CellCounts oriented = swapped ? spec.marginal.relabel_exposure() : spec.marginal;
  const Rational& p1 = swapped ? r.unexposed.value() : r.exposed.value();
  const Rational& p2 = swapped ? r.exposed.value() : r.unexposed.value();

  // Stratum conditionals are bounded by [0, 1] and must straddle the
  // marginals, so the per-stratum gap can never reach p1 or 1 - p2.
  if (r.epsilon >= p1 || r.epsilon >= Rational(1) - p2) {
    throw infeasible(0, "margin epsilon " + r.epsilon.to_string() +
                            " is not attainable for these conditionals");
  }

  Split split = spec.mode == SplitMode::kFractional
                    ? search_fractional(oriented, p1, p2, r.epsilon, spec.max_level)
                    : search_integer(oriented, r.epsilon, spec.max_level);
  if (swapped) {
    split.z = split.z.relabel_exposure();
    split.z_prime = split.z_prime.relabel_exposure();
  }
  StratifiedTable stratified({{"z", std::move(split.z)}, {"z'", std::move(split.z_prime)}}, "Z");
  SynthesisResult result = certify(stratified, spec);
  result.level = split.level;
  return result;
}

SynthesisResult certify(const StratifiedTable& stratified, const SynthesisSpec& spec) {
  if (stratified.size() != 2) {
    throw Error(ErrorCode::kNotBinaryStratifier, "a synthesized stratifier has two strata");
  }
  const ResolvedSpec r = resolve(spec);
  SynthesisResult out{stratified, detect_reversal(stratified), {}, r.epsilon, r.target, 0};
  const CellCounts& z = stratified[0].counts;
  for (Outcome x : {Outcome::kSuccess, Outcome::kFailure}) {
    for (Exposure y : {Exposure::kExposed, Exposure::kUnexposed}) {
      const Rational& whole = spec.marginal.cell(x, y);
      out.split_fractions[CellCounts::index(x, y)] =
          whole.is_zero() ? Rational(0) : z.cell(x, y) / whole;
    }
  }
  return out;
}

Verification verify(const SynthesisResult& result, const SynthesisSpec& spec) {
  Verification v;
  auto fail = [&v](std::string msg) {
    v.ok = false;
    v.diagnostics.push_back(std::move(msg));
  };

  const StratifiedTable& t = result.stratified;
  if (t.size() != 2) {
    fail("expected 2 strata, found " + std::to_string(t.size()));
    return v;
  }
  if (pool(t) != spec.marginal) fail("pooling mismatch: strata do not sum to the marginal");
  if (spec.mode == SplitMode::kInteger && !(t[0].counts.is_integral() && t[1].counts.is_integral())) {
    fail("integer mode produced non-integer counts");
  }

  for (Outcome x : {Outcome::kSuccess, Outcome::kFailure}) {
    for (Exposure y : {Exposure::kExposed, Exposure::kUnexposed}) {
      const int i = CellCounts::index(x, y);
      const Rational& f = result.split_fractions[i];
      if (f.sign() < 0 || f > Rational(1)) fail("split fraction " + std::to_string(i) + " outside [0, 1]");
      if (t[0].counts.cell(x, y) != f * spec.marginal.cell(x, y)) {
        fail("split fraction " + std::to_string(i) + " does not reproduce stratum z");
      }
    }
  }

  ReversalReport recomputed;
  try {
    recomputed = detect_reversal(t);
  } catch (const Error& e) {
    fail(std::string("certificate cannot be recomputed: ") + e.what());
    return v;
  }
  const ReversalReport& cert = result.certificate;
  if (recomputed.reversal != cert.reversal || recomputed.mirror != cert.mirror) {
    fail("certificate mismatch: reversal verdict differs on recomputation");
  }
  if (recomputed.pooled.measure != cert.pooled.measure) {
    fail("certificate mismatch: pooled association differs");
  }
  if (recomputed.per_stratum.size() != cert.per_stratum.size()) {
    fail("certificate mismatch: stratum count differs");
  } else {
    for (std::size_t k = 0; k < cert.per_stratum.size(); ++k) {
      if (recomputed.per_stratum[k].measure != cert.per_stratum[k].measure) {
        fail("certificate mismatch: stratum '" + cert.per_stratum[k].label + "' association differs");
      }
    }
  }
  if (recomputed.weights_u != cert.weights_u || recomputed.weights_v != cert.weights_v) {
    fail("certificate mismatch: weights differ");
  }

  ResolvedSpec r;
  try {
    r = resolve(spec);
  } catch (const Error& e) {
    fail(std::string("synthesis request is not valid: ") + e.what());
    return v;
  }
  const Rational direction(static_cast<int>(r.target));
  for (const auto& s : recomputed.per_stratum) {
    if (direction * s.measure.delta < r.epsilon) {
      fail("stratum '" + s.label + "' delta " + s.measure.delta.to_string() +
           " misses the target side by margin " + r.epsilon.to_string());
    }
  }
  if (!recomputed.pooled.measure.delta.is_zero() && !recomputed.is_reversal()) {
    fail("strata do not reverse the marginal association");
  }
  return v;
}

}  // namespace simpson
