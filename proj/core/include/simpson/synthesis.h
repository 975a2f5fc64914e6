#ifndef SIMPSON_SYNTHESIS_H_
#define SIMPSON_SYNTHESIS_H_

// Construction of a binary stratifier that reverses a marginal association.
//
// Given a marginal 2x2 table whose conditionals p(x|y), p(x|y') are strictly
// inside (0, 1), the synthesizer splits every cell into a z part and a z' part
// so that both strata show the opposite association from the marginal, each by
// at least a margin epsilon.
//
// The search runs over the stratifier weights u = p(z|y) and v = p(z|y') on a
// dyadic grid that is refined one level at a time. Candidates with small u and
// large v are tried first (for a negative marginal delta; mirrored otherwise),
// since the weights must differ in that direction for a reversal with z as the
// high-recovery stratum. For fixed weights the remaining freedom is the pair
// of stratum conditionals, which is a two-variable linear feasibility problem
// solved exactly.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "simpson/analysis.h"
#include "simpson/tables.h"

namespace simpson {

enum class SplitMode { kFractional, kInteger };

struct SynthesisSpec {
  // Counts or an exact probability table.
  CellCounts marginal;
  // Required strict gap inside each stratum; defaults to 1/100 of the smallest
  // of |delta|, min(p(x|y), p(x|y')) and 1 - max(p(x|y), p(x|y')).
  std::optional<Rational> margin_epsilon;
  // Sign the strata must share; defaults to the opposite of the marginal sign.
  std::optional<Sign> target_direction;
  SplitMode mode = SplitMode::kFractional;
  // Permit a marginal with zero delta (nothing to reverse). The strata are then
  // made to share `target_direction` (positive when unset).
  bool allow_degenerate = false;
  // Finest dyadic level searched; level L uses steps of 2^-L.
  int max_level = 16;
};

struct SynthesisResult {
  StratifiedTable stratified;  // strata "z" and "z'"
  ReversalReport certificate;
  // Fraction of each marginal cell placed in stratum z, in the order
  // success_exposed, failure_exposed, success_unexposed, failure_unexposed.
  std::array<Rational, 4> split_fractions;
  Rational margin_epsilon;
  Sign target_direction = Sign::kPositive;
  int level = 0;  // dyadic level at which the split was found
};

// Resolved epsilon and direction for a spec, validated against the marginal.
struct ResolvedSpec {
  Rational epsilon;
  Sign target;
  Probability exposed;    // p(x|y)
  Probability unexposed;  // p(x|y')
};

ResolvedSpec resolve(const SynthesisSpec& spec);

SynthesisResult synthesize_reverser(const SynthesisSpec& spec);

// Packages an existing two-stratum split of `spec.marginal` as a result,
// computing its certificate and split fractions. Does not check validity.
SynthesisResult certify(const StratifiedTable& stratified, const SynthesisSpec& spec);

struct Verification {
  bool ok = true;
  std::vector<std::string> diagnostics;

  explicit operator bool() const { return ok; }
};

Verification verify(const SynthesisResult& result, const SynthesisSpec& spec);

}  // namespace simpson

#endif  // SIMPSON_SYNTHESIS_H_
