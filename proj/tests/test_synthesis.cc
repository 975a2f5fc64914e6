#include <gtest/gtest.h>

#include <random>

#include "simpson/synthesis.h"

namespace simpson {
namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

void expect_valid(const SynthesisResult& result, const SynthesisSpec& spec) {
  const Verification v = verify(result, spec);
  EXPECT_TRUE(v.ok) << (v.diagnostics.empty() ? "" : v.diagnostics.front());
  EXPECT_EQ(pool(result.stratified), spec.marginal);
  EXPECT_TRUE(result.certificate.is_reversal());
}

TEST(SynthesisTest, RecoveryExampleMarginalFractional) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  const SynthesisResult r = synthesize_reverser(spec);
  expect_valid(r, spec);
  EXPECT_EQ(r.target_direction, Sign::kPositive);
  EXPECT_FALSE(r.certificate.mirror);
  // Default epsilon: |delta| / 100 = 1/1000 is the binding term here.
  EXPECT_EQ(r.margin_epsilon, Rational(1, 1000));
  for (const auto& s : r.certificate.per_stratum) EXPECT_GE(s.measure.delta, r.margin_epsilon);
}

TEST(SynthesisTest, PositiveMarginalIsReversedDownwards) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(30, 10, 10, 30);
  const SynthesisResult r = synthesize_reverser(spec);
  expect_valid(r, spec);
  EXPECT_EQ(r.target_direction, Sign::kNegative);
  EXPECT_TRUE(r.certificate.mirror);
}

TEST(SynthesisTest, IntegerModeKeepsCounts) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  spec.mode = SplitMode::kInteger;
  const SynthesisResult r = synthesize_reverser(spec);
  expect_valid(r, spec);
  EXPECT_TRUE(r.stratified[0].counts.is_integral());
  EXPECT_TRUE(r.stratified[1].counts.is_integral());
}

TEST(SynthesisTest, IntegerModeFailsOnTinyTables) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(1, 1, 1, 2);
  spec.mode = SplitMode::kInteger;
  try {
    synthesize_reverser(spec);
    FAIL() << "expected InfeasibleAtResolution";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleAtResolution);
    EXPECT_NE(std::string(e.what()).find("finest split attempted"), std::string::npos);
  }
}

TEST(SynthesisTest, ProbabilityTableInput) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(Rational(1, 5), Rational(3, 10), Rational(1, 4), Rational(1, 4));
  const SynthesisResult r = synthesize_reverser(spec);
  expect_valid(r, spec);
}

TEST(SynthesisTest, ExplicitEpsilonAndTarget) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  spec.margin_epsilon = Rational(1, 20);
  spec.target_direction = Sign::kPositive;
  const SynthesisResult r = synthesize_reverser(spec);
  expect_valid(r, spec);
  for (const auto& s : r.certificate.per_stratum) EXPECT_GE(s.measure.delta, Rational(1, 20));

  spec.target_direction = Sign::kNegative;
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kInvalidArgument);
}

TEST(SynthesisTest, UnattainableEpsilonIsInfeasible) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  spec.margin_epsilon = Rational(1, 2);  // p(x|y') = 1/2 leaves no room
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kInfeasibleAtResolution);
}

TEST(SynthesisTest, InputValidation) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(0, 5, 3, 2);
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kExtremeDependence);
  spec.marginal = CellCounts(5, 0, 3, 2);
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kExtremeDependence);
  spec.marginal = CellCounts(0, 0, 3, 2);
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kZeroMargin);
  spec.marginal = CellCounts(1, 1, 2, 2);
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kDegenerateMarginal);
  spec.marginal = CellCounts(Rational(1, 2), 1, 2, 2);
  spec.mode = SplitMode::kInteger;
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kInvalidArgument);
  spec.mode = SplitMode::kFractional;
  spec.margin_epsilon = Rational(0);
  EXPECT_EQ(code_of([&] { synthesize_reverser(spec); }), ErrorCode::kInvalidArgument);
}

TEST(SynthesisTest, DegenerateMarginalWithOverride) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(1, 1, 2, 2);
  spec.allow_degenerate = true;
  const SynthesisResult r = synthesize_reverser(spec);
  const Verification v = verify(r, spec);
  EXPECT_TRUE(v.ok) << (v.diagnostics.empty() ? "" : v.diagnostics.front());
  EXPECT_EQ(r.target_direction, Sign::kPositive);
  for (const auto& s : r.certificate.per_stratum) EXPECT_GT(s.measure.delta, Rational(0));
  EXPECT_EQ(r.certificate.pooled.measure.sign, Sign::kZero);
}

TEST(SynthesisTest, IsDeterministic) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(13, 7, 22, 5);
  const SynthesisResult a = synthesize_reverser(spec);
  const SynthesisResult b = synthesize_reverser(spec);
  EXPECT_EQ(a.stratified, b.stratified);
  EXPECT_EQ(a.level, b.level);
}

TEST(VerifyTest, ReportsTamperedResults) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  SynthesisResult r = synthesize_reverser(spec);

  SynthesisResult broken_pool = r;
  const CellCounts& z = r.stratified[0].counts;
  broken_pool.stratified = StratifiedTable(
      {{"z", CellCounts(z.success_exposed() + Rational(1), z.failure_exposed(),
                        z.success_unexposed(), z.failure_unexposed())},
       r.stratified[1]},
      "Z");
  const Verification v = verify(broken_pool, spec);
  EXPECT_FALSE(v);
  bool mentions_pooling = false;
  for (const auto& d : v.diagnostics) mentions_pooling |= d.find("pooling mismatch") != std::string::npos;
  EXPECT_TRUE(mentions_pooling);

  SynthesisResult wrong_certificate = r;
  wrong_certificate.certificate.reversal = ReversalKind::kNone;
  EXPECT_FALSE(verify(wrong_certificate, spec));

  // The marginal split into itself and nothing cannot reverse.
  const StratifiedTable trivial(
      {{"z", CellCounts(8, 12, 10, 10)}, {"z'", CellCounts(8, 12, 10, 10)}}, "Z");
  EXPECT_FALSE(verify(certify(trivial, spec), spec));
}

// Random non-extreme count marginals in both modes.
TEST(SynthesisPropertyTest, RandomMarginals) {
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> cell(1, 60);
  int integer_successes = 0;
  for (int trial = 0; trial < 300; ++trial) {
    SynthesisSpec spec;
    spec.marginal = CellCounts(cell(rng), cell(rng), cell(rng), cell(rng));
    if (association(spec.marginal).sign == Sign::kZero) continue;
    const SynthesisResult r = synthesize_reverser(spec);
    ASSERT_TRUE(verify(r, spec)) << spec.marginal.success_exposed();

    spec.mode = SplitMode::kInteger;
    try {
      const SynthesisResult ri = synthesize_reverser(spec);
      ASSERT_TRUE(verify(ri, spec));
      ++integer_successes;
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), ErrorCode::kInfeasibleAtResolution);
    }
  }
  EXPECT_GT(integer_successes, 100);
}

}  // namespace
}  // namespace simpson
