#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "oracle.h"
#include "simpson/ingest.h"

namespace simpson {
namespace {

template <typename F>
Error error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(ErrorCode::kInvalidArgument, "none");
}

StratifiedTable recovery_example() {
  return StratifiedTable({{"male", CellCounts(7, 3, 18, 12)}, {"female", CellCounts(9, 21, 2, 8)}},
                         "sex");
}

ColumnMapping recovery_mapping(std::vector<std::string> stratifiers = {"sex"}) {
  ColumnMapping m;
  m.outcome_column = "recovery";
  m.exposure_column = "treatment";
  m.stratifier_columns = std::move(stratifiers);
  m.success_label = "yes";
  m.exposed_label = "treated";
  return m;
}

TEST(DsvTest, ParsesQuotesAndDelimiters) {
  const Records r = parse_dsv("a,b,c\n1,\"x, y\",\"say \"\"hi\"\"\"\r\n2,,z\n\n");
  ASSERT_EQ(r.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0][1], "x, y");
  EXPECT_EQ(r.rows[0][2], "say \"hi\"");
  EXPECT_EQ(r.rows[1][1], "");
  const Records tabbed = parse_dsv("a\tb\n1\t2\n", '\t');
  EXPECT_EQ(tabbed.rows[0][1], "2");
}

TEST(DsvTest, ParseErrors) {
  EXPECT_EQ(error_of([] { parse_dsv("a,b\n1\n"); }).code(), ErrorCode::kParseError);
  EXPECT_EQ(error_of([] { parse_dsv("a,b\n\"1,2\n"); }).code(), ErrorCode::kParseError);
  EXPECT_EQ(error_of([] { parse_dsv(""); }).code(), ErrorCode::kEmptyInput);
}

TEST(DsvTest, WriteThenParseIsIdentity) {
  Records r;
  r.header = {"name", "note"};
  r.rows = {{"a,b", "plain"}, {"q\"uote", "line\nbreak"}, {"", "NA"}};
  const Records back = parse_dsv(write_dsv(r));
  EXPECT_EQ(back.header, r.header);
  EXPECT_EQ(back.rows, r.rows);
}

TEST(AggregateTest, RecoveryExampleFromRecordsFile) {
  const Records records = read_dsv(std::string(SIMPSON_DATA_DIR) + "/recovery_records.csv");
  EXPECT_EQ(records.rows.size(), 80u);
  const Aggregation agg = aggregate(records, recovery_mapping(), "sex");
  EXPECT_EQ(agg.table, recovery_example());
  EXPECT_EQ(agg.dropped_missing, 0u);
  EXPECT_FALSE(agg.warnings.empty());  // margins of 10 are below 30
}

TEST(AggregateTest, SingleRecordGivesOneStratum) {
  const Records r = parse_dsv("recovery,treatment,sex\nno,untreated,male\n");
  const Aggregation agg = aggregate(r, recovery_mapping(), "sex");
  ASSERT_EQ(agg.table.size(), 1u);
  EXPECT_EQ(agg.table[0].counts, CellCounts(0, 0, 0, 1));
}

TEST(AggregateTest, StrataInFirstAppearanceOrder) {
  const Records r = parse_dsv(
      "recovery,treatment,site\nyes,treated,c\nno,treated,a\nyes,untreated,b\nno,treated,c\n");
  const Aggregation agg = aggregate(r, recovery_mapping({"site"}), "site");
  ASSERT_EQ(agg.table.size(), 3u);
  EXPECT_EQ(agg.table[0].label, "c");
  EXPECT_EQ(agg.table[1].label, "a");
  EXPECT_EQ(agg.table[2].label, "b");
  EXPECT_EQ(agg.table[0].counts, CellCounts(1, 1, 0, 0));
}

TEST(AggregateTest, ValidationErrors) {
  const Records third = parse_dsv("recovery,treatment,sex\nyes,treated,m\nno,treated,m\nmaybe,treated,f\n");
  const Error e = error_of([&] { aggregate(third, recovery_mapping(), "sex"); });
  EXPECT_EQ(e.code(), ErrorCode::kNonBinaryValue);
  EXPECT_NE(std::string(e.what()).find("'maybe'"), std::string::npos);

  const Records ok = parse_dsv("recovery,treatment,sex\nyes,treated,m\n");
  EXPECT_EQ(error_of([&] { aggregate(ok, recovery_mapping(), "age"); }).code(),
            ErrorCode::kUnknownColumn);
  ColumnMapping bad = recovery_mapping();
  bad.outcome_column = "outcome";
  EXPECT_EQ(error_of([&] { aggregate(ok, bad, "sex"); }).code(), ErrorCode::kUnknownColumn);

  const Records empty = parse_dsv("recovery,treatment,sex\n");
  EXPECT_EQ(error_of([&] { aggregate(empty, recovery_mapping(), "sex"); }).code(),
            ErrorCode::kEmptyInput);

  ColumnMapping labelled = recovery_mapping();
  labelled.failure_label = "no";
  const Records other = parse_dsv("recovery,treatment,sex\nyes,treated,m\nnope,treated,m\n");
  EXPECT_EQ(error_of([&] { aggregate(other, labelled, "sex"); }).code(), ErrorCode::kNonBinaryValue);
}

TEST(AggregateTest, MissingValuesAreDroppedAndCounted) {
  const Records r = parse_dsv(
      "recovery,treatment,sex\nyes,treated,m\nNA,treated,m\nno, ,f\nno,untreated,\nno,untreated,f\n");
  const Aggregation agg = aggregate(r, recovery_mapping(), "sex");
  EXPECT_EQ(agg.dropped_missing, 3u);
  EXPECT_EQ(pool(agg.table).total(), Rational(2));
}

TEST(AggregateTest, TooManyStrata) {
  std::string text = "recovery,treatment,id\n";
  for (int i = 0; i < 20; ++i) text += "yes,treated," + std::to_string(i) + "\n";
  const Records r = parse_dsv(text);
  EXPECT_EQ(error_of([&] { aggregate(r, recovery_mapping({"id"}), "id"); }).code(),
            ErrorCode::kTooManyStrata);
  ColumnMapping wide = recovery_mapping({"id"});
  wide.max_strata = 32;
  EXPECT_EQ(aggregate(r, wide, "id").table.size(), 20u);
}

TEST(RoundTripTest, RandomTables) {
  std::mt19937_64 rng(2718);
  std::uniform_int_distribution<int> k_dist(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Stratum> strata;
    const int k = k_dist(rng);
    for (int i = 0; i < k; ++i) {
      oracle::Cells c;
      do c = oracle::random_cells(rng, 25); while (c[0] + c[1] + c[2] + c[3] == 0);
      strata.push_back({"level " + std::to_string(i), CellCounts(c[0], c[1], c[2], c[3])});
    }
    const StratifiedTable t(std::move(strata), "grp");
    const Records records = disaggregate(t);
    const Aggregation back = aggregate(records, mapping_for(t), "grp");
    ASSERT_EQ(back.table, t);
    // Through text as well.
    ASSERT_EQ(aggregate(parse_dsv(write_dsv(records)), mapping_for(t), "grp").table, t);
  }
}

TEST(RoundTripTest, DisaggregateRejectsWhatRecordsCannotHold) {
  const StratifiedTable fractional({{"a", CellCounts(Rational(1, 2), 1, 1, 1)}});
  EXPECT_EQ(error_of([&] { disaggregate(fractional); }).code(), ErrorCode::kInvalidArgument);
  const StratifiedTable empty({{"a", CellCounts(1, 1, 1, 1)}, {"b", CellCounts()}});
  EXPECT_EQ(error_of([&] { disaggregate(empty); }).code(), ErrorCode::kInvalidArgument);
}

Records recovery_example_with_candidates() {
  Records records = disaggregate(recovery_example(), {"recovery", "treatment", "sex", "yes", "no", "treated",
                                            "untreated"});
  records.header.push_back("noise");
  records.header.push_back("sex_copy");
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (auto& row : records.rows) {
    row.push_back(coin(rng) ? "heads" : "tails");
    row.push_back(row[2]);
  }
  return records;
}

TEST(ScanTest, FlagsSexButNotNoise) {
  const Records records = recovery_example_with_candidates();
  const ScanResult result =
      scan_covariates(records, recovery_mapping({"noise", "sex", "sex_copy"}));
  ASSERT_EQ(result.entries.size(), 3u);
  for (const auto& e : result.entries) {
    ASSERT_TRUE(e.report) << e.column;
    // Oracle: the same analysis on the column aggregated by hand.
    const ReversalReport direct = detect_reversal(aggregate(records, recovery_mapping(), e.column).table);
    EXPECT_EQ(e.report->reversal, direct.reversal);
    EXPECT_EQ(e.report->per_stratum.size(), direct.per_stratum.size());
  }
  EXPECT_EQ(result.entries[0].column, "sex");
  EXPECT_EQ(result.entries[1].column, "sex_copy");
  EXPECT_EQ(result.entries[0].report->reversal, ReversalKind::kStrict);
  EXPECT_EQ(result.entries[1].report->reversal, ReversalKind::kStrict);
  EXPECT_EQ(*result.entries[0].confounding_gap, *result.entries[1].confounding_gap);
  // recovery example: pooled -1/10 vs weighted mean of +1/10 and +1/10.
  EXPECT_EQ(*result.entries[0].confounding_gap, Rational(1, 5));
  EXPECT_EQ(result.entries[2].column, "noise");
  EXPECT_FALSE(result.entries[2].report->is_reversal());
}

TEST(ScanTest, EmptyCandidateListAndSkips) {
  const Records records = recovery_example_with_candidates();
  EXPECT_TRUE(scan_covariates(records, recovery_mapping({})).entries.empty());

  // A column equal to the exposure gives each stratum an empty margin.
  Records with_exposure_copy = records;
  with_exposure_copy.header.push_back("arm");
  for (auto& row : with_exposure_copy.rows) row.push_back(row[1]);
  const ScanResult r = scan_covariates(with_exposure_copy, recovery_mapping({"arm", "sex"}));
  ASSERT_EQ(r.entries.size(), 2u);
  EXPECT_EQ(r.entries[0].column, "sex");
  EXPECT_EQ(r.entries[1].column, "arm");
  EXPECT_FALSE(r.entries[1].report);
  ASSERT_TRUE(r.entries[1].skip_reason);
  EXPECT_NE(r.entries[1].skip_reason->find("ZeroMargin"), std::string::npos);
}

TEST(ScanTest, ParallelAndSequentialAgree) {
  const Records records = recovery_example_with_candidates();
  ScanOptions sequential;
  sequential.parallel = false;
  const auto a = scan_covariates(records, recovery_mapping({"noise", "sex", "sex_copy"}));
  const auto b = scan_covariates(records, recovery_mapping({"noise", "sex", "sex_copy"}), sequential);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].column, b.entries[i].column);
    EXPECT_EQ(a.entries[i].confounding_gap, b.entries[i].confounding_gap);
  }
}

TEST(ScanTest, OutcomeProblemsStillThrow) {
  Records records = recovery_example_with_candidates();
  records.rows[0][0] = "unsure";
  EXPECT_EQ(error_of([&] { scan_covariates(records, recovery_mapping({"sex"})); }).code(),
            ErrorCode::kNonBinaryValue);
}

}  // namespace
}  // namespace simpson
