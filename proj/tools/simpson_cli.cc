// Command-line front end: analyze, scan, synthesize, predict and figure.
//
// Exit codes: 0 success, 1 validation or input error, 2 infeasible synthesis.

#ifdef SIMPSON_CLI11_SINGLE_HEADER
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simpson/analysis.h"
#include "simpson/figure.h"
#include "simpson/ingest.h"
#include "simpson/json.h"
#include "simpson/mixture.h"
#include "simpson/synthesis.h"

namespace {

using namespace simpson;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<Rational> parse_rationals(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split_list(s)) out.push_back(Rational::parse(item));
  return out;
}

// Options shared by every subcommand that reads a table or records.
struct InputOptions {
  std::string input;
  std::string format;
  std::string delimiter = ",";
  std::string outcome;
  std::string exposure;
  std::vector<std::string> stratifiers;
  std::string success_label;
  std::string exposed_label;
  std::size_t max_strata = 16;

  void add_to(CLI::App& app, bool stratifier_list) {
    app.add_option("--input,-i", input, "Input file ('-' for stdin)")->required();
    app.add_option("--format", format, "Input format; inferred from the extension when omitted")
        ->check(CLI::IsMember({"dsv", "json"}));
    app.add_option("--delimiter", delimiter, "Field delimiter for DSV input");
    app.add_option("--outcome", outcome, "Outcome column (DSV)");
    app.add_option("--exposure", exposure, "Exposure column (DSV)");
    if (stratifier_list) {
      app.add_option("--stratifiers,--stratifier", stratifiers,
                     "Candidate stratifier columns; all other columns when omitted")
          ->delimiter(',');
    } else {
      app.add_option("--stratifier,--stratifiers", stratifiers, "Stratifier column (DSV)")
          ->delimiter(',');
    }
    app.add_option("--success-label", success_label, "Outcome value counted as success");
    app.add_option("--exposed-label", exposed_label, "Exposure value counted as exposed");
    app.add_option("--max-strata", max_strata, "Largest number of distinct stratifier values");
  }

  bool is_json() const {
    if (!format.empty()) return format == "json";
    return input.size() >= 5 && input.compare(input.size() - 5, 5, ".json") == 0;
  }

  char delimiter_char() const {
    if (delimiter == "\\t" || delimiter == "tab") return '\t';
    if (delimiter.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "delimiter must be one character");
    }
    return delimiter[0];
  }

  ColumnMapping mapping() const {
    for (const auto* f : {&outcome, &exposure, &success_label, &exposed_label}) {
      if (f->empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "DSV input needs --outcome, --exposure, --success-label and --exposed-label");
      }
    }
    ColumnMapping m;
    m.outcome_column = outcome;
    m.exposure_column = exposure;
    m.stratifier_columns = stratifiers;
    m.success_label = success_label;
    m.exposed_label = exposed_label;
    m.max_strata = max_strata;
    return m;
  }
};

struct LoadedTable {
  StratifiedTable table;
  std::size_t dropped_missing = 0;
  std::vector<std::string> warnings;
};

LoadedTable load_table(const InputOptions& opts) {
  const std::string text = read_text(opts.input);
  if (opts.is_json()) return {table_from_json(parse_json(text)), 0, {}};
  const Records records = parse_dsv(text, opts.delimiter_char());
  const ColumnMapping mapping = opts.mapping();
  if (mapping.stratifier_columns.size() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "DSV input needs exactly one --stratifier");
  }
  Aggregation agg = aggregate(records, mapping, mapping.stratifier_columns.front());
  return {std::move(agg.table), agg.dropped_missing, std::move(agg.warnings)};
}

void report_input_notes(const LoadedTable& loaded) {
  if (loaded.dropped_missing > 0) {
    std::cerr << "warning: dropped " << loaded.dropped_missing
              << " record(s) with a missing mapped value\n";
  }
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
}

struct AnalyzeCommand {
  InputOptions input;
  std::string out;
  std::string svg;
  bool strict_only = false;
  bool skip_zero_margin = false;
  bool all_strata = false;

  void add_to(CLI::App& app) {
    input.add_to(app, false);
    app.add_option("--out,-o", out, "Report destination (stdout by default)");
    app.add_option("--svg", svg, "Also write the two-stratum figure here");
    auto* strict = app.add_flag("--strict", strict_only, "Flag only strict reversals");
    app.add_flag("--weak", [this](std::int64_t) { strict_only = false; },
                 "Flag weak and strict reversals (default)")
        ->excludes(strict);
    app.add_flag("--skip-zero-margin", skip_zero_margin,
                 "Drop strata with an empty exposure margin instead of failing");
    app.add_flag("--all-strata", all_strata,
                 "Evaluate the interval conditions over all strata when there are more than two");
  }

  int run() const {
    const LoadedTable loaded = load_table(input);
    report_input_notes(loaded);
    AnalysisOptions options;
    options.skip_zero_margin_strata = skip_zero_margin;
    options.interval_conditions_all_strata = all_strata;
    const ReversalReport report = detect_reversal(loaded.table, options);
    Json j = to_json(report);
    j["flagged"] = report.reversal == ReversalKind::kStrict ||
                   (!strict_only && report.reversal == ReversalKind::kWeak);
    j["dropped_missing"] = loaded.dropped_missing;
    j["warnings"] = loaded.warnings;
    write_text(out, dump(j));
    if (!svg.empty()) write_text(svg, render_svg(build_figure(loaded.table)));
    return kExitOk;
  }
};

struct ScanCommand {
  InputOptions input;
  std::string out;
  bool strict_only = false;
  bool sequential = false;

  void add_to(CLI::App& app) {
    input.add_to(app, true);
    app.add_option("--out,-o", out, "Result destination (stdout by default)");
    auto* strict = app.add_flag("--strict", strict_only, "Rank only strict reversals first");
    app.add_flag("--weak", [this](std::int64_t) { strict_only = false; },
                 "Rank weak and strict reversals first (default)")
        ->excludes(strict);
    app.add_flag("--sequential", sequential, "Evaluate candidate columns one at a time");
  }

  int run() const {
    if (input.is_json()) {
      throw Error(ErrorCode::kInvalidArgument, "scan reads DSV records, not aggregated tables");
    }
    const Records records = parse_dsv(read_text(input.input), input.delimiter_char());
    ColumnMapping mapping = input.mapping();
    if (input.stratifiers.empty()) {
      for (const auto& column : records.header) {
        if (column != mapping.outcome_column && column != mapping.exposure_column) {
          mapping.stratifier_columns.push_back(column);
        }
      }
    }
    ScanOptions options;
    options.strict_only = strict_only;
    options.parallel = !sequential;
    write_text(out, dump(to_json(scan_covariates(records, mapping, options))));
    return kExitOk;
  }
};

struct SynthesizeCommand {
  std::string input;
  std::string counts;
  std::string epsilon;
  std::string target;
  std::string mode = "fractional";
  bool allow_degenerate = false;
  int max_level = 16;
  std::string out;

  void add_to(CLI::App& app) {
    auto* in = app.add_option("--input,-i", input,
                              "JSON marginal: a table (pooled) or one object with the four cells");
    app.add_option("--counts", counts,
                   "Marginal cells success_exposed,failure_exposed,success_unexposed,"
                   "failure_unexposed")
        ->excludes(in);
    app.add_option("--epsilon", epsilon, "Required within-stratum gap, e.g. 1/100");
    app.add_option("--target", target, "Sign the strata must share")
        ->check(CLI::IsMember({"positive", "negative"}));
    app.add_option("--mode", mode, "Split mode")->check(CLI::IsMember({"fractional", "integer"}));
    app.add_flag("--allow-degenerate", allow_degenerate, "Accept a marginal with zero delta");
    app.add_option("--max-level", max_level, "Finest dyadic level searched")
        ->check(CLI::Range(0, 40));
    app.add_option("--out,-o", out, "Result destination (stdout by default)");
  }

  int run() const {
    SynthesisSpec spec;
    if (!counts.empty()) {
      const auto cells = parse_rationals(counts);
      if (cells.size() != 4) {
        throw Error(ErrorCode::kInvalidArgument, "--counts needs exactly four values");
      }
      for (const auto& c : cells) {
        if (c.sign() < 0) throw Error(ErrorCode::kInvalidArgument, "cells must be nonnegative");
      }
      spec.marginal = CellCounts(cells[0], cells[1], cells[2], cells[3]);
    } else if (!input.empty()) {
      spec.marginal = marginal_from_json(parse_json(read_text(input)));
    } else {
      throw Error(ErrorCode::kInvalidArgument, "give the marginal with --counts or --input");
    }
    if (!epsilon.empty()) spec.margin_epsilon = Rational::parse(epsilon);
    if (!target.empty()) spec.target_direction = target == "positive" ? Sign::kPositive : Sign::kNegative;
    spec.mode = mode == "integer" ? SplitMode::kInteger : SplitMode::kFractional;
    spec.allow_degenerate = allow_degenerate;
    spec.max_level = max_level;

    const SynthesisResult result = synthesize_reverser(spec);
    Json j = to_json(result);
    j["verification"] = to_json(verify(result, spec));
    write_text(out, dump(j));
    return kExitOk;
  }
};

struct PredictCommand {
  std::string priors;
  std::string conditionals;
  std::vector<std::string> labels;
  std::string input;
  std::string out;

  void add_to(CLI::App& app) {
    app.add_option("--priors", priors, "Mechanism priors, comma separated")->required();
    auto* cond = app.add_option("--conditionals", conditionals,
                                "p(outcome | exposure) under each mechanism, comma separated");
    app.add_option("--mechanism-labels", labels, "Mechanism names")->delimiter(',');
    app.add_option("--input,-i", input,
                   "JSON two-stratum table; mechanisms are stratum 1, stratum 2 and pooled")
        ->excludes(cond);
    app.add_option("--out,-o", out, "Result destination (stdout by default)");
  }

  int run() const {
    const auto prior_values = parse_rationals(priors);
    MixtureSpec spec;
    if (!input.empty()) {
      if (prior_values.size() != 3) {
        throw Error(ErrorCode::kInvalidArgument, "a table mixture needs exactly three priors");
      }
      const StratifiedTable table = table_from_json(parse_json(read_text(input)));
      spec = mixture_spec_from_table(
          table, {Probability(prior_values[0]), Probability(prior_values[1]),
                  Probability(prior_values[2])});
    } else {
      const auto cond_values = parse_rationals(conditionals);
      if (cond_values.size() != prior_values.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "--priors and --conditionals must have the same length");
      }
      if (!labels.empty() && labels.size() != prior_values.size()) {
        throw Error(ErrorCode::kInvalidArgument, "--mechanism-labels has the wrong length");
      }
      for (std::size_t t = 0; t < prior_values.size(); ++t) {
        spec.mechanisms.push_back({labels.empty() ? "t" + std::to_string(t + 1) : labels[t],
                                   Probability(prior_values[t]), Probability(cond_values[t])});
      }
    }
    const Probability prediction = mixture_predict(spec);
    Json mechanisms = Json::array();
    for (const auto& m : spec.mechanisms) {
      Json e;
      e["label"] = m.label;
      e["prior"] = to_json(m.prior);
      e["conditional"] = to_json(m.conditional);
      mechanisms.push_back(std::move(e));
    }
    Json j;
    j["mechanisms"] = std::move(mechanisms);
    j["prediction"] = to_json(prediction);
    write_text(out, dump(j));
    return kExitOk;
  }
};

struct FigureCommand {
  InputOptions input;
  std::string out;
  double width = 600;
  bool labels = true;
  bool model_only = false;

  void add_to(CLI::App& app) {
    input.add_to(app, false);
    app.add_option("--out,-o", out, "SVG destination (stdout by default)");
    app.add_option("--width", width, "Length of the unit segments")
        ->check(CLI::PositiveNumber);
    app.add_flag("--labels,!--no-labels", labels, "Draw text labels");
    app.add_flag("--model", model_only, "Write the figure model as JSON instead of SVG");
  }

  int run() const {
    const LoadedTable loaded = load_table(input);
    report_input_notes(loaded);
    const FigureModel model = build_figure(loaded.table);
    if (model_only) {
      write_text(out, dump(to_json(model)));
    } else {
      write_text(out, render_svg(model, {width, labels}));
    }
    return kExitOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect, explain, synthesize and draw association reversals in 2x2xK tables"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "simpson 0.1.0");

  AnalyzeCommand analyze;
  ScanCommand scan;
  SynthesizeCommand synthesize;
  PredictCommand predict;
  FigureCommand figure;
  auto* analyze_cmd = app.add_subcommand("analyze", "Reversal report for a stratified table");
  auto* scan_cmd = app.add_subcommand("scan", "Try each candidate column as the stratifier");
  auto* synth_cmd = app.add_subcommand("synthesize", "Split a marginal table into reversing strata");
  auto* predict_cmd = app.add_subcommand("predict", "Prediction under a selection mixture");
  auto* figure_cmd = app.add_subcommand("figure", "Draw the two-segment figure as SVG");
  analyze.add_to(*analyze_cmd);
  scan.add_to(*scan_cmd);
  synthesize.add_to(*synth_cmd);
  predict.add_to(*predict_cmd);
  figure.add_to(*figure_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*analyze_cmd) return analyze.run();
    if (*scan_cmd) return scan.run();
    if (*synth_cmd) return synthesize.run();
    if (*predict_cmd) return predict.run();
    if (*figure_cmd) return figure.run();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kInfeasibleAtResolution ? kExitInfeasible : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
