#include "simpson/json.h"

#include <stdexcept>
#include <string>

namespace simpson {

namespace {

constexpr const char* kCellNames[4] = {"success_exposed", "failure_exposed", "success_unexposed",
                                       "failure_unexposed"};

Json integer_part(const Rational& r, bool numerator) {
  if (r.fits_int64()) return numerator ? r.num_int64() : r.den_int64();
  return numerator ? r.num_string() : r.den_string();
}

Json association_json(const StratumAssociation& a) {
  Json j;
  j["label"] = a.label;
  j["exposed"] = to_json(a.exposed);
  j["unexposed"] = to_json(a.unexposed);
  j["delta"] = to_json(a.measure.delta);
  j["sign"] = sign_name(a.measure.sign);
  return j;
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Error parse_error(const std::string& what) { return Error(ErrorCode::kParseError, what); }

Rational nonnegative_cell(const Json& j, const char* name) {
  if (!j.contains(name)) throw parse_error(std::string("missing cell '") + name + "'");
  Rational r = rational_from_json(j.at(name));
  if (r.sign() < 0) throw parse_error(std::string("cell '") + name + "' is negative");
  return r;
}

}  // namespace

Json to_json(const Rational& r) {
  Json j;
  j["num"] = integer_part(r, true);
  j["den"] = integer_part(r, false);
  j["decimal"] = r.to_double();
  return j;
}

Json to_json(const Probability& p) { return to_json(p.value()); }

Json to_json(const CellCounts& c) {
  Json j;
  for (int i = 0; i < 4; ++i) {
    const Rational& v = i == 0 ? c.success_exposed()
                        : i == 1 ? c.failure_exposed()
                        : i == 2 ? c.success_unexposed()
                                 : c.failure_unexposed();
    if (v.is_integer() && v.fits_int64()) {
      j[kCellNames[i]] = v.num_int64();
    } else {
      j[kCellNames[i]] = v.to_string();
    }
  }
  return j;
}

Json to_json(const StratifiedTable& t) {
  Json j;
  j["stratifier"] = t.stratifier();
  Json strata = Json::array();
  for (const auto& s : t.strata()) {
    Json e;
    e["label"] = s.label;
    e.update(to_json(s.counts));
    strata.push_back(std::move(e));
  }
  j["strata"] = std::move(strata);
  return j;
}

Json to_json(const ReversalReport& r) {
  Json j;
  Json per = Json::array();
  for (const auto& a : r.per_stratum) per.push_back(association_json(a));
  j["per_stratum"] = std::move(per);
  j["pooled"] = association_json(r.pooled);
  j["reversal"] = reversal_kind_name(r.reversal);
  j["mirror"] = r.mirror;
  j["necessary_condition_holds"] = optional_json(r.necessary_condition_holds);
  j["sufficient_avoidance_holds"] = optional_json(r.sufficient_avoidance_holds);
  j["case_label"] = case_label_name(r.case_label);
  Json u = Json::array(), v = Json::array(), gaps = Json::array();
  for (const auto& w : r.weights_u) u.push_back(to_json(w));
  for (const auto& w : r.weights_v) v.push_back(to_json(w));
  for (const auto& g : r.weight_gaps()) gaps.push_back(to_json(g));
  j["weights_u"] = std::move(u);
  j["weights_v"] = std::move(v);
  j["weight_gaps"] = std::move(gaps);
  j["skipped_strata"] = r.skipped_strata;
  return j;
}

Json to_json(const SynthesisResult& r) {
  Json j;
  j["stratified"] = to_json(r.stratified);
  j["certificate"] = to_json(r.certificate);
  Json fractions;
  for (int i = 0; i < 4; ++i) fractions[kCellNames[i]] = to_json(r.split_fractions[i]);
  j["split_fractions"] = std::move(fractions);
  j["margin_epsilon"] = to_json(r.margin_epsilon);
  j["target_direction"] = sign_name(r.target_direction);
  j["level"] = r.level;
  return j;
}

Json to_json(const ScanResult& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json j;
    j["column"] = e.column;
    j["status"] = e.report ? Json(reversal_kind_name(e.report->reversal)) : Json("skipped");
    j["confounding_gap"] = e.confounding_gap ? to_json(*e.confounding_gap) : Json(nullptr);
    j["skip_reason"] = optional_json(e.skip_reason);
    j["dropped_missing"] = e.dropped_missing;
    j["warnings"] = e.warnings;
    j["report"] = e.report ? to_json(*e.report) : Json(nullptr);
    entries.push_back(std::move(j));
  }
  Json j;
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const FigureModel& m) {
  auto marks = [](const std::array<Probability, 3>& a) {
    Json j;
    j["z_prime"] = to_json(a[0]);
    j["z"] = to_json(a[1]);
    j["marginal"] = to_json(a[2]);
    return j;
  };
  auto ratio = [](const std::optional<WeightRatio>& r) {
    if (!r) return Json(nullptr);
    Json j;
    j["z"] = to_json(r->z);
    j["z_prime"] = to_json(r->z_prime);
    j["text"] = r->text();
    return j;
  };
  Json j;
  j["z_label"] = m.z_label;
  j["z_prime_label"] = m.z_prime_label;
  j["top_marks"] = marks(m.top_marks);
  j["bottom_marks"] = marks(m.bottom_marks);
  j["top_ratio"] = ratio(m.top_ratio);
  j["bottom_ratio"] = ratio(m.bottom_ratio);
  if (m.overlap_interval) {
    j["overlap_interval"] = Json::array(
        {to_json(m.overlap_interval->first), to_json(m.overlap_interval->second)});
  } else {
    j["overlap_interval"] = nullptr;
  }
  return j;
}

Json to_json(const Verification& v) {
  Json j;
  j["ok"] = v.ok;
  j["diagnostics"] = v.diagnostics;
  return j;
}

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) {
      if (j.is_number_unsigned()) return Rational::parse(std::to_string(j.get<std::uint64_t>()));
      return Rational(j.get<std::int64_t>());
    }
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_object() && j.contains("num") && j.contains("den")) {
      const Rational num = rational_from_json(j.at("num"));
      const Rational den = rational_from_json(j.at("den"));
      if (!num.is_integer() || !den.is_integer()) throw parse_error("num and den must be integers");
      if (den.is_zero()) throw parse_error("zero denominator");
      return num / den;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    throw parse_error(e.what());
  } catch (const std::invalid_argument& e) {
    throw parse_error(e.what());
  }
  throw parse_error("expected a number, a fraction string or {num, den}, got " + j.dump());
}

CellCounts cell_counts_from_json(const Json& j) {
  if (!j.is_object()) throw parse_error("a table cell block must be an object");
  return CellCounts(nonnegative_cell(j, kCellNames[0]), nonnegative_cell(j, kCellNames[1]),
                    nonnegative_cell(j, kCellNames[2]), nonnegative_cell(j, kCellNames[3]));
}

StratifiedTable table_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("strata") || !j.at("strata").is_array()) {
    throw parse_error("a table needs a \"strata\" array");
  }
  std::vector<Stratum> strata;
  std::size_t k = 0;
  for (const auto& s : j.at("strata")) {
    std::string label;
    if (s.contains("label")) {
      if (!s.at("label").is_string()) throw parse_error("stratum labels must be strings");
      label = s.at("label").get<std::string>();
    } else {
      label = "z" + std::to_string(k);
    }
    strata.push_back({std::move(label), cell_counts_from_json(s)});
    ++k;
  }
  std::string stratifier;
  if (j.contains("stratifier")) {
    if (!j.at("stratifier").is_string()) throw parse_error("\"stratifier\" must be a string");
    stratifier = j.at("stratifier").get<std::string>();
  }
  return StratifiedTable(std::move(strata), std::move(stratifier));
}

CellCounts marginal_from_json(const Json& j) {
  if (j.is_object() && j.contains("strata")) return pool(table_from_json(j));
  return cell_counts_from_json(j);
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(e.what());
  }
}

}  // namespace simpson
