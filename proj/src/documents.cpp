#include "belief_forge/documents.hpp"

#include <set>

namespace belief_forge {

using nlohmann::json;

namespace {

std::string describe(std::size_t line, std::size_t column, const std::string& path,
                     const std::string& reason) {
  if (line > 0) return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason;
  return (path.empty() ? std::string("/") : path) + ": " + reason;
}

[[noreturn]] void fail(const std::string& path, const std::string& reason) {
  throw ParseError(0, 0, path, reason);
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string reason = e.what();
    if (auto pos = reason.find("syntax error"); pos != std::string::npos) reason = reason.substr(pos);
    throw ParseError(line, column, "", reason);
  }
}

void expect_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known |= key == a;
    if (!known) fail(path + "/" + key, "unknown key");
  }
}

Labels labels_from(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of labels");
  Labels out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) fail(path + "/" + std::to_string(i), "expected a string label");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

void check_labels(const Frame& frame, const Labels& labels, const std::string& path) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!frame.index_of(labels[i])) {
      throw UnknownLabel(0, 0, path + "/" + std::to_string(i), "unknown label '" + labels[i] + "'");
    }
  }
}

Rational rational_from(const json& j, const std::string& path) {
  std::string text;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else if (j.is_number()) {
    text = j.dump();
  } else if (j.is_object() && j.contains("exact") && j["exact"].is_string()) {
    text = j["exact"].get<std::string>();
  } else {
    fail(path, "expected a rational as \"p/q\", a decimal string, or a number");
  }
  try {
    return parse_rational(text);
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
}

Rational belief_from(const json& j, const std::string& path) {
  Rational v = rational_from(j, path);
  if (sgn(v) < 0 || v > 1) {
    throw ValueOutOfRange(0, 0, path, "belief " + to_exact_string(v) + " outside [0, 1]");
  }
  return v;
}

bool bool_from(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::size_t size_from(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "/" + key, "missing");
  return obj.at(key);
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string path,
                       const std::string& reason)
    : Error(describe(line, column, path, reason)), line(line), column(column), path(std::move(path)) {}

json parse_json(std::string_view text) { return parse_text(text); }

Rational belief_value(const json& j, const std::string& path) { return belief_from(j, path); }

Labels labels_value(const json& j, const Frame& frame, const std::string& path) {
  Labels labels = labels_from(j, path);
  check_labels(frame, labels, path);
  return labels;
}

Frame SpecDocument::make_frame() const { return Frame(frame); }

KnownBeliefs SpecDocument::known() const {
  Frame f = make_frame();
  std::vector<std::pair<Subset, Rational>> values;
  for (const auto& c : constraints) values.emplace_back(f.subset(c.set), c.belief);
  return KnownBeliefs(std::move(f), std::move(values));
}

SpecDocument spec_from_json(const json& j) {
  expect_keys(j, "", {"frame", "constraints", "method", "options", "queries"});
  SpecDocument spec;
  spec.frame = labels_from(require(j, "frame", ""), "/frame");
  std::optional<Frame> frame;
  try {
    frame.emplace(spec.frame);
  } catch (const InvalidArgument& e) {
    fail("/frame", e.what());
  }

  if (j.contains("constraints")) {
    const json& cs = j["constraints"];
    if (!cs.is_array()) fail("/constraints", "expected an array");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string path = "/constraints/" + std::to_string(i);
      expect_keys(cs[i], path, {"set", "belief"});
      Constraint c;
      c.set = labels_from(require(cs[i], "set", path), path + "/set");
      check_labels(*frame, c.set, path + "/set");
      c.belief = belief_from(require(cs[i], "belief", path), path + "/belief");
      if (!seen.insert(frame->subset(c.set).bits()).second) fail(path + "/set", "duplicate constraint set");
      spec.constraints.push_back(std::move(c));
    }
  }
  if (j.contains("method")) {
    if (!j["method"].is_string()) fail("/method", "expected a string");
    spec.method = j["method"].get<std::string>();
    static const std::set<std::string> kMethods{"min-spec", "focusing", "closed", "stepwise"};
    if (!kMethods.contains(*spec.method)) fail("/method", "unknown method '" + *spec.method + "'");
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    expect_keys(o, "/options", {"cap", "stepwise"});
    if (o.contains("cap")) spec.cap = size_from(o["cap"], "/options/cap");
    if (o.contains("stepwise")) spec.stepwise = bool_from(o["stepwise"], "/options/stepwise");
  }
  if (j.contains("queries")) {
    const json& qs = j["queries"];
    if (!qs.is_array()) fail("/queries", "expected an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::string path = "/queries/" + std::to_string(i);
      Labels q = labels_from(qs[i], path);
      check_labels(*frame, q, path);
      spec.queries.push_back(std::move(q));
    }
  }
  return spec;
}

SpecDocument parse_spec(std::string_view text) {
  json j = parse_text(text);
  try {
    return spec_from_json(j);
  } catch (const json::exception& e) {
    fail("", e.what());
  }
}

json to_json(const SpecDocument& spec) {
  json j;
  j["frame"] = spec.frame;
  j["constraints"] = json::array();
  for (const auto& c : spec.constraints) {
    j["constraints"].push_back({{"set", c.set}, {"belief", to_exact_string(c.belief)}});
  }
  if (spec.method) j["method"] = *spec.method;
  if (spec.cap || spec.stepwise) {
    j["options"] = json::object();
    if (spec.cap) j["options"]["cap"] = *spec.cap;
    if (spec.stepwise) j["options"]["stepwise"] = *spec.stepwise;
  }
  if (!spec.queries.empty()) j["queries"] = spec.queries;
  return j;
}

json rational_json(const Rational& value) {
  return {{"exact", to_exact_string(value)}, {"decimal", to_decimal_string(value)}};
}

ReportEntry make_report_entry(const Frame& frame, const ExistenceReport& report) {
  ReportEntry out;
  out.condition = report.condition == Condition::kClosed ? "closed" : "focusing";
  out.verdict = to_string(report.verdict);
  for (const auto& r : report.records) {
    RecordEntry e;
    e.set = frame.labels_of(r.set);
    for (Subset b : r.lower) e.lower.push_back(frame.labels_of(b));
    e.rhs = r.rhs;
    e.residual = r.residual;
    e.pass = r.pass;
    e.provably_impossible = r.provably_impossible;
    out.records.push_back(std::move(e));
  }
  return out;
}

ResultDocument make_result_document(const CompletionResult& result,
                                    const std::vector<Labels>& queries) {
  const Frame& frame = result.mass.frame();
  ResultDocument doc;
  doc.frame = frame.labels();
  doc.method = method_tag(result.method, result.stage);
  for (const auto& [set, mass] : result.mass.entries()) {
    doc.mass.push_back({frame.labels_of(set), mass});
  }
  doc.specificity = specificity(result.mass);
  for (const auto& q : queries) {
    Subset s = frame.subset(q);
    doc.queries.push_back({frame.labels_of(s), belief_from_mass(result.mass, s),
                           plausibility(result.mass, s)});
  }
  doc.existence = make_report_entry(frame, result.diagnostics);
  doc.vertices = result.symmetry.vertices;
  doc.enumerated = result.symmetry.enumerated;
  return doc;
}

json to_json(const ReportEntry& report) {
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"set", r.set},
                       {"lower", r.lower},
                       {"rhs", rational_json(r.rhs)},
                       {"residual", rational_json(r.residual)},
                       {"pass", r.pass},
                       {"provably_impossible", r.provably_impossible}});
  }
  return {{"condition", report.condition}, {"verdict", report.verdict}, {"records", records}};
}

json to_json(const ResultDocument& doc) {
  json mass = json::array();
  for (const auto& m : doc.mass) mass.push_back({{"set", m.set}, {"mass", rational_json(m.mass)}});
  json queries = json::array();
  for (const auto& q : doc.queries) {
    queries.push_back({{"set", q.set},
                       {"belief", rational_json(q.belief)},
                       {"plausibility", rational_json(q.plausibility)}});
  }
  return {{"frame", doc.frame},
          {"method", doc.method},
          {"mass", mass},
          {"specificity", rational_json(doc.specificity)},
          {"queries", queries},
          {"existence", to_json(doc.existence)},
          {"symmetry", {{"vertices", doc.vertices}, {"enumerated", doc.enumerated}}}};
}

ResultDocument result_from_json(const json& j) {
  expect_keys(j, "", {"frame", "method", "mass", "specificity", "queries", "existence", "symmetry"});
  ResultDocument doc;
  doc.frame = labels_from(require(j, "frame", ""), "/frame");
  const json& method = require(j, "method", "");
  if (!method.is_string()) fail("/method", "expected a string");
  doc.method = method.get<std::string>();

  const json& mass = require(j, "mass", "");
  if (!mass.is_array()) fail("/mass", "expected an array");
  Rational total = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const std::string path = "/mass/" + std::to_string(i);
    expect_keys(mass[i], path, {"set", "mass"});
    MassEntry e{labels_from(require(mass[i], "set", path), path + "/set"),
                rational_from(require(mass[i], "mass", path), path + "/mass")};
    if (sgn(e.mass) <= 0) throw ValueOutOfRange(0, 0, path + "/mass", "mass must be positive");
    total += e.mass;
    doc.mass.push_back(std::move(e));
  }
  if (total != 1) fail("/mass", "masses sum to " + to_exact_string(total) + ", not 1");
  doc.specificity = rational_from(require(j, "specificity", ""), "/specificity");

  if (j.contains("queries")) {
    const json& qs = j["queries"];
    if (!qs.is_array()) fail("/queries", "expected an array");
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const std::string path = "/queries/" + std::to_string(i);
      expect_keys(qs[i], path, {"set", "belief", "plausibility"});
      doc.queries.push_back({labels_from(require(qs[i], "set", path), path + "/set"),
                             rational_from(require(qs[i], "belief", path), path + "/belief"),
                             rational_from(require(qs[i], "plausibility", path), path + "/plausibility")});
    }
  }

  const json& ex = require(j, "existence", "");
  expect_keys(ex, "/existence", {"condition", "verdict", "records"});
  doc.existence.condition = require(ex, "condition", "/existence").get<std::string>();
  doc.existence.verdict = require(ex, "verdict", "/existence").get<std::string>();
  const json& records = require(ex, "records", "/existence");
  if (!records.is_array()) fail("/existence/records", "expected an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::string path = "/existence/records/" + std::to_string(i);
    const json& r = records[i];
    expect_keys(r, path, {"set", "lower", "rhs", "residual", "pass", "provably_impossible"});
    RecordEntry e;
    e.set = labels_from(require(r, "set", path), path + "/set");
    const json& lower = require(r, "lower", path);
    if (!lower.is_array()) fail(path + "/lower", "expected an array");
    for (std::size_t x = 0; x < lower.size(); ++x) {
      e.lower.push_back(labels_from(lower[x], path + "/lower/" + std::to_string(x)));
    }
    e.rhs = rational_from(require(r, "rhs", path), path + "/rhs");
    e.residual = rational_from(require(r, "residual", path), path + "/residual");
    e.pass = bool_from(require(r, "pass", path), path + "/pass");
    e.provably_impossible = bool_from(require(r, "provably_impossible", path), path + "/provably_impossible");
    doc.existence.records.push_back(std::move(e));
  }

  const json& sym = require(j, "symmetry", "");
  expect_keys(sym, "/symmetry", {"vertices", "enumerated"});
  doc.vertices = size_from(require(sym, "vertices", "/symmetry"), "/symmetry/vertices");
  doc.enumerated = bool_from(require(sym, "enumerated", "/symmetry"), "/symmetry/enumerated");
  return doc;
}

std::string serialize_result(const ResultDocument& doc) { return to_json(doc).dump(2) + "\n"; }

ResultDocument parse_result(std::string_view text) {
  json j = parse_text(text);
  try {
    return result_from_json(j);
  } catch (const json::exception& e) {
    fail("", e.what());
  }
}

CompletionResult complete_with(const std::string& method, const KnownBeliefs& known,
                               const CompletionOptions& options, bool stepwise_fallback) {
  if (method == "min-spec" || method == "min-specificity") return complete_min_specificity(known, options);
  if (method == "focusing") {
    try {
      return complete_focusing(known);
    } catch (const FocusingInapplicable&) {
      if (!stepwise_fallback) throw;
      return complete_stepwise(known, options);
    }
  }
  if (method == "closed") return complete_closed(known);
  if (method == "stepwise") return complete_stepwise(known, options);
  throw InvalidArgument("unknown method '" + method + "'");
}

}  // namespace belief_forge
