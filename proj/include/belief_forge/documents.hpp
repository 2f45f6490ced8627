#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "belief_forge/completion.hpp"
#include "json.hpp"

namespace belief_forge {

/// Malformed input document. `line`/`column` are set for syntax errors,
/// `path` (a JSON pointer) for semantic ones.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string path, const std::string& reason);
  std::size_t line;
  std::size_t column;
  std::string path;
};

class UnknownLabel : public ParseError {
 public:
  using ParseError::ParseError;
};

class ValueOutOfRange : public ParseError {
 public:
  using ParseError::ParseError;
};

using Labels = std::vector<std::string>;

struct Constraint {
  Labels set;
  Rational belief;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Serialized form of a partial belief specification.
struct SpecDocument {
  Labels frame;
  std::vector<Constraint> constraints;
  std::optional<std::string> method;
  std::optional<std::size_t> cap;
  std::optional<bool> stepwise;
  /// Sets whose belief and plausibility the result should report.
  std::vector<Labels> queries;

  Frame make_frame() const;
  /// Throws MonotonicityViolation for non-monotone values.
  KnownBeliefs known() const;

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// Parses JSON text, reporting syntax errors with line and column.
nlohmann::json parse_json(std::string_view text);
/// A belief in [0, 1] given as "p/q", a decimal string, a number, or
/// {"exact": ...}. `path` names the value in error messages.
Rational belief_value(const nlohmann::json& j, const std::string& path);
/// An array of labels, each owned by `frame`.
Labels labels_value(const nlohmann::json& j, const Frame& frame, const std::string& path);

SpecDocument parse_spec(std::string_view text);
SpecDocument spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SpecDocument& spec);

struct MassEntry {
  Labels set;
  Rational mass;
  friend bool operator==(const MassEntry&, const MassEntry&) = default;
};

struct QueryEntry {
  Labels set;
  Rational belief;
  Rational plausibility;
  friend bool operator==(const QueryEntry&, const QueryEntry&) = default;
};

struct RecordEntry {
  Labels set;
  std::vector<Labels> lower;
  Rational rhs;
  Rational residual;
  bool pass = true;
  bool provably_impossible = false;
  friend bool operator==(const RecordEntry&, const RecordEntry&) = default;
};

struct ReportEntry {
  std::string condition;
  std::string verdict;
  std::vector<RecordEntry> records;
  friend bool operator==(const ReportEntry&, const ReportEntry&) = default;
};

struct ResultDocument {
  Labels frame;
  std::string method;
  std::vector<MassEntry> mass;
  Rational specificity;
  std::vector<QueryEntry> queries;
  ReportEntry existence;
  std::size_t vertices = 1;
  bool enumerated = true;
  friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

ReportEntry make_report_entry(const Frame& frame, const ExistenceReport& report);
ResultDocument make_result_document(const CompletionResult& result,
                                    const std::vector<Labels>& queries = {});

nlohmann::json to_json(const ReportEntry& report);
nlohmann::json to_json(const ResultDocument& doc);
ResultDocument result_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_result(const ResultDocument& doc);
ResultDocument parse_result(std::string_view text);

/// {"exact": "p/q", "decimal": "..."}.
nlohmann::json rational_json(const Rational& value);

/// Runs the engine named by `method`: "min-spec", "focusing", "closed",
/// or "stepwise". With `stepwise_fallback`, an inapplicable focusing run
/// falls back to the stepwise completion. Throws InvalidArgument for other
/// names.
CompletionResult complete_with(const std::string& method, const KnownBeliefs& known,
                               const CompletionOptions& options, bool stepwise_fallback = false);

}  // namespace belief_forge
