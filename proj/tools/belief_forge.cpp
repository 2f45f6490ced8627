// belief-forge: complete, check, and elicit partially specified belief functions.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "belief_forge/session_service.hpp"

using namespace belief_forge;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInfeasible = 2;

struct Settings {
  std::string spec_path;
  std::string method;
  std::optional<std::size_t> cap;
  bool stepwise = false;
  bool as_json = false;
  std::vector<std::string> queries;
  std::string journal;
  std::string bind = "127.0.0.1";
  int port = 8080;
};

std::string read_input(const std::string& path) {
  std::stringstream text;
  if (path == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read " + path);
    text << in.rdbuf();
  }
  return text.str();
}

// --cap wins, then BELIEF_FORGE_CAP, then the spec's own cap.
std::optional<std::size_t> cap_override(const Settings& s) {
  if (s.cap) return s.cap;
  if (const char* env = std::getenv("BELIEF_FORGE_CAP"); env && *env) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw InvalidArgument(std::string("BELIEF_FORGE_CAP is not a number: ") + env);
    return static_cast<std::size_t>(v);
  }
  return std::nullopt;
}

std::string method_for(const Settings& s, const SpecDocument& spec) {
  if (!s.method.empty()) return s.method;
  return spec.method.value_or("min-spec");
}

Subset parse_query(const Frame& frame, const std::string& text) {
  Labels labels;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) labels.push_back(item);
  }
  return frame.subset(labels);
}

void print_report_text(std::ostream& out, const Frame& frame, const ExistenceReport& report) {
  out << "condition: " << (report.condition == Condition::kClosed ? "closed" : "focusing") << "\n";
  for (const auto& r : report.records) {
    out << "  " << (r.pass ? "ok  " : "FAIL") << " " << frame.format(r.set)
        << "  rhs=" << to_exact_string(r.rhs) << "  residual=" << to_exact_string(r.residual)
        << " (" << to_decimal_string(r.residual) << ")";
    if (r.provably_impossible) out << "  provably impossible";
    out << "\n";
  }
  out << "verdict: " << to_string(report.verdict) << "\n";
}

// Closed families are judged by the plain intersection condition.
ExistenceReport existence_report(const KnownBeliefs& known) {
  try {
    return check_closed(known);
  } catch (const FamilyNotClosed&) {
    return check_focusing(known);
  }
}

int report_failure(const Frame& frame, const std::string& message, const ExistenceReport* report) {
  std::cerr << "belief-forge: " << message << "\n";
  json doc = {{"error", message}};
  if (report) doc["existence"] = to_json(make_report_entry(frame, *report));
  std::cout << doc.dump(2) << "\n";
  return kInfeasible;
}

int cmd_complete(const Settings& s) {
  SpecDocument spec = parse_spec(read_input(s.spec_path));
  KnownBeliefs known = spec.known();
  const std::string method = method_for(s, spec);
  try {
    CompletionResult r = complete_with(method, known, options_for(spec, cap_override(s)),
                                       s.stepwise || spec.stepwise.value_or(false));
    std::cout << serialize_result(make_result_document(r, spec.queries));
    return kOk;
  } catch (const NoCompatibleBelief& e) {
    const ExistenceReport report = existence_report(known);
    return report_failure(known.frame(), e.what(), &report);
  } catch (const FocusingInapplicable& e) {
    return report_failure(known.frame(), e.what(), &e.report);
  }
}

int cmd_check(const Settings& s) {
  SpecDocument spec = parse_spec(read_input(s.spec_path));
  KnownBeliefs known = spec.known();
  const ExistenceReport report = existence_report(known);
  if (s.as_json) {
    std::cout << to_json(make_report_entry(known.frame(), report)).dump(2) << "\n";
  } else {
    print_report_text(std::cout, known.frame(), report);
  }
  return report.verdict == Verdict::kProvablyImpossible ? kInfeasible : kOk;
}

int cmd_info(const Settings& s) {
  SpecDocument spec = parse_spec(read_input(s.spec_path));
  KnownBeliefs known = spec.known();
  const Frame& frame = known.frame();
  CompletionResult r = complete_with(method_for(s, spec), known, options_for(spec, cap_override(s)),
                                     s.stepwise || spec.stepwise.value_or(false));
  std::vector<Subset> sets;
  for (const auto& q : spec.queries) sets.push_back(frame.subset(q));
  for (const auto& q : s.queries) sets.push_back(parse_query(frame, q));
  if (sets.empty()) {
    for (const auto& [a, v] : known.values()) {
      if (!a.empty()) sets.push_back(a);
    }
  }

  std::cout << "method: " << method_tag(r.method, r.stage) << "\n";
  std::cout << "specificity: " << to_exact_string(specificity(r.mass)) << " ("
            << to_decimal_string(specificity(r.mass)) << ")\n";
  std::cout << "focal elements:\n";
  for (const auto& [a, m] : r.mass.entries()) {
    std::cout << "  " << frame.format(a) << "  " << to_exact_string(m) << " (" << to_decimal_string(m) << ")\n";
  }
  std::cout << "set  Bel  Pl:\n";
  for (Subset a : sets) {
    std::cout << "  " << frame.format(a) << "  " << to_exact_string(belief_from_mass(r.mass, a)) << "  "
              << to_exact_string(plausibility(r.mass, a)) << "\n";
  }
  return kOk;
}

int cmd_elicit(const Settings& s) {
  SpecDocument spec = parse_spec(read_input(s.spec_path));
  const auto cap = cap_override(s);
  const std::string session_id = "cli";

  std::optional<ElicitationSession> session;
  std::unique_ptr<Journal> journal;
  if (!s.journal.empty()) {
    if (std::filesystem::exists(s.journal)) {
      auto replayed = replay_journal(read_input(s.journal), cap);
      if (auto it = replayed.find(session_id); it != replayed.end()) {
        if (!(it->second.spec == spec)) throw InvalidArgument("journal " + s.journal + " belongs to another spec");
        session.emplace(std::move(it->second.session));
      }
    }
    journal = std::make_unique<Journal>(s.journal);
    if (!session) journal->record_spec(session_id, spec);
  }
  if (!session) session.emplace(spec.known(), options_for(spec, cap));

  const Frame frame = spec.make_frame();
  while (session->pending()) {
    const Question& q = *session->pending();
    std::cerr << "\nfailed conditions:\n";
    for (const auto& r : session->report().failing()) {
      std::cerr << "  " << frame.format(r.set) << "  needs " << to_decimal_string(r.rhs) << ", has residual "
                << to_decimal_string(r.residual) << "\n";
    }
    auto [lo, hi] = session->known().admissible_range(q.set);
    std::cerr << "Bel(" << frame.format(q.set) << ") = ? [" << to_decimal_string(lo) << ", "
              << to_decimal_string(hi) << "], or 'unavailable': ";
    std::string line;
    if (!std::getline(std::cin, line)) {
      std::cerr << "\nbelief-forge: input ended with a question pending\n";
      return kUsage;
    }
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    const Labels labels = frame.labels_of(q.set);
    if (line == "unavailable") {
      if (journal) journal->record_unavailable(session_id, labels);
      session->answer_unavailable();
      continue;
    }
    Rational value;
    try {
      value = parse_rational(line);
    } catch (const InvalidArgument& e) {
      std::cerr << "  " << e.what() << "\n";
      continue;
    }
    if (sgn(value) < 0 || value > 1) {
      std::cerr << "  belief must lie in [0, 1]\n";
      continue;
    }
    if (journal) journal->record_answer(session_id, labels, value);
    try {
      session->answer(value);
    } catch (const MonotonicityViolation& e) {
      std::cerr << "  rejected: " << e.what() << "\n";
    }
  }

  switch (session->status()) {
    case SessionStatus::kCompleted:
      std::cout << serialize_result(make_result_document(*session->result(), spec.queries));
      return kOk;
    default:
      return report_failure(frame, "elicitation ended " + to_string(session->status()), &session->report());
  }
}

int cmd_serve(const Settings& s) {
  std::optional<std::filesystem::path> journal;
  if (!s.journal.empty()) journal = s.journal;
  SessionService service(journal, cap_override(s));
  std::cerr << "belief-forge: serving on http://" << s.bind << ":" << s.port << "\n";
  if (!serve(service, s.bind, s.port)) {
    std::cerr << "belief-forge: cannot listen on " << s.bind << ":" << s.port << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complete partially specified belief functions"};
  app.require_subcommand(1);
  Settings s;

  auto add_spec = [&s](CLI::App* cmd) { cmd->add_option("SPEC", s.spec_path, "Spec file, or - for stdin")->required(); };
  auto add_method = [&s](CLI::App* cmd) {
    cmd->add_option("--method", s.method, "min-spec, focusing, closed or stepwise")
        ->check(CLI::IsMember({"min-spec", "min-specificity", "focusing", "closed", "stepwise"}));
    cmd->add_option("--cap", s.cap, "Largest face enumerated exactly");
    cmd->add_flag("--stepwise", s.stepwise, "Fall back to stepwise when focusing is inapplicable");
  };

  auto* complete = app.add_subcommand("complete", "Write the completed belief as a result document");
  add_method(complete);
  add_spec(complete);

  auto* check = app.add_subcommand("check", "Report the existence conditions");
  check->add_flag("--json", s.as_json, "Print the report as JSON");
  add_spec(check);

  auto* info = app.add_subcommand("info", "Summarize a completion");
  add_method(info);
  info->add_option("--query", s.queries, "Comma-separated labels, repeatable");
  add_spec(info);

  auto* elicit = app.add_subcommand("elicit", "Ask for missing beliefs on the terminal");
  elicit->add_option("--cap", s.cap, "Largest face enumerated exactly");
  elicit->add_option("--journal", s.journal, "Append answers here; resumes an existing journal");
  add_spec(elicit);

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP session API");
  serve_cmd->add_option("--port", s.port, "TCP port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--bind", s.bind, "Address to bind");
  serve_cmd->add_option("--cap", s.cap, "Largest face enumerated exactly");
  serve_cmd->add_option("--journal", s.journal, "Session journal to replay and append to");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*complete) return cmd_complete(s);
    if (*check) return cmd_check(s);
    if (*info) return cmd_info(s);
    if (*elicit) return cmd_elicit(s);
    return cmd_serve(s);
  } catch (const MonotonicityViolation& e) {
    std::cerr << "belief-forge: " << e.what() << "\n";
    return kInfeasible;
  } catch (const Infeasible& e) {
    std::cerr << "belief-forge: " << e.what() << "\n";
    return kInfeasible;
  } catch (const FocusingInapplicable& e) {
    std::cerr << "belief-forge: " << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "belief-forge: " << e.what() << "\n";
    return kUsage;
  }
}
