#include "belief_forge/journal.hpp"

#include <sstream>

namespace belief_forge {

using nlohmann::json;

Journal::Journal(const std::filesystem::path& path) : out_(path, std::ios::app) {
  if (!out_) throw InvalidArgument("cannot open journal " + path.string());
}

void Journal::write(const json& line) {
  std::lock_guard lock(mutex_);
  out_ << line.dump() << '\n';
  out_.flush();
}

void Journal::record_spec(const std::string& session, const SpecDocument& spec) {
  write({{"event", "spec"}, {"session", session}, {"spec", to_json(spec)}});
}

void Journal::record_answer(const std::string& session, const Labels& set, const Rational& value) {
  write({{"event", "answer"}, {"session", session}, {"set", set}, {"belief", to_exact_string(value)}});
}

void Journal::record_unavailable(const std::string& session, const Labels& set) {
  write({{"event", "unavailable"}, {"session", session}, {"set", set}});
}

void Journal::record_delete(const std::string& session) {
  write({{"event", "delete"}, {"session", session}});
}

CompletionOptions options_for(const SpecDocument& spec, std::optional<std::size_t> cap_override) {
  CompletionOptions options;
  if (spec.cap) options.face_cap = *spec.cap;
  if (cap_override) options.face_cap = *cap_override;
  return options;
}

std::map<std::string, ReplayedSession> replay_journal(std::string_view text,
                                                      std::optional<std::size_t> cap_override) {
  std::map<std::string, ReplayedSession> sessions;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto bad = [&](const std::string& why) { return ParseError(line_no, 1, "", why); };
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw bad(e.what());
    }
    if (!j.is_object() || !j.contains("event") || !j.contains("session")) throw bad("missing event or session");
    const std::string event = j["event"].get<std::string>();
    const std::string id = j["session"].get<std::string>();

    if (event == "spec") {
      SpecDocument spec = spec_from_json(j.at("spec"));
      ElicitationSession session(spec.known(), options_for(spec, cap_override));
      sessions.insert_or_assign(id, ReplayedSession{std::move(spec), std::move(session)});
      continue;
    }
    auto it = sessions.find(id);
    if (it == sessions.end()) throw bad("event for unknown session '" + id + "'");
    if (event == "delete") {
      sessions.erase(it);
      continue;
    }
    ElicitationSession& s = it->second.session;
    const Frame frame = it->second.spec.make_frame();
    if (!s.pending()) throw bad("answer recorded for a session with no pending question");
    Labels set = j.at("set").get<Labels>();
    if (frame.subset(set) != s.pending()->set) throw bad("answer does not match the pending question");
    if (event == "answer") {
      try {
        s.answer(parse_rational(j.at("belief").get<std::string>()));
      } catch (const MonotonicityViolation&) {
        // rejected at record time too
      } catch (const InvalidArgument&) {
        // rejected at record time too
      }
    } else if (event == "unavailable") {
      s.answer_unavailable();
    } else {
      throw bad("unknown event '" + event + "'");
    }
  }
  return sessions;
}

}  // namespace belief_forge
