#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "belief_forge/documents.hpp"
#include "belief_forge/elicitation.hpp"

namespace belief_forge {

/// Append-only JSON-lines log of elicitation events. Each line names its
/// session, so one file can hold many sessions.
///
///   {"event":"spec","session":"s1","spec":{...}}
///   {"event":"answer","session":"s1","set":[...],"belief":"1/5"}
///   {"event":"unavailable","session":"s1","set":[...]}
///   {"event":"delete","session":"s1"}
class Journal {
 public:
  explicit Journal(const std::filesystem::path& path);

  void record_spec(const std::string& session, const SpecDocument& spec);
  void record_answer(const std::string& session, const Labels& set, const Rational& value);
  void record_unavailable(const std::string& session, const Labels& set);
  void record_delete(const std::string& session);

 private:
  void write(const nlohmann::json& line);

  std::mutex mutex_;
  std::ofstream out_;
};

struct ReplayedSession {
  SpecDocument spec;
  ElicitationSession session;
};

/// Effective options for a spec: the spec's cap unless `cap_override` is set.
CompletionOptions options_for(const SpecDocument& spec, std::optional<std::size_t> cap_override);

/// Rebuilds every non-deleted session by re-applying its events in order.
/// Rejected answers are re-applied and rejected again. Throws ParseError on
/// malformed lines or answers that do not match the pending question.
std::map<std::string, ReplayedSession> replay_journal(
    std::string_view text, std::optional<std::size_t> cap_override = std::nullopt);

}  // namespace belief_forge
