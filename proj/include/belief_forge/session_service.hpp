#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "belief_forge/journal.hpp"

namespace httplib {
class Server;
}

namespace belief_forge {

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;

  /// Wire form. Result documents come out byte-identical to serialize_result.
  std::string text() const { return body.is_null() ? std::string() : body.dump(2) + "\n"; }
};

/// Elicitation sessions behind a transport-neutral request interface.
/// Safe for concurrent use: the session table and each session have their
/// own locks.
class SessionService {
 public:
  /// With a journal path, existing events are replayed first and new
  /// events are appended.
  explicit SessionService(std::optional<std::filesystem::path> journal = std::nullopt,
                          std::optional<std::size_t> cap_override = std::nullopt);
  ~SessionService();

  ServiceResponse create(std::string_view body);
  ServiceResponse state(const std::string& id) const;
  ServiceResponse answer(const std::string& id, std::string_view body);
  ServiceResponse result(const std::string& id) const;
  ServiceResponse remove(const std::string& id);

  std::size_t size() const;

 private:
  struct Entry;
  std::shared_ptr<Entry> find(const std::string& id) const;

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
  std::optional<std::size_t> cap_override_;
  std::unique_ptr<Journal> journal_;
};

/// Routes:
///   POST   /sessions               spec document -> 201 {id, state}
///   GET    /sessions/{id}          state
///   POST   /sessions/{id}/answer   {"set": [...], "belief": v} or {"set": [...], "unavailable": true}
///   GET    /sessions/{id}/result   result document once completed
///   DELETE /sessions/{id}
void mount(httplib::Server& server, SessionService& service);

/// Blocks serving on host:port until the server is stopped.
bool serve(SessionService& service, const std::string& host, int port);

}  // namespace belief_forge
