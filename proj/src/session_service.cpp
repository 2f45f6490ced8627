#include "belief_forge/session_service.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"

namespace belief_forge {

using nlohmann::json;

struct SessionService::Entry {
  Entry(SpecDocument spec_in, ElicitationSession session_in)
      : spec(std::move(spec_in)), frame(spec.make_frame()), session(std::move(session_in)) {}

  std::mutex mutex;
  SpecDocument spec;
  Frame frame;
  ElicitationSession session;
};

namespace {

ServiceResponse error(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return {status, std::move(extra)};
}

json family_json(const Frame& frame, const SetFamily& family) {
  json out = json::array();
  for (Subset s : family) out.push_back(frame.labels_of(s));
  return out;
}

json state_json(const std::string& id, const SpecDocument& spec, const Frame& frame,
                const ElicitationSession& s) {
  json known = json::array();
  for (const auto& [set, value] : s.known().values()) {
    if (set.empty()) continue;
    known.push_back({{"set", frame.labels_of(set)}, {"belief", rational_json(value)}});
  }
  json failed = json::array();
  for (const ConditionRecord& r : s.report().failing()) {
    failed.push_back({{"set", frame.labels_of(r.set)},
                      {"lower", family_json(frame, r.lower)},
                      {"rhs", rational_json(r.rhs)},
                      {"residual", rational_json(r.residual)},
                      {"provably_impossible", r.provably_impossible}});
  }
  json question = nullptr;
  if (const auto& q = s.pending()) {
    auto [lo, hi] = s.known().admissible_range(q->set);
    question = {{"set", frame.labels_of(q->set)},
                {"failing", frame.labels_of(q->failing)},
                {"lower", family_json(frame, q->lower)},
                {"order", q->order},
                {"admissible", {{"lower", rational_json(lo)}, {"upper", rational_json(hi)}}}};
  }
  json history = json::array();
  for (const auto& h : s.history()) {
    history.push_back({{"set", frame.labels_of(h.asked)},
                       {"answer", h.answer ? rational_json(*h.answer) : json("unavailable")},
                       {"accepted", h.accepted}});
  }
  return {{"id", id},
          {"status", to_string(s.status())},
          {"frame", spec.frame},
          {"verdict", to_string(s.report().verdict)},
          {"known", known},
          {"failed", failed},
          {"question", question},
          {"history", history},
          {"questions_answered", s.questions_answered()}};
}

std::optional<std::size_t> numeric_id(const std::string& id) {
  if (id.size() < 2 || id[0] != 's') return std::nullopt;
  std::size_t n = 0;
  for (char c : id.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(c - '0');
  }
  return n;
}

}  // namespace

SessionService::SessionService(std::optional<std::filesystem::path> journal,
                               std::optional<std::size_t> cap_override)
    : cap_override_(cap_override) {
  if (!journal) return;
  if (std::filesystem::exists(*journal)) {
    std::ifstream in(*journal);
    std::stringstream text;
    text << in.rdbuf();
    for (auto& [id, r] : replay_journal(text.str(), cap_override_)) {
      sessions_.emplace(id, std::make_shared<Entry>(std::move(r.spec), std::move(r.session)));
    }
    // Ids stay unique even for sessions deleted before the restart.
    std::istringstream lines(text.str());
    std::string line;
    while (std::getline(lines, line)) {
      json j = json::parse(line, nullptr, false);
      if (!j.is_object() || !j.contains("session") || !j["session"].is_string()) continue;
      if (auto n = numeric_id(j["session"].get<std::string>())) next_id_ = std::max(next_id_, *n + 1);
    }
  }
  journal_ = std::make_unique<Journal>(*journal);
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionService::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

ServiceResponse SessionService::create(std::string_view body) {
  SpecDocument spec;
  std::optional<KnownBeliefs> known;
  try {
    spec = parse_spec(body);
    known.emplace(spec.known());
  } catch (const MonotonicityViolation& e) {
    return error(422, e.what());
  } catch (const ValueOutOfRange& e) {
    return error(422, e.what());
  } catch (const Error& e) {
    return error(400, e.what());
  }
  ElicitationSession session(std::move(*known), options_for(spec, cap_override_));

  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_id_++);
  if (journal_) journal_->record_spec(id, spec);
  auto entry = std::make_shared<Entry>(std::move(spec), std::move(session));
  json state = state_json(id, entry->spec, entry->frame, entry->session);
  sessions_.emplace(id, std::move(entry));
  return {201, {{"id", id}, {"state", state}}};
}

ServiceResponse SessionService::state(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error(404, "no session '" + id + "'");
  std::lock_guard lock(entry->mutex);
  return {200, state_json(id, entry->spec, entry->frame, entry->session)};
}

ServiceResponse SessionService::answer(const std::string& id, std::string_view body) {
  auto entry = find(id);
  if (!entry) return error(404, "no session '" + id + "'");
  std::lock_guard lock(entry->mutex);
  ElicitationSession& s = entry->session;
  const Frame& frame = entry->frame;

  json j;
  std::optional<Rational> value;
  bool unavailable = false;
  std::optional<Subset> named;
  try {
    j = parse_json(body);
    if (!j.is_object()) return error(400, "expected an object");
    for (const auto& [key, _] : j.items()) {
      if (key != "set" && key != "belief" && key != "unavailable") return error(400, "/" + key + ": unknown key");
    }
    if (j.contains("set")) named = frame.subset(labels_value(j["set"], frame, "/set"));
    unavailable = j.contains("unavailable") && j["unavailable"] == true;
    if (unavailable == j.contains("belief")) return error(400, "give exactly one of belief or unavailable: true");
    if (!unavailable) value = belief_value(j["belief"], "/belief");
  } catch (const ValueOutOfRange& e) {
    return error(422, e.what());
  } catch (const Error& e) {
    return error(400, e.what());
  }

  if (!s.pending()) {
    return error(409, "session is " + to_string(s.status()) + "; no question is pending",
                 {{"state", state_json(id, entry->spec, frame, s)}});
  }
  const Subset asked = s.pending()->set;
  if (named && *named != asked) {
    return error(409, "answer is for " + frame.format(*named) + " but the pending question is " +
                          frame.format(asked),
                 {{"state", state_json(id, entry->spec, frame, s)}});
  }
  const Labels labels = frame.labels_of(asked);
  if (unavailable) {
    if (journal_) journal_->record_unavailable(id, labels);
    s.answer_unavailable();
    return {200, state_json(id, entry->spec, frame, s)};
  }
  if (journal_) journal_->record_answer(id, labels, *value);
  try {
    s.answer(*value);
  } catch (const MonotonicityViolation& e) {
    return error(422, e.what(),
                 {{"admissible", {{"lower", rational_json(e.lower)}, {"upper", rational_json(e.upper)}}},
                  {"state", state_json(id, entry->spec, frame, s)}});
  }
  return {200, state_json(id, entry->spec, frame, s)};
}

ServiceResponse SessionService::result(const std::string& id) const {
  auto entry = find(id);
  if (!entry) return error(404, "no session '" + id + "'");
  std::lock_guard lock(entry->mutex);
  const ElicitationSession& s = entry->session;
  if (s.status() != SessionStatus::kCompleted) {
    return error(409, "session is " + to_string(s.status()),
                 {{"state", state_json(id, entry->spec, entry->frame, s)}});
  }
  return {200, to_json(make_result_document(*s.result(), entry->spec.queries))};
}

ServiceResponse SessionService::remove(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return error(404, "no session '" + id + "'");
  if (journal_) journal_->record_delete(id);
  sessions_.erase(it);
  return {204, nullptr};
}

void mount(httplib::Server& server, SessionService& service) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    if (!r.body.is_null()) res.set_content(r.text(), "application/json");
  };
  server.Post("/sessions", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.create(req.body));
  });
  server.Get(R"(/sessions/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.state(req.matches[1]));
  });
  server.Post(R"(/sessions/([^/]+)/answer)",
              [&service, reply](const httplib::Request& req, httplib::Response& res) {
                reply(res, service.answer(req.matches[1], req.body));
              });
  server.Get(R"(/sessions/([^/]+)/result)",
             [&service, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, service.result(req.matches[1]));
             });
  server.Delete(R"(/sessions/([^/]+))", [&service, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.remove(req.matches[1]));
  });
}

bool serve(SessionService& service, const std::string& host, int port) {
  httplib::Server server;
  mount(server, service);
  return server.listen(host, port);
}

}  // namespace belief_forge
