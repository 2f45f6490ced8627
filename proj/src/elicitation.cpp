#include "belief_forge/elicitation.hpp"

#include <algorithm>

namespace belief_forge {

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::kPending: return "pending";
    case SessionStatus::kCompleted: return "completed";
    case SessionStatus::kImpossible: return "impossible";
    case SessionStatus::kExhausted: return "exhausted";
  }
  return "unknown";
}

ElicitationSession::ElicitationSession(KnownBeliefs initial, CompletionOptions options)
    : initial_(initial), known_(std::move(initial)), options_(options) {
  advance();
}

std::size_t ElicitationSession::questions_answered() const {
  return static_cast<std::size_t>(std::count_if(
      history_.begin(), history_.end(), [](const HistoryEntry& h) { return h.accepted; }));
}

void ElicitationSession::advance() {
  pending_.reset();
  report_ = check_focusing(known_);
  if (report_.consistent()) {
    result_ = complete_focusing(known_);
    status_ = SessionStatus::kCompleted;
    return;
  }
  if (report_.verdict == Verdict::kProvablyImpossible) {
    status_ = SessionStatus::kImpossible;
    return;
  }
  // The closure is recomputed implicitly: candidates come from the current
  // family, including sets added by earlier answers.
  pending_ = next_question(known_);
  status_ = pending_ ? SessionStatus::kPending : SessionStatus::kExhausted;
}

void ElicitationSession::answer(const Rational& value) {
  if (!pending_) throw NoPendingQuestion("session is " + to_string(status_));
  const Subset asked = pending_->set;
  try {
    KnownBeliefs next = known_.with(asked, value);
    history_.push_back({asked, value, true});
    known_ = std::move(next);
  } catch (const MonotonicityViolation&) {
    history_.push_back({asked, value, false});
    throw;
  } catch (const InvalidArgument&) {
    history_.push_back({asked, value, false});
    throw;
  }
  advance();
}

void ElicitationSession::answer_unavailable() {
  if (!pending_) throw NoPendingQuestion("session is " + to_string(status_));
  history_.push_back({pending_->set, std::nullopt, true});
  pending_.reset();
  try {
    result_ = complete_stepwise(known_, options_);
    status_ = SessionStatus::kCompleted;
  } catch (const NoCompatibleBelief&) {
    status_ = SessionStatus::kImpossible;
  }
}

ElicitationSession elicit(KnownBeliefs known, const ElicitationOracle& oracle,
                          CompletionOptions options, std::size_t max_retries) {
  ElicitationSession session(std::move(known), options);
  std::size_t retries = 0;
  while (!session.terminal()) {
    OracleAnswer reply = oracle(*session.pending());
    if (!reply) {
      session.answer_unavailable();
      continue;
    }
    try {
      session.answer(*reply);
      retries = 0;
    } catch (const MonotonicityViolation&) {
      if (++retries > max_retries) throw;
    }
  }
  return session;
}

}  // namespace belief_forge
