#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "belief_forge/completion.hpp"

namespace belief_forge {

/// An expert's answer: a belief value, or std::nullopt for "unavailable".
using OracleAnswer = std::optional<Rational>;
using ElicitationOracle = std::function<OracleAnswer(const Question&)>;

enum class SessionStatus { kPending, kCompleted, kImpossible, kExhausted };

std::string to_string(SessionStatus s);

/// Raised when an answer arrives but no question is pending.
class NoPendingQuestion : public Error {
 public:
  using Error::Error;
};

struct HistoryEntry {
  Subset asked;
  OracleAnswer answer;
  bool accepted = true;
};

/// The interactive focusing loop as an explicit state machine. Each answer
/// is appended to the history, so replaying the same answers against the
/// same initial beliefs reproduces the same states.
class ElicitationSession {
 public:
  explicit ElicitationSession(KnownBeliefs initial, CompletionOptions options = {});

  SessionStatus status() const { return status_; }
  bool terminal() const { return status_ != SessionStatus::kPending; }
  const KnownBeliefs& initial() const { return initial_; }
  const KnownBeliefs& known() const { return known_; }
  const std::vector<HistoryEntry>& history() const { return history_; }
  /// Existence report for the current known beliefs.
  const ExistenceReport& report() const { return report_; }
  const std::optional<Question>& pending() const { return pending_; }
  const std::optional<CompletionResult>& result() const { return result_; }
  std::size_t questions_answered() const;

  /// Adds Bel(pending set) = value. A value that breaks monotonicity is
  /// recorded as rejected, the question stays pending, and
  /// MonotonicityViolation is thrown. NoPendingQuestion if terminal.
  void answer(const Rational& value);

  /// The expert cannot answer: hands off to the stepwise completion.
  void answer_unavailable();

 private:
  void advance();

  KnownBeliefs initial_;
  KnownBeliefs known_;
  CompletionOptions options_;
  std::vector<HistoryEntry> history_;
  ExistenceReport report_;
  SessionStatus status_ = SessionStatus::kPending;
  std::optional<Question> pending_;
  std::optional<CompletionResult> result_;
};

/// Drives a session to a terminal state by asking `oracle`. A rejected
/// answer is re-asked up to `max_retries` times before the violation
/// propagates.
ElicitationSession elicit(KnownBeliefs known, const ElicitationOracle& oracle,
                          CompletionOptions options = {}, std::size_t max_retries = 3);

}  // namespace belief_forge
