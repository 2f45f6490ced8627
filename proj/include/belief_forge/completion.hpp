#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "belief_forge/belief.hpp"
#include "belief_forge/lp.hpp"

namespace belief_forge {

enum class Verdict { kConsistent, kFocusingInapplicable, kProvablyImpossible };

/// Which existence condition a report evaluates: plain intersections on an
/// intersection-closed family, or meets within an arbitrary family.
enum class Condition { kClosed, kFocusing };

/// Outcome of the existence condition at one member A of the family.
struct ConditionRecord {
  Subset set;
  SetFamily lower;    // maximal members strictly below `set`
  Rational rhs;       // inclusion-exclusion bound Bel(set) must reach
  Rational residual;  // Bel(set) - rhs
  bool pass = true;
  /// Failing, and every intersection of `lower` is already known.
  bool provably_impossible = false;
};

struct ExistenceReport {
  Condition condition = Condition::kFocusing;
  std::vector<ConditionRecord> records;
  Verdict verdict = Verdict::kConsistent;

  bool consistent() const { return verdict == Verdict::kConsistent; }
  std::vector<ConditionRecord> failing() const;
};

std::string to_string(Verdict v);

class FamilyNotClosed : public Error {
 public:
  FamilyNotClosed(Subset a, Subset b, const std::string& what) : Error(what), a(a), b(b) {}
  Subset a;
  Subset b;
};

class FocusingInapplicable : public Error {
 public:
  FocusingInapplicable(ExistenceReport report, const std::string& what)
      : Error(what), report(std::move(report)) {}
  ExistenceReport report;
};

/// No belief function is compatible with the known values.
class NoCompatibleBelief : public Infeasible {
 public:
  NoCompatibleBelief(ExistenceReport report, const std::string& what)
      : Infeasible(what), report(std::move(report)) {}
  ExistenceReport report;
};

enum class Method { kMinSpecificity, kClosedDirect, kFocusing, kStepwise };

struct SymmetryInfo {
  /// Distinct optimal vertices averaged; 1 for the direct methods.
  std::size_t vertices = 1;
  /// False when enumeration was skipped because of the cap; the mass is then
  /// one optimal vertex and may not be the only optimum.
  bool enumerated = true;
};

struct CompletionResult {
  MassAssignment mass;
  Method method;
  std::size_t stage = 0;  // stepwise only
  SymmetryInfo symmetry;
  ExistenceReport diagnostics;
};

/// "min-specificity", "closed-direct", "focusing" or "stepwise(j)".
std::string method_tag(Method method, std::size_t stage = 0);

struct CompletionOptions {
  std::size_t face_cap = kDefaultFaceCap;
};

/// Mass variables and the equality rows Σ_{B⊆A} m(B) = Bel(A), A ∈ H - {∅}.
struct MassProgram {
  std::vector<Subset> variables;
  LinearProgram lp;
};

/// Builds the minimum-specificity program over the nonempty members of
/// `variables`.
MassProgram build_mass_program(const KnownBeliefs& known, const SetFamily& variables);

/// Mass assignment from a feasible solution of a MassProgram.
MassAssignment mass_from_solution(const Frame& frame, const std::vector<Subset>& variables,
                                  const std::vector<Rational>& x);

/// Existence test for an intersection-closed family.
/// Throws FamilyNotClosed with the first pair whose intersection is missing.
ExistenceReport check_closed(const KnownBeliefs& known);

/// Belief of any set under the closed-family direct solution.
Rational closed_belief(const KnownBeliefs& known, Subset a);

/// Direct least-committed completion on a closed family.
/// Throws FamilyNotClosed or NoCompatibleBelief.
CompletionResult complete_closed(const KnownBeliefs& known);

/// Minimum-specificity completion over the intersection closure, averaged
/// over the optimal face. Throws NoCompatibleBelief.
CompletionResult complete_min_specificity(const KnownBeliefs& known,
                                          const CompletionOptions& options = {});

/// Existence test for a belief with focal elements inside the family.
ExistenceReport check_focusing(const KnownBeliefs& known);

/// Least committed completion with focal elements inside the family.
/// Throws FocusingInapplicable.
CompletionResult complete_focusing(const KnownBeliefs& known);

/// True when the condition fails at `a` and every intersection of the
/// maximal members below `a` is already known, so nothing can be compatible.
bool detect_impossible(const KnownBeliefs& known, Subset a);

/// A set whose belief the elicitation loop asks for next.
struct Question {
  Subset set;
  Subset failing;        // the member whose condition failed
  SetFamily lower;       // maximal known sets below `failing`
  std::size_t order = 0; // number of lower sets intersected to form `set`
};

/// Picks an intersection of the lower sets of the first failing member that
/// is not yet known, preferring fewer intersected sets, then canonical order.
/// nullopt when the focusing condition holds or no candidate exists.
std::optional<Question> next_question(const KnownBeliefs& known);

/// Minimum specificity over growing strata of intersections; stops at the
/// first feasible stage. Throws NoCompatibleBelief.
CompletionResult complete_stepwise(const KnownBeliefs& known,
                                   const CompletionOptions& options = {});

}  // namespace belief_forge
