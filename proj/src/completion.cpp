#include "belief_forge/completion.hpp"

#include <algorithm>
#include <map>

namespace belief_forge {
namespace {

/// Inclusion-exclusion over plain intersections of `lower`, using known values.
Rational intersection_bound(const KnownBeliefs& known, const SetFamily& lower) {
  const auto& sets = lower.members();
  return inclusion_exclusion(sets.size(), [&](std::uint64_t mask) {
    return known.value(intersect_selected(sets, mask));
  });
}

bool all_intersections_known(const KnownBeliefs& known, const SetFamily& lower) {
  const auto& sets = lower.members();
  const std::uint64_t limit = std::uint64_t{1} << sets.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    if (!known.contains(intersect_selected(sets, mask))) return false;
  }
  return true;
}

Verdict summarize(std::vector<ConditionRecord>& records) {
  bool any_fail = false;
  bool impossible = false;
  for (const auto& r : records) {
    any_fail |= !r.pass;
    impossible |= r.provably_impossible;
  }
  if (impossible) return Verdict::kProvablyImpossible;
  return any_fail ? Verdict::kFocusingInapplicable : Verdict::kConsistent;
}

MassAssignment mass_from_family(const Frame& frame, const FamilyMasses& masses) {
  std::vector<std::pair<Subset, Rational>> entries;
  for (const auto& [set, mass] : masses) {
    if (!set.empty()) entries.emplace_back(set, mass);
  }
  return MassAssignment(frame, std::move(entries));
}

struct FaceAverage {
  std::vector<Rational> x;
  SymmetryInfo symmetry;
};

FaceAverage symmetric_optimum(const LinearProgram& lp, const LpOutcome& outcome,
                              std::size_t cap) {
  if (lp.variables() > cap) return {outcome.vertex, SymmetryInfo{1, false}};
  try {
    auto vertices = optimal_face_vertices(lp, outcome, cap);
    return {average(vertices), SymmetryInfo{vertices.size(), true}};
  } catch (const CapExceeded&) {
    return {outcome.vertex, SymmetryInfo{1, false}};
  }
}

std::string infeasible_message(const KnownBeliefs& known, const ExistenceReport& report) {
  std::string msg = "no belief function is compatible with the known values";
  for (const auto& r : report.records) {
    if (r.provably_impossible) {
      msg += "; the condition at " + known.frame().format(r.set) +
             " fails with every needed intersection known";
      break;
    }
  }
  return msg;
}

}  // namespace

std::vector<ConditionRecord> ExistenceReport::failing() const {
  std::vector<ConditionRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const ConditionRecord& r) { return !r.pass; });
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kFocusingInapplicable: return "focusing-inapplicable";
    case Verdict::kProvablyImpossible: return "provably-impossible";
  }
  return "unknown";
}

std::string method_tag(Method method, std::size_t stage) {
  switch (method) {
    case Method::kMinSpecificity: return "min-specificity";
    case Method::kClosedDirect: return "closed-direct";
    case Method::kFocusing: return "focusing";
    case Method::kStepwise: return "stepwise(" + std::to_string(stage) + ")";
  }
  return "unknown";
}

MassProgram build_mass_program(const KnownBeliefs& known, const SetFamily& variables) {
  MassProgram prog;
  for (Subset v : variables) {
    if (!v.empty()) prog.variables.push_back(v);
  }
  for (Subset v : prog.variables) prog.lp.objective.emplace_back(1, v.cardinality());
  for (const auto& [a, value] : known.values()) {
    if (a.empty()) continue;
    std::vector<Rational> row(prog.variables.size());
    for (std::size_t j = 0; j < prog.variables.size(); ++j) {
      if (prog.variables[j].is_subset_of(a)) row[j] = 1;
    }
    prog.lp.rows.push_back(std::move(row));
    prog.lp.rhs.push_back(value);
  }
  return prog;
}

MassAssignment mass_from_solution(const Frame& frame, const std::vector<Subset>& variables,
                                  const std::vector<Rational>& x) {
  std::vector<std::pair<Subset, Rational>> entries;
  for (std::size_t j = 0; j < variables.size(); ++j) entries.emplace_back(variables[j], x[j]);
  return MassAssignment(frame, std::move(entries));
}

ExistenceReport check_closed(const KnownBeliefs& known) {
  if (auto w = closure_witness(known.family())) {
    throw FamilyNotClosed(w->first, w->second,
                          "family is not closed under intersection: " +
                              known.frame().format(w->first) + " ∩ " +
                              known.frame().format(w->second) + " is missing");
  }
  ExistenceReport report;
  report.condition = Condition::kClosed;
  for (Subset a : known.family()) {
    if (a.empty()) continue;
    ConditionRecord rec;
    rec.set = a;
    rec.lower = strict_lower_family(known.family(), a);
    rec.rhs = intersection_bound(known, rec.lower);
    rec.residual = known.value(a) - rec.rhs;
    rec.pass = sgn(rec.residual) >= 0;
    rec.provably_impossible = !rec.pass;
    report.records.push_back(std::move(rec));
  }
  report.verdict = summarize(report.records);
  return report;
}

Rational closed_belief(const KnownBeliefs& known, Subset a) {
  if (known.contains(a)) return known.value(a);
  return intersection_bound(known, strict_lower_family(known.family(), a));
}

CompletionResult complete_closed(const KnownBeliefs& known) {
  ExistenceReport report = check_closed(known);
  if (!report.consistent()) throw NoCompatibleBelief(report, infeasible_message(known, report));
  MassAssignment mass = mass_from_family(known.frame(), mass_on_family(known));
  return CompletionResult{std::move(mass), Method::kClosedDirect, 0, {}, std::move(report)};
}

ExistenceReport check_focusing(const KnownBeliefs& known) {
  ExistenceReport report;
  report.condition = Condition::kFocusing;
  FamilyMasses masses = mass_on_family(known);
  for (Subset a : known.family()) {
    if (a.empty()) continue;
    ConditionRecord rec;
    rec.set = a;
    rec.lower = strict_lower_family(known.family(), a);
    // The meet-based inclusion-exclusion over `lower` telescopes to the
    // signed mass of every member strictly below `a`.
    rec.residual = masses.at(a);
    rec.rhs = known.value(a) - rec.residual;
    rec.pass = sgn(rec.residual) >= 0;
    rec.provably_impossible = !rec.pass && all_intersections_known(known, rec.lower);
    report.records.push_back(std::move(rec));
  }
  report.verdict = summarize(report.records);
  return report;
}

CompletionResult complete_focusing(const KnownBeliefs& known) {
  ExistenceReport report = check_focusing(known);
  if (!report.consistent()) {
    const auto failing = report.failing();
    throw FocusingInapplicable(report, "focusing condition fails at " +
                                           known.frame().format(failing.front().set) +
                                           " (residual " +
                                           to_exact_string(failing.front().residual) + ")");
  }
  MassAssignment mass = mass_from_family(known.frame(), mass_on_family(known));
  return CompletionResult{std::move(mass), Method::kFocusing, 0, {}, std::move(report)};
}

bool detect_impossible(const KnownBeliefs& known, Subset a) {
  if (!known.contains(a) || a.empty()) return false;
  SetFamily lower = strict_lower_family(known.family(), a);
  if (!all_intersections_known(known, lower)) return false;
  return known.value(a) < intersection_bound(known, lower);
}

std::optional<Question> next_question(const KnownBeliefs& known) {
  ExistenceReport report = check_focusing(known);
  for (const auto& rec : report.records) {
    if (rec.pass) continue;
    const std::size_t k = rec.lower.size();
    std::optional<Question> best;
    const std::uint64_t limit = std::uint64_t{1} << k;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      Subset candidate = intersect_selected(rec.lower.members(), mask);
      if (known.contains(candidate)) continue;
      const auto order = static_cast<std::size_t>(std::popcount(mask));
      if (!best || order < best->order || (order == best->order && candidate < best->set)) {
        best = Question{candidate, rec.set, rec.lower, order};
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

CompletionResult complete_min_specificity(const KnownBeliefs& known,
                                          const CompletionOptions& options) {
  ExistenceReport report = check_focusing(known);
  MassProgram prog = build_mass_program(known, intersection_closure(known.family()));
  LpOutcome outcome = solve(prog.lp);
  if (outcome.status != LpStatus::kOptimal) {
    throw NoCompatibleBelief(report, infeasible_message(known, report));
  }
  FaceAverage face = symmetric_optimum(prog.lp, outcome, options.face_cap);
  return CompletionResult{mass_from_solution(known.frame(), prog.variables, face.x),
                          Method::kMinSpecificity, 0, face.symmetry, std::move(report)};
}

CompletionResult complete_stepwise(const KnownBeliefs& known, const CompletionOptions& options) {
  ExistenceReport report = check_focusing(known);
  const SetFamily& family = known.family();
  SetFamily candidates;
  std::optional<std::size_t> previous_size;
  std::vector<Subset> previous_variables;
  WarmStart warm;

  for (std::size_t j = 1; j <= family.size(); ++j) {
    candidates = candidates.united(stratum(family, j));
    if (previous_size && *previous_size == candidates.size()) continue;
    previous_size = candidates.size();

    MassProgram prog = build_mass_program(known, candidates);
    // Carry the previous stage's phase-one basis over to the new columns.
    WarmStart mapped(warm.size());
    for (std::size_t r = 0; r < warm.size(); ++r) {
      if (!warm[r]) continue;
      Subset s = previous_variables[*warm[r]];
      auto it = std::lower_bound(prog.variables.begin(), prog.variables.end(), s);
      mapped[r] = static_cast<std::size_t>(it - prog.variables.begin());
    }
    LpOutcome outcome = solve(prog.lp, warm.empty() ? nullptr : &mapped);
    if (outcome.status == LpStatus::kOptimal) {
      FaceAverage face = symmetric_optimum(prog.lp, outcome, options.face_cap);
      return CompletionResult{mass_from_solution(known.frame(), prog.variables, face.x),
                              Method::kStepwise, j, face.symmetry, std::move(report)};
    }
    warm = outcome.phase_one_basis;
    previous_variables = prog.variables;
  }
  throw NoCompatibleBelief(report, infeasible_message(known, report));
}

}  // namespace belief_forge
