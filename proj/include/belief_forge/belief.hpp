#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "belief_forge/errors.hpp"
#include "belief_forge/rational.hpp"
#include "belief_forge/subset.hpp"

namespace belief_forge {

/// Möbius inversion produced a negative mass; `witness` is the offending set.
class NotABeliefFunction : public Error {
 public:
  NotABeliefFunction(Subset witness, const std::string& what) : Error(what), witness(witness) {}
  Subset witness;
};

/// A belief value would break monotonicity under inclusion.
/// [lower, upper] is the range the value had to fall in.
class MonotonicityViolation : public Error {
 public:
  MonotonicityViolation(Subset set, Rational lower, Rational upper, const std::string& what)
      : Error(what), set(set), lower(std::move(lower)), upper(std::move(upper)) {}
  Subset set;
  Rational lower;
  Rational upper;
};

/// Nonnegative masses on nonempty subsets summing to exactly one.
/// Only strictly positive entries are stored.
class MassAssignment {
 public:
  /// Throws InvalidArgument on negative masses, mass on the empty set,
  /// duplicate sets, sets outside the frame, or a total other than one.
  MassAssignment(Frame frame, std::vector<std::pair<Subset, Rational>> entries);

  static MassAssignment vacuous(Frame frame);

  const Frame& frame() const { return frame_; }
  const std::map<Subset, Rational>& entries() const { return entries_; }
  Rational operator()(Subset a) const;

  friend bool operator==(const MassAssignment&, const MassAssignment&) = default;

 private:
  Frame frame_;
  std::map<Subset, Rational> entries_;
};

/// Belief values for every subset of a frame, indexed by mask (n <= 20).
class BeliefTable {
 public:
  static constexpr std::size_t kMaxFrame = 20;

  /// Raw table; no belief-function axioms are checked here.
  BeliefTable(Frame frame, std::vector<Rational> values);
  static BeliefTable from_mass(const MassAssignment& m);

  const Frame& frame() const { return frame_; }
  const Rational& operator()(Subset a) const { return values_.at(a.bits()); }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const BeliefTable&, const BeliefTable&) = default;

 private:
  Frame frame_;
  std::vector<Rational> values_;
};

/// Sum of the masses of the focal elements inside `a`.
Rational belief_from_mass(const MassAssignment& m, Subset a);

/// Möbius inversion of a materialized table. Throws NotABeliefFunction.
MassAssignment mass_from_belief(const BeliefTable& bel);

/// 1 - Bel(complement of a).
Rational plausibility(const MassAssignment& m, Subset a);

/// Sum over focal elements of m(A)/|A|.
Rational specificity(const MassAssignment& m);

SetFamily focal_elements(const MassAssignment& m);

enum class Commitment { kEqual, kLessOrEqual, kGreaterOrEqual, kIncomparable };

/// Pointwise comparison: kLessOrEqual means the first belief is less committed.
Commitment less_committed(const BeliefTable& first, const BeliefTable& second);

/// Bel(B1 u ... u Bk) minus the inclusion-exclusion sum over intersections.
Rational superadditivity_defect(const MassAssignment& m, std::span<const Subset> sets);

/// Σ_{∅≠I⊆{0..k-1}} (-1)^{|I|+1} term(I), with I passed as a bitmask.
template <typename Term>
Rational inclusion_exclusion(std::size_t k, Term&& term) {
  Rational sum = 0;
  const std::uint64_t limit = std::uint64_t{1} << k;
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    if (std::popcount(mask) % 2 == 1) {
      sum += term(mask);
    } else {
      sum -= term(mask);
    }
  }
  return sum;
}

/// Belief values known on a family H. The empty set (value 0) and the whole
/// frame (value 1) are always members.
class KnownBeliefs {
 public:
  /// Throws InvalidArgument for values outside [0, 1], conflicting duplicates,
  /// or sets outside the frame; MonotonicityViolation when A ⊆ B but a > b.
  KnownBeliefs(Frame frame, std::vector<std::pair<Subset, Rational>> values);

  const Frame& frame() const { return frame_; }
  const SetFamily& family() const { return family_; }
  const std::map<Subset, Rational>& values() const { return values_; }
  bool contains(Subset a) const { return family_.contains(a); }
  /// Throws InvalidArgument when `a` is not in the family.
  const Rational& value(Subset a) const;

  /// Tightest [lower, upper] that keeps a new value for `a` monotone.
  std::pair<Rational, Rational> admissible_range(Subset a) const;

  /// Copy with Bel(a) = v added. Throws MonotonicityViolation.
  KnownBeliefs with(Subset a, const Rational& v) const;

  friend bool operator==(const KnownBeliefs&, const KnownBeliefs&) = default;

 private:
  Frame frame_;
  SetFamily family_;
  std::map<Subset, Rational> values_;
};

/// Known values read off a belief function on its focal family.
KnownBeliefs known_on_focal_family(const MassAssignment& m);

/// Recursive BEL_H evaluator. Queries are normalized to their maximal
/// antichain before memoization; a query with no members evaluates to 0.
class BelHEvaluator {
 public:
  explicit BelHEvaluator(const KnownBeliefs& known) : known_(known) {}
  Rational operator()(const SetFamily& query);

 private:
  const KnownBeliefs& known_;
  std::map<std::vector<std::uint64_t>, Rational> memo_;
};

/// BEL_H by recursion over meets within the family. Throws InvalidArgument
/// if some query member is not in `known.family()`.
Rational bel_h(const KnownBeliefs& known, const SetFamily& query);

/// Signed masses on the members of a family.
using FamilyMasses = std::map<Subset, Rational>;

/// BEL_H as the total mass of family members below some query member.
Rational bel_h_from_masses(const FamilyMasses& masses, const SetFamily& query);

/// Masses on every member of the family, processed in inclusion order.
/// Values may be negative; their signs are the focusing existence test.
FamilyMasses mass_on_family(const KnownBeliefs& known);

/// Belief of `a` from values known on a family containing all focal
/// elements: the stored value for members, the meet-based inclusion-exclusion
/// over the maximal members below `a` otherwise.
Rational belief_from_focal_values(const KnownBeliefs& known, Subset a);

}  // namespace belief_forge
