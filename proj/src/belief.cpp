#include "belief_forge/belief.hpp"

#include <algorithm>

namespace belief_forge {

MassAssignment::MassAssignment(Frame frame, std::vector<std::pair<Subset, Rational>> entries)
    : frame_(std::move(frame)) {
  Rational total = 0;
  for (auto& [set, mass] : entries) {
    if (!frame_.owns(set)) throw InvalidArgument("mass on a set outside the frame");
    if (sgn(mass) < 0) {
      throw InvalidArgument("negative mass on " + frame_.format(set));
    }
    if (sgn(mass) == 0) continue;
    if (set.empty()) throw InvalidArgument("positive mass on the empty set");
    if (!entries_.emplace(set, mass).second) {
      throw InvalidArgument("duplicate mass entry for " + frame_.format(set));
    }
    total += mass;
  }
  if (total != 1) throw InvalidArgument("masses sum to " + to_exact_string(total) + ", not 1");
}

MassAssignment MassAssignment::vacuous(Frame frame) {
  Subset all = frame.full();
  return MassAssignment(std::move(frame), {{all, Rational(1)}});
}

Rational MassAssignment::operator()(Subset a) const {
  auto it = entries_.find(a);
  return it == entries_.end() ? Rational(0) : it->second;
}

BeliefTable::BeliefTable(Frame frame, std::vector<Rational> values)
    : frame_(std::move(frame)), values_(std::move(values)) {
  if (frame_.size() > kMaxFrame) {
    throw CapExceeded("belief tables are limited to frames of at most 20 elements");
  }
  if (values_.size() != (std::size_t{1} << frame_.size())) {
    throw InvalidArgument("belief table needs one value per subset");
  }
}

BeliefTable BeliefTable::from_mass(const MassAssignment& m) {
  const std::size_t n = m.frame().size();
  if (n > kMaxFrame) throw CapExceeded("belief tables are limited to frames of at most 20 elements");
  std::vector<Rational> v(std::size_t{1} << n);
  for (const auto& [set, mass] : m.entries()) v[set.bits()] = mass;
  // Zeta transform over the subset lattice.
  for (std::size_t bit = 0; bit < n; ++bit) {
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (s >> bit & 1U) v[s] += v[s ^ (std::size_t{1} << bit)];
    }
  }
  return BeliefTable(m.frame(), std::move(v));
}

Rational belief_from_mass(const MassAssignment& m, Subset a) {
  Rational sum = 0;
  for (const auto& [set, mass] : m.entries()) {
    if (set.is_subset_of(a)) sum += mass;
  }
  return sum;
}

MassAssignment mass_from_belief(const BeliefTable& bel) {
  const Frame& frame = bel.frame();
  const std::size_t n = frame.size();
  if (bel(Subset()) != 0) {
    throw NotABeliefFunction(Subset(), "belief of the empty set is not 0");
  }
  if (bel(frame.full()) != 1) {
    throw NotABeliefFunction(frame.full(), "belief of the frame is not 1");
  }
  std::vector<Rational> v = bel.values();
  for (std::size_t bit = 0; bit < n; ++bit) {
    for (std::size_t s = 0; s < v.size(); ++s) {
      if (s >> bit & 1U) v[s] -= v[s ^ (std::size_t{1} << bit)];
    }
  }
  std::vector<std::pair<Subset, Rational>> entries;
  for (std::size_t s = 1; s < v.size(); ++s) {
    if (sgn(v[s]) < 0) {
      throw NotABeliefFunction(Subset(s), "negative Möbius mass " + to_exact_string(v[s]) +
                                              " on " + frame.format(Subset(s)));
    }
    if (sgn(v[s]) > 0) entries.emplace_back(Subset(s), v[s]);
  }
  return MassAssignment(frame, std::move(entries));
}

Rational plausibility(const MassAssignment& m, Subset a) {
  return 1 - belief_from_mass(m, m.frame().complement(a));
}

Rational specificity(const MassAssignment& m) {
  Rational s = 0;
  for (const auto& [set, mass] : m.entries()) s += mass / set.cardinality();
  return s;
}

SetFamily focal_elements(const MassAssignment& m) {
  std::vector<Subset> sets;
  for (const auto& entry : m.entries()) sets.push_back(entry.first);
  return SetFamily(std::move(sets));
}

Commitment less_committed(const BeliefTable& first, const BeliefTable& second) {
  if (!(first.frame() == second.frame())) throw InvalidArgument("belief tables on different frames");
  bool le = true;
  bool ge = true;
  for (std::size_t s = 0; s < first.values().size(); ++s) {
    int c = cmp(first.values()[s], second.values()[s]);
    if (c > 0) le = false;
    if (c < 0) ge = false;
  }
  if (le && ge) return Commitment::kEqual;
  if (le) return Commitment::kLessOrEqual;
  if (ge) return Commitment::kGreaterOrEqual;
  return Commitment::kIncomparable;
}

Rational superadditivity_defect(const MassAssignment& m, std::span<const Subset> sets) {
  if (sets.empty()) throw InvalidArgument("superadditivity defect needs at least one set");
  Subset all;
  for (Subset s : sets) all = all | s;
  return belief_from_mass(m, all) - inclusion_exclusion(sets.size(), [&](std::uint64_t mask) {
           return belief_from_mass(m, intersect_selected(sets, mask));
         });
}

KnownBeliefs::KnownBeliefs(Frame frame, std::vector<std::pair<Subset, Rational>> values)
    : frame_(std::move(frame)) {
  values_.emplace(Subset(), Rational(0));
  values_.emplace(frame_.full(), Rational(1));
  for (auto& [set, value] : values) {
    if (!frame_.owns(set)) throw InvalidArgument("known belief on a set outside the frame");
    if (sgn(value) < 0 || value > 1) {
      throw InvalidArgument("belief of " + frame_.format(set) + " is " + to_exact_string(value) +
                            ", outside [0, 1]");
    }
    auto [it, inserted] = values_.emplace(set, value);
    if (!inserted && it->second != value) {
      throw InvalidArgument("conflicting beliefs for " + frame_.format(set));
    }
  }
  std::vector<Subset> members;
  for (const auto& entry : values_) members.push_back(entry.first);
  family_ = SetFamily(std::move(members));

  for (const auto& [a, va] : values_) {
    for (const auto& [b, vb] : values_) {
      if (a.is_strict_subset_of(b) && va > vb) {
        throw MonotonicityViolation(a, 0, vb,
                                    "Bel(" + frame_.format(a) + ") = " + to_exact_string(va) +
                                        " exceeds Bel(" + frame_.format(b) +
                                        ") = " + to_exact_string(vb));
      }
    }
  }
}

const Rational& KnownBeliefs::value(Subset a) const {
  auto it = values_.find(a);
  if (it == values_.end()) throw InvalidArgument(frame_.format(a) + " has no known belief");
  return it->second;
}

std::pair<Rational, Rational> KnownBeliefs::admissible_range(Subset a) const {
  Rational lower = 0;
  Rational upper = 1;
  for (const auto& [b, vb] : values_) {
    if (b.is_subset_of(a) && vb > lower) lower = vb;
    if (a.is_subset_of(b) && vb < upper) upper = vb;
  }
  return {lower, upper};
}

KnownBeliefs KnownBeliefs::with(Subset a, const Rational& v) const {
  auto [lower, upper] = admissible_range(a);
  if (v < lower || v > upper) {
    throw MonotonicityViolation(a, lower, upper,
                                "Bel(" + frame_.format(a) + ") = " + to_exact_string(v) +
                                    " must lie in [" + to_exact_string(lower) + ", " +
                                    to_exact_string(upper) + "]");
  }
  std::vector<std::pair<Subset, Rational>> all(values_.begin(), values_.end());
  all.emplace_back(a, v);
  return KnownBeliefs(frame_, std::move(all));
}

KnownBeliefs known_on_focal_family(const MassAssignment& m) {
  std::vector<std::pair<Subset, Rational>> values;
  for (const auto& entry : m.entries()) {
    values.emplace_back(entry.first, belief_from_mass(m, entry.first));
  }
  return KnownBeliefs(m.frame(), std::move(values));
}

Rational BelHEvaluator::operator()(const SetFamily& query) {
  SetFamily normalized = maximal_elements(query);
  if (normalized.empty()) return 0;
  if (normalized.size() == 1) return known_.value(normalized.members().front());

  std::vector<std::uint64_t> key;
  for (Subset s : normalized) key.push_back(s.bits());
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const auto& sets = normalized.members();
  std::vector<Subset> selected;
  Rational result = inclusion_exclusion(sets.size(), [&](std::uint64_t mask) {
    selected.clear();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (mask >> i & 1U) selected.push_back(sets[i]);
    }
    return (*this)(meet_unchecked(known_.family(), selected));
  });
  memo_.emplace(std::move(key), result);
  return result;
}

Rational bel_h(const KnownBeliefs& known, const SetFamily& query) {
  for (Subset s : query) {
    if (!known.contains(s)) {
      throw InvalidArgument(known.frame().format(s) + " is not in the known family");
    }
  }
  BelHEvaluator eval(known);
  return eval(query);
}

Rational bel_h_from_masses(const FamilyMasses& masses, const SetFamily& query) {
  Rational sum = 0;
  for (const auto& [set, mass] : masses) {
    bool covered = std::any_of(query.begin(), query.end(),
                               [&](Subset b) { return set.is_subset_of(b); });
    if (covered) sum += mass;
  }
  return sum;
}

FamilyMasses mass_on_family(const KnownBeliefs& known) {
  FamilyMasses masses;
  // Canonical order visits every member after all of its subsets.
  for (Subset a : known.family()) {
    if (a.empty()) {
      masses.emplace(a, Rational(0));
      continue;
    }
    SetFamily lower = strict_lower_family(known.family(), a);
    masses.emplace(a, known.value(a) - bel_h_from_masses(masses, lower));
  }
  return masses;
}

Rational belief_from_focal_values(const KnownBeliefs& known, Subset a) {
  if (known.contains(a)) return known.value(a);
  SetFamily lower = strict_lower_family(known.family(), a);
  const auto& sets = lower.members();
  BelHEvaluator eval(known);
  std::vector<Subset> selected;
  return inclusion_exclusion(sets.size(), [&](std::uint64_t mask) {
    selected.clear();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (mask >> i & 1U) selected.push_back(sets[i]);
    }
    return eval(meet_unchecked(known.family(), selected));
  });
}

}  // namespace belief_forge
