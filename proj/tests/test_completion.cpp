#include "belief_forge/completion.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "sampling.hpp"

using namespace belief_forge;

namespace {
Subset S(std::initializer_list<int> one_based) {
  std::uint64_t b = 0;
  for (int i : one_based) b |= std::uint64_t{1} << (i - 1);
  return Subset(b);
}
Rational Q(const char* s) { return parse_rational(s); }

KnownBeliefs one_doubleton() { return KnownBeliefs(Frame::numbered(3), {{S({1, 2}), Q("0.5")}}); }
KnownBeliefs two_doubletons() {
  return KnownBeliefs(Frame::numbered(3), {{S({1, 2}), Q("0.6")}, {S({2, 3}), Q("0.7")}});
}
KnownBeliefs three_doubletons() {
  return KnownBeliefs(Frame::numbered(3),
                      {{S({1, 2}), Q("0.5")}, {S({2, 3}), Q("0.5")}, {S({1, 3}), Q("0.5")}});
}
KnownBeliefs shared_element() {
  return KnownBeliefs(Frame::numbered(5),
                      {{S({1, 2}), Q("0.2")}, {S({1, 3}), Q("0.2")}, {S({1, 4}), Q("0.2")}});
}
KnownBeliefs contradictory() {
  return KnownBeliefs(Frame::numbered(2), {{S({1}), Q("0.6")}, {S({2}), Q("0.6")}});
}

void check_reproduces(const KnownBeliefs& known, const MassAssignment& m) {
  for (const auto& [a, v] : known.values()) CHECK(belief_from_mass(m, a) == v);
}
}  // namespace

TEST_CASE("check_closed") {
  CHECK(check_closed(KnownBeliefs(Frame::numbered(3), {})).consistent());

  KnownBeliefs closed(Frame::numbered(3),
                      {{S({2}), Q("0.3")}, {S({1, 2}), Q("0.6")}, {S({2, 3}), Q("0.7")}});
  auto report = check_closed(closed);
  CHECK(report.consistent());
  CHECK(report.condition == Condition::kClosed);

  auto bad = check_closed(contradictory());
  CHECK(bad.verdict == Verdict::kProvablyImpossible);
  auto failing = bad.failing();
  REQUIRE(failing.size() == 1);
  CHECK(failing[0].set == S({1, 2}));
  CHECK(failing[0].rhs == Q("1.2"));
  CHECK(failing[0].residual == Q("-0.2"));

  try {
    check_closed(two_doubletons());
    FAIL("expected FamilyNotClosed");
  } catch (const FamilyNotClosed& e) {
    CHECK((e.a & e.b) == S({2}));
  }
}

TEST_CASE("complete_closed") {
  auto vac = complete_closed(KnownBeliefs(Frame::numbered(3), {}));
  CHECK(vac.mass == MassAssignment::vacuous(Frame::numbered(3)));

  KnownBeliefs closed(Frame::numbered(3),
                      {{S({2}), Q("0.3")}, {S({1, 2}), Q("0.6")}, {S({2, 3}), Q("0.7")}});
  auto r = complete_closed(closed);
  CHECK(r.method == Method::kClosedDirect);
  CHECK(r.mass == MassAssignment(Frame::numbered(3), {{S({2}), Q("0.3")},
                                                      {S({1, 2}), Q("0.3")},
                                                      {S({2, 3}), Q("0.4")}}));
  for (Subset a : oracle::power_set(3)) CHECK(closed_belief(closed, a) == belief_from_mass(r.mass, a));

  CHECK_THROWS_AS(complete_closed(contradictory()), NoCompatibleBelief);
  CHECK_THROWS_AS(complete_closed(two_doubletons()), FamilyNotClosed);

  SUBCASE("least committed against sampled feasible beliefs") {
    oracle::Rng rng(41);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
      auto m = oracle::random_mass(rng, 3 + i % 2, 4);
      auto sets = oracle::random_sets(rng, m.frame().size(), 3);
      KnownBeliefs k = oracle::known_from(m, intersection_closure(SetFamily(sets)).members());
      auto res = complete_closed(k);
      check_reproduces(k, res.mass);
      auto direct = BeliefTable::from_mass(res.mass);
      for (const auto& s : sampling::feasible_masses(rng, k, sampling::power_family(m.frame().size()), 20)) {
        auto c = less_committed(direct, BeliefTable::from_mass(s));
        CHECK((c == Commitment::kLessOrEqual || c == Commitment::kEqual));
        ++checked;
      }
    }
    CHECK(checked == 800);
  }
}

TEST_CASE("complete_min_specificity") {
  SUBCASE("one known doubleton") {
    auto r = complete_min_specificity(one_doubleton());
    CHECK(r.mass == MassAssignment(Frame::numbered(3),
                                   {{S({1, 2}), Q("0.5")}, {S({1, 2, 3}), Q("0.5")}}));
    CHECK(r.symmetry.vertices == 1);
  }
  SUBCASE("two known doubletons") {
    auto r = complete_min_specificity(two_doubletons());
    CHECK(r.mass == MassAssignment(Frame::numbered(3), {{S({2}), Q("0.3")},
                                                        {S({1, 2}), Q("0.3")},
                                                        {S({2, 3}), Q("0.4")}}));
  }
  SUBCASE("three doubletons: symmetry average") {
    auto r = complete_min_specificity(three_doubletons());
    CHECK(r.symmetry.vertices == 3);
    CHECK(r.symmetry.enumerated);
    for (Subset s : {S({1}), S({2}), S({3}), S({1, 2}), S({2, 3}), S({1, 3})}) {
      CHECK(r.mass(s) == Rational(1, 6));
    }
    check_reproduces(three_doubletons(), r.mass);
  }
  SUBCASE("refined frame") {
    Frame f({"u1", "u2", "v1", "v2"});
    KnownBeliefs k(f, {{S({1, 2}), Q("0.5")}, {S({2, 3, 4}), Q("0.5")}, {S({1, 3, 4}), Q("0.5")}});
    auto r = complete_min_specificity(k);
    CHECK(r.symmetry.vertices == 1);
    CHECK(r.mass == MassAssignment(f, {{S({1, 2}), Q("0.5")}, {S({3, 4}), Q("0.5")}}));
  }
  SUBCASE("three pairs sharing an element") {
    auto r = complete_min_specificity(shared_element());
    CHECK(r.mass == MassAssignment(Frame::numbered(5),
                                   {{S({1}), Q("0.2")}, {S({1, 2, 3, 4, 5}), Q("0.8")}}));
    CHECK(specificity(r.mass) == Rational(9, 25));
  }
  SUBCASE("cap falls back to a flagged single vertex") {
    auto r = complete_min_specificity(three_doubletons(), CompletionOptions{3});
    CHECK_FALSE(r.symmetry.enumerated);
    CHECK(r.symmetry.vertices == 1);
    check_reproduces(three_doubletons(), r.mass);
  }
  SUBCASE("infeasible") {
    try {
      complete_min_specificity(contradictory());
      FAIL("expected NoCompatibleBelief");
    } catch (const NoCompatibleBelief& e) {
      CHECK(e.report.verdict == Verdict::kProvablyImpossible);
    }
  }
}

TEST_CASE("check_focusing") {
  CHECK(check_focusing(KnownBeliefs(Frame::numbered(3), {})).consistent());
  auto ex6 = check_focusing(shared_element());
  CHECK(ex6.consistent());
  CHECK(ex6.records.back().residual == Q("0.4"));

  auto c3 = check_focusing(three_doubletons());
  CHECK(c3.verdict == Verdict::kFocusingInapplicable);
  auto failing = c3.failing();
  REQUIRE(failing.size() == 1);
  CHECK(failing[0].set == S({1, 2, 3}));
  CHECK(failing[0].rhs == Q("1.5"));
  CHECK(failing[0].residual == Q("-0.5"));
  CHECK(failing[0].lower == SetFamily{S({1, 2}), S({2, 3}), S({1, 3})});

  CHECK(check_focusing(contradictory()).verdict == Verdict::kProvablyImpossible);

  SUBCASE("right-hand sides match the meet recursion") {
    oracle::Rng rng(13);
    for (int i = 0; i < 150; ++i) {
      const std::size_t n = 2 + i % 3;
      auto sets = oracle::random_sets(rng, n, 2 + i % 4);
      std::vector<std::pair<Subset, Rational>> values;
      // Values proportional to cardinality are always monotone.
      for (Subset s : sets) values.emplace_back(s, ratio(s.cardinality(), static_cast<long>(n)));
      KnownBeliefs k(Frame::numbered(n), values);
      BelHEvaluator eval(k);
      for (const auto& rec : check_focusing(k).records) {
        const auto& b = rec.lower.members();
        Rational rhs = inclusion_exclusion(b.size(), [&](std::uint64_t mask) {
          std::vector<Subset> chosen;
          for (std::size_t x = 0; x < b.size(); ++x) {
            if (mask >> x & 1U) chosen.push_back(b[x]);
          }
          return eval(meet(k.family(), chosen));
        });
        CHECK(rec.rhs == rhs);
      }
    }
  }
}

TEST_CASE("complete_focusing") {
  auto vac = complete_focusing(KnownBeliefs(Frame::numbered(2), {}));
  CHECK(vac.mass == MassAssignment::vacuous(Frame::numbered(2)));

  auto r = complete_focusing(shared_element());
  CHECK(r.method == Method::kFocusing);
  CHECK(r.mass == MassAssignment(Frame::numbered(5), {{S({1, 2}), Q("0.2")},
                                                      {S({1, 3}), Q("0.2")},
                                                      {S({1, 4}), Q("0.2")},
                                                      {S({1, 2, 3, 4, 5}), Q("0.4")}}));
  CHECK(specificity(r.mass) == Rational(19, 50));
  for (Subset a : oracle::power_set(5)) {
    CHECK(belief_from_focal_values(shared_element(), a) == belief_from_mass(r.mass, a));
  }

  try {
    complete_focusing(three_doubletons());
    FAIL("expected FocusingInapplicable");
  } catch (const FocusingInapplicable& e) {
    CHECK(e.report.verdict == Verdict::kFocusingInapplicable);
  }

  SUBCASE("re-completing a belief from its focal values is the identity") {
    oracle::Rng rng(19);
    for (int i = 0; i < 150; ++i) {
      auto m = oracle::random_mass(rng, 1 + i % 5, 7);
      auto res = complete_focusing(known_on_focal_family(m));
      CHECK(res.mass == m);
    }
  }
}

TEST_CASE("detect_impossible") {
  CHECK_FALSE(detect_impossible(three_doubletons(), S({1, 2, 3})));
  CHECK(detect_impossible(contradictory(), S({1, 2})));
  CHECK_FALSE(detect_impossible(shared_element(), S({1, 2, 3, 4, 5})));
  CHECK_FALSE(detect_impossible(shared_element(), S({1})));
}

TEST_CASE("next_question") {
  SUBCASE("pairwise intersection first, ties in canonical order") {
    auto q = next_question(three_doubletons());
    REQUIRE(q);
    CHECK(q->set == S({1}));
    CHECK(q->order == 2);
    CHECK(q->failing == S({1, 2, 3}));
  }
  SUBCASE("only the triple intersection is missing") {
    KnownBeliefs k(Frame::numbered(4), {{S({1, 2}), Q("0.1")},
                                        {S({1, 3}), Q("0.1")},
                                        {S({1, 4}), Q("0.1")},
                                        {S({1, 2, 3}), Q("0.5")},
                                        {S({1, 2, 4}), Q("0.5")},
                                        {S({1, 3, 4}), Q("0.5")}});
    auto q = next_question(k);
    REQUIRE(q);
    CHECK(q->set == S({1}));
    CHECK(q->order == 3);
  }
  SUBCASE("nothing to ask") {
    CHECK_FALSE(next_question(contradictory()));
    CHECK_FALSE(next_question(shared_element()));
  }
}

TEST_CASE("complete_stepwise") {
  SUBCASE("two doubletons need stage 2") {
    auto r = complete_stepwise(two_doubletons());
    CHECK(r.method == Method::kStepwise);
    CHECK(r.stage == 2);
    CHECK(method_tag(r.method, r.stage) == "stepwise(2)");
    CHECK(r.mass == complete_min_specificity(two_doubletons()).mass);
  }
  SUBCASE("three doubletons give the symmetric solution") {
    auto r = complete_stepwise(three_doubletons());
    CHECK(r.stage == 2);
    CHECK(r.mass == complete_min_specificity(three_doubletons()).mass);
    CHECK(r.mass(S({2})) == Rational(1, 6));
  }
  SUBCASE("consistent under focusing: stage 1 equals focusing") {
    auto r = complete_stepwise(shared_element());
    CHECK(r.stage == 1);
    CHECK(r.mass == complete_focusing(shared_element()).mass);
  }
  SUBCASE("infeasible") { CHECK_THROWS_AS(complete_stepwise(contradictory()), NoCompatibleBelief); }
  SUBCASE("focal elements stay inside the strata") {
    oracle::Rng rng(61);
    for (int i = 0; i < 60; ++i) {
      auto m = oracle::random_mass(rng, 3 + i % 2, 5);
      KnownBeliefs k = oracle::known_from(m, oracle::random_sets(rng, m.frame().size(), 4));
      auto r = complete_stepwise(k);
      check_reproduces(k, r.mass);
      SetFamily allowed;
      for (std::size_t j = 1; j <= r.stage; ++j) allowed = allowed.united(stratum(k.family(), j));
      for (Subset f : focal_elements(r.mass)) CHECK(allowed.contains(f));
    }
  }
}
