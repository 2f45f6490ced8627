#include "belief_forge/lp.hpp"

#include "belief_forge/completion.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace belief_forge;

namespace {
Subset S(std::initializer_list<int> one_based) {
  std::uint64_t b = 0;
  for (int i : one_based) b |= std::uint64_t{1} << (i - 1);
  return Subset(b);
}
Rational Q(const char* s) { return parse_rational(s); }

std::vector<Rational> row(std::initializer_list<long> v) {
  std::vector<Rational> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

Rational mass_at(const MassProgram& p, const std::vector<Rational>& x, Subset s) {
  for (std::size_t j = 0; j < p.variables.size(); ++j) {
    if (p.variables[j] == s) return x[j];
  }
  return 0;
}

LinearProgram random_lp(oracle::Rng& rng) {
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> coef(-1, 3);
  std::uniform_int_distribution<int> cost(0, 4);
  const auto m = static_cast<std::size_t>(dim(rng));
  const std::size_t n = m + static_cast<std::size_t>(dim(rng)) + 1;
  LinearProgram lp;
  for (std::size_t j = 0; j < n; ++j) lp.objective.emplace_back(cost(rng));
  // Feasible by construction: b = A x0 for a random x0 >= 0.
  std::vector<Rational> x0(n);
  for (auto& x : x0) x = std::uniform_int_distribution<int>(0, 2)(rng);
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<Rational> a(n);
    for (auto& v : a) v = coef(rng);
    a[r % n] = 1;  // keep some structure
    Rational b = 0;
    for (std::size_t j = 0; j < n; ++j) b += a[j] * x0[j];
    lp.rows.push_back(a);
    lp.rhs.push_back(b);
  }
  // Bound the polytope: total of all variables fixed.
  lp.rows.push_back(std::vector<Rational>(n, Rational(1)));
  Rational total = 0;
  for (auto& x : x0) total += x;
  lp.rhs.push_back(total);
  return lp;
}
}  // namespace

TEST_CASE("solve: trivial program") {
  LinearProgram lp{row({1, 0}), {row({1, 1})}, row({1})};
  auto out = solve(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.objective == 0);
  CHECK(out.vertex == row({0, 1}));
  CHECK(optimal_face_vertices(lp, out).size() == 1);
}

TEST_CASE("solve: dimension mismatch is rejected") {
  LinearProgram lp{row({1, 0}), {row({1})}, row({1})};
  CHECK_THROWS_AS(solve(lp), InvalidArgument);
}

TEST_CASE("solve: negative right-hand side and redundant rows") {
  LinearProgram lp{row({1, 2, 0}), {row({-1, -1, -1}), row({1, 1, 1}), row({2, 2, 2})},
                   row({-1, 1, 2})};
  auto out = solve(lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(out.objective == 0);
  CHECK(out.kept_rows.size() == 1);
  CHECK(oracle::satisfies(lp, out.vertex));
}

TEST_CASE("solve: unbounded") {
  LinearProgram lp{row({-1, 0}), {row({1, -1})}, row({0})};
  CHECK(solve(lp).status == LpStatus::kUnbounded);
}

TEST_CASE("solve: infeasible singleton beliefs") {
  Frame f = Frame::numbered(2);
  // Bel({u1}) = Bel({u2}) = 0.6 cannot both hold; checked without KnownBeliefs.
  LinearProgram lp;
  std::vector<Subset> vars{S({1}), S({2}), S({1, 2})};
  for (Subset v : vars) lp.objective.push_back(ratio(1, v.cardinality()));
  lp.rows = {row({1, 0, 0}), row({0, 1, 0}), row({1, 1, 1})};
  lp.rhs = {Q("0.6"), Q("0.6"), Rational(1)};
  CHECK(solve(lp).status == LpStatus::kInfeasible);
  CHECK(oracle::all_vertices(lp).empty());
}

TEST_CASE("solve: two doubletons over the closure") {
  KnownBeliefs k(Frame::numbered(3), {{S({1, 2}), Q("0.6")}, {S({2, 3}), Q("0.7")}});
  auto prog = build_mass_program(k, intersection_closure(k.family()));
  auto out = solve(prog.lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  CHECK(mass_at(prog, out.vertex, S({2})) == Q("0.3"));
  CHECK(mass_at(prog, out.vertex, S({1, 2})) == Q("0.3"));
  CHECK(mass_at(prog, out.vertex, S({2, 3})) == Q("0.4"));
  CHECK(mass_at(prog, out.vertex, S({1, 2, 3})) == 0);
}

TEST_CASE("optimal face: three doubletons") {
  KnownBeliefs k(Frame::numbered(3),
                 {{S({1, 2}), Q("0.5")}, {S({2, 3}), Q("0.5")}, {S({1, 3}), Q("0.5")}});
  auto prog = build_mass_program(k, intersection_closure(k.family()));
  auto out = solve(prog.lp);
  REQUIRE(out.status == LpStatus::kOptimal);
  auto vertices = optimal_face_vertices(prog.lp, out);
  REQUIRE(vertices.size() == 3);

  auto has_vertex = [&](Subset single, Subset pair) {
    for (const auto& v : vertices) {
      Rational total = 0;
      for (const auto& x : v) total += x;
      if (mass_at(prog, v, single) == Q("0.5") && mass_at(prog, v, pair) == Q("0.5")) return true;
    }
    return false;
  };
  CHECK(has_vertex(S({2}), S({1, 3})));
  CHECK(has_vertex(S({1}), S({2, 3})));
  CHECK(has_vertex(S({3}), S({1, 2})));

  auto mean = average(vertices);
  for (Subset s : {S({1}), S({2}), S({3}), S({1, 2}), S({2, 3}), S({1, 3})}) {
    CHECK(mass_at(prog, mean, s) == Rational(1, 6));
  }
  CHECK(mass_at(prog, mean, S({1, 2, 3})) == 0);

  CHECK_THROWS_AS(optimal_face_vertices(prog.lp, out, 2), CapExceeded);
}

TEST_CASE("solver and face enumeration agree with brute-force vertices") {
  oracle::Rng rng(99);
  int optimal = 0;
  for (int i = 0; i < 300; ++i) {
    LinearProgram lp = random_lp(rng);
    auto out = solve(lp);
    auto brute = oracle::optimal_vertices(lp);
    REQUIRE(out.status == LpStatus::kOptimal);
    ++optimal;
    CHECK(oracle::satisfies(lp, out.vertex));
    CHECK(oracle::objective(lp, out.vertex) == out.objective);
    REQUIRE_FALSE(brute.empty());
    CHECK(oracle::objective(lp, *brute.begin()) == out.objective);
    auto face = optimal_face_vertices(lp, out);
    CHECK(std::set<std::vector<Rational>>(face.begin(), face.end()) == brute);
  }
  CHECK(optimal == 300);
}

TEST_CASE("warm start reaches the same optimum") {
  oracle::Rng rng(5);
  int warm_used = 0;
  for (int i = 0; i < 100; ++i) {
    LinearProgram lp = random_lp(rng);
    // Drop the last column, solve, then warm-start the full problem.
    LinearProgram small = lp;
    small.objective.pop_back();
    for (auto& r : small.rows) r.pop_back();
    auto first = solve(small);
    auto cold = solve(lp);
    auto warm = solve(lp, &first.phase_one_basis);
    REQUIRE(cold.status == warm.status);
    warm_used += warm.warm_started ? 1 : 0;
    if (cold.status == LpStatus::kOptimal) {
      CHECK(cold.objective == warm.objective);
      CHECK(oracle::satisfies(lp, warm.vertex));
    }
  }
  CHECK(warm_used > 50);
}
