#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "belief_forge/rational.hpp"

namespace belief_forge {

/// min c·x  s.t.  A x = b,  x >= 0, over exact rationals.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  std::size_t variables() const { return objective.size(); }
  std::size_t constraints() const { return rows.size(); }
  /// Throws InvalidArgument on inconsistent dimensions.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

/// Basic variable per constraint row after phase one; std::nullopt marks a
/// row whose artificial variable stayed basic. Feeding it to solve() for a
/// problem with the same rows and more columns skips the earlier pivots.
using WarmStart = std::vector<std::optional<std::size_t>>;

struct LpOutcome {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> vertex;  // empty unless optimal
  Rational objective;
  /// Basic column per retained row of an optimal tableau.
  std::vector<std::size_t> basis;
  /// Indices of the constraint rows kept after dropping redundant ones.
  std::vector<std::size_t> kept_rows;
  WarmStart phase_one_basis;
  bool warm_started = false;
  std::size_t pivots = 0;
};

/// Two-phase simplex with Bland's rule.
LpOutcome solve(const LinearProgram& lp, const WarmStart* warm = nullptr);

inline constexpr std::size_t kDefaultFaceCap = 24;

/// Every distinct basic feasible solution attaining the optimum, sorted.
/// Throws CapExceeded when lp.variables() > cap or the basis search grows
/// past its limit, and InvalidArgument if the optimal face is unbounded.
std::vector<std::vector<Rational>> optimal_face_vertices(const LinearProgram& lp,
                                                         const LpOutcome& outcome,
                                                         std::size_t cap = kDefaultFaceCap);

/// Unweighted mean of a nonempty list of vertices.
std::vector<Rational> average(const std::vector<std::vector<Rational>>& vertices);

}  // namespace belief_forge
