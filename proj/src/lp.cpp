#include "belief_forge/lp.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "belief_forge/errors.hpp"

namespace belief_forge {
namespace {

constexpr std::size_t kMaxBasesVisited = 200000;

/// Dense tableau: `rows` constraint rows plus one reduced-cost row, each
/// with `cols` coefficients followed by the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1)), basis_(rows) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  Rational& rhs(std::size_t r) { return at(r, cols_); }
  const Rational& rhs(std::size_t r) const { return at(r, cols_); }
  Rational& cost(std::size_t c) { return at(rows_, c); }
  const Rational& cost(std::size_t c) const { return at(rows_, c); }
  // The cost row's RHS slot holds minus the current objective value.
  Rational objective() const { return -at(rows_, cols_); }

  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rational inv = 1 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr || sgn(at(r, pc)) == 0) continue;
      const Rational factor = at(r, pc);
      for (std::size_t c = 0; c <= cols_; ++c) {
        if (sgn(at(pr, c)) != 0) at(r, c) -= factor * at(pr, c);
      }
    }
    basis_[pr] = pc;
  }

  /// Sets the cost row to the reduced costs of `c` under the current basis.
  void price(const std::vector<Rational>& c) {
    for (std::size_t j = 0; j <= cols_; ++j) cost(j) = j < c.size() ? c[j] : Rational(0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const Rational& cb = basis_[r] < c.size() ? c[basis_[r]] : Rational(0);
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost(j) -= cb * at(r, j);
    }
  }

  /// Leaving row for entering column `pc` by the ratio test, ties broken by
  /// the smallest basic index (Bland). nullopt when the column is unbounded.
  std::optional<std::size_t> ratio_row(std::size_t pc) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (sgn(at(r, pc)) <= 0) continue;
      Rational ratio = rhs(r) / at(r, pc);
      if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[*best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }

  /// Runs Bland's rule over columns [0, limit). Returns false if unbounded.
  bool optimize(std::size_t limit, std::size_t& pivots) {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(cost(j)) < 0) {
          entering = j;
          break;
        }
      }
      if (!entering) return true;
      auto leaving = ratio_row(*entering);
      if (!leaving) return false;
      pivot(*leaving, *entering);
      ++pivots;
    }
  }

  std::vector<Rational> solution(std::size_t n) const {
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < rows_; ++r) {
      if (basis_[r] < n) x[basis_[r]] = rhs(r);
    }
    return x;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Rational> data_;
  std::vector<std::size_t> basis_;
};

/// Phase-one tableau with one artificial column per row, b >= 0.
Tableau phase_one_tableau(const LinearProgram& lp) {
  const std::size_t m = lp.constraints();
  const std::size_t n = lp.variables();
  Tableau t(m, n + m);
  for (std::size_t r = 0; r < m; ++r) {
    const bool flip = sgn(lp.rhs[r]) < 0;
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = flip ? Rational(-lp.rows[r][j]) : lp.rows[r][j];
    t.at(r, n + r) = 1;
    t.rhs(r) = flip ? Rational(-lp.rhs[r]) : lp.rhs[r];
    t.basis()[r] = n + r;
  }
  std::vector<Rational> phase_cost(n + m);
  for (std::size_t r = 0; r < m; ++r) phase_cost[n + r] = 1;
  t.price(phase_cost);
  return t;
}

bool install_warm_start(Tableau& t, const WarmStart& warm, std::size_t n) {
  if (warm.size() != t.rows()) return false;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (!warm[r]) continue;
    const std::size_t col = *warm[r];
    if (col >= n || sgn(t.at(r, col)) == 0) return false;
    t.pivot(r, col);
  }
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (sgn(t.rhs(r)) < 0) return false;
  }
  return true;
}

/// Tableau over `lp` restricted to `kept_rows` with the given basic columns.
Tableau tableau_for_basis(const LinearProgram& lp, const std::vector<std::size_t>& kept_rows,
                          const std::vector<std::size_t>& basis) {
  const std::size_t n = lp.variables();
  Tableau t(kept_rows.size(), n);
  for (std::size_t r = 0; r < kept_rows.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = lp.rows[kept_rows[r]][j];
    t.rhs(r) = lp.rhs[kept_rows[r]];
  }
  std::vector<bool> used(t.rows(), false);
  for (std::size_t col : basis) {
    std::optional<std::size_t> row;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (!used[r] && sgn(t.at(r, col)) != 0) {
        row = r;
        break;
      }
    }
    if (!row) throw InvalidArgument("basis columns are linearly dependent");
    t.pivot(*row, col);
    used[*row] = true;
  }
  t.price(lp.objective);
  return t;
}

}  // namespace

void LinearProgram::validate() const {
  if (rows.size() != rhs.size()) throw InvalidArgument("row count differs from rhs length");
  for (const auto& row : rows) {
    if (row.size() != objective.size()) throw InvalidArgument("row length differs from variable count");
  }
}

LpOutcome solve(const LinearProgram& lp, const WarmStart* warm) {
  lp.validate();
  const std::size_t m = lp.constraints();
  const std::size_t n = lp.variables();
  LpOutcome out;

  Tableau t = phase_one_tableau(lp);
  if (warm != nullptr) {
    Tableau candidate = t;
    if (install_warm_start(candidate, *warm, n)) {
      std::vector<Rational> phase_cost(n + m);
      for (std::size_t r = 0; r < m; ++r) phase_cost[n + r] = 1;
      candidate.price(phase_cost);
      t = std::move(candidate);
      out.warm_started = true;
    }
  }
  t.optimize(n + m, out.pivots);

  out.phase_one_basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) out.phase_one_basis[r] = t.basis()[r];
  }
  if (sgn(t.objective()) > 0) {
    out.status = LpStatus::kInfeasible;
    return out;
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are linear combinations of the others.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(t.at(r, j)) != 0) {
        t.pivot(r, j);
        ++out.pivots;
        break;
      }
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) {
      out.kept_rows.push_back(r);
      out.basis.push_back(t.basis()[r]);
    }
  }

  // Phase two on the reduced system, rebuilt from the phase-one basis.
  Tableau t2 = tableau_for_basis(lp, out.kept_rows, out.basis);
  if (!t2.optimize(n, out.pivots)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.vertex = t2.solution(n);
  out.objective = t2.objective();
  out.basis = t2.basis();
  return out;
}

std::vector<std::vector<Rational>> optimal_face_vertices(const LinearProgram& lp,
                                                         const LpOutcome& outcome,
                                                         std::size_t cap) {
  if (outcome.status != LpStatus::kOptimal) {
    throw InvalidArgument("optimal face requested for a non-optimal outcome");
  }
  const std::size_t n = lp.variables();
  if (n > cap) {
    throw CapExceeded("optimal face enumeration capped at " + std::to_string(cap) +
                      " variables, problem has " + std::to_string(n));
  }

  Tableau start = tableau_for_basis(lp, outcome.kept_rows, outcome.basis);
  // Columns with positive reduced cost are zero on every optimal solution.
  std::vector<std::size_t> face_columns;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(start.cost(j)) == 0) face_columns.push_back(j);
  }

  auto key_of = [](const Tableau& t) {
    std::vector<std::size_t> key = t.basis();
    std::sort(key.begin(), key.end());
    return key;
  };

  std::set<std::vector<Rational>> vertices;
  std::set<std::vector<std::size_t>> seen{key_of(start)};
  std::deque<Tableau> queue{start};
  while (!queue.empty()) {
    Tableau t = std::move(queue.front());
    queue.pop_front();
    vertices.insert(t.solution(n));

    std::vector<bool> basic(n, false);
    for (std::size_t b : t.basis()) basic[b] = true;
    for (std::size_t j : face_columns) {
      if (basic[j]) continue;
      auto leaving = t.ratio_row(j);
      if (!leaving) throw InvalidArgument("optimal face is unbounded");
      const Rational best = t.rhs(*leaving) / t.at(*leaving, j);
      for (std::size_t r = 0; r < t.rows(); ++r) {
        if (sgn(t.at(r, j)) <= 0 || t.rhs(r) / t.at(r, j) != best) continue;
        std::vector<std::size_t> next_key = t.basis();
        next_key[r] = j;
        std::sort(next_key.begin(), next_key.end());
        if (!seen.insert(next_key).second) continue;
        if (seen.size() > kMaxBasesVisited) {
          throw CapExceeded("optimal face has too many bases to enumerate");
        }
        Tableau next = t;
        next.pivot(r, j);
        queue.push_back(std::move(next));
      }
    }
  }
  return {vertices.begin(), vertices.end()};
}

std::vector<Rational> average(const std::vector<std::vector<Rational>>& vertices) {
  if (vertices.empty()) throw InvalidArgument("average of no vertices");
  std::vector<Rational> mean(vertices.front().size());
  for (const auto& v : vertices) {
    for (std::size_t j = 0; j < v.size(); ++j) mean[j] += v[j];
  }
  const Rational count(static_cast<long>(vertices.size()));
  for (auto& x : mean) x /= count;
  return mean;
}

}  // namespace belief_forge
