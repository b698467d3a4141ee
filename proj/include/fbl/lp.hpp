#pragma once

// Exact linear programming: dense-tableau two-phase primal simplex with
// Bland's rule. Every optimal answer carries a dual witness that has been
// checked against the primal value before being returned.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LinearConstraint {
  Vec coeffs;
  Relation rel;
  Rational rhs;
};

struct VariableBounds {
  std::optional<Rational> lower;
  std::optional<Rational> upper;
};

struct LinearProgram {
  Sense sense = Sense::Maximize;
  Vec objective;
  std::vector<LinearConstraint> constraints;
  // Empty means every variable is free; otherwise one entry per variable.
  std::vector<VariableBounds> bounds;

  std::size_t num_vars() const { return objective.size(); }
  void add(Vec coeffs, Relation rel, Rational rhs) {
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void set_nonnegative() { bounds.assign(num_vars(), VariableBounds{Rational(0), std::nullopt}); }
};

// Dual convention: objective = sum_i dual[i] * constraints[i].coeffs + reduced,
// reduced[j] != 0 only where x_j sits on a bound, and
// optimum = sum_i dual[i] * rhs[i] + sum_j reduced[j] * x_j.
// For Maximize: dual >= 0 on <= rows, <= 0 on >= rows; reduced > 0 only at an
// upper bound, < 0 only at a lower bound. Minimize flips every sign.
struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rational optimum;
  Vec primal;
  Vec dual;
  Vec reduced;
  std::size_t pivots = 0;
};

LPResult solve_lp(const LinearProgram& lp);

// Independent check of an Optimal result: primal feasibility, dual sign
// conditions, and equality of the primal value with the dual bound.
// Returns an empty string when the certificate holds, else the first failure.
std::string check_optimality(const LinearProgram& lp, const LPResult& result);

std::string describe(const LinearProgram& lp);

}  // namespace fbl
