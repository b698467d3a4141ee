#pragma once

// Lattice-linear terms over tuple variables x1, x2, ...: built from
// variables with +, rational scaling, meet, join, positive part and modulus.
// They evaluate coordinatewise in any coordinate lattice and are Lipschitz
// for d(x, y) = max_i ||x_i - y_i|| in every Banach lattice.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

enum class TermOp { Var, Add, Scale, Meet, Join, Pos, Abs };

class Term {
 public:
  static Term var(std::size_t index);  // 0-based; printed as x{index+1}

  TermOp op() const;
  std::size_t index() const;        // Var only
  const Rational& coeff() const;    // Scale only
  Term lhs() const;                 // every op but Var
  Term rhs() const;                 // Add, Meet, Join

  std::size_t depth() const;
  std::size_t arity() const;        // 1 + largest variable index used
  std::string str() const;

  friend Term operator+(const Term& a, const Term& b);
  friend Term operator-(const Term& a, const Term& b);
  friend Term operator*(const Rational& r, const Term& a);
  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
  friend Term make_term(TermOp, const Term&, const Term*, Rational);
};

Term meet(const Term& a, const Term& b);
Term join(const Term& a, const Term& b);
Term pos(const Term& a);
Term abs(const Term& a);

// Sum of c_i x_i over the nonzero coefficients; StructuralError if all vanish.
Term linear_term(const Vec& coeffs);

// Coordinatewise evaluation on a tuple of equal-length vectors.
Vec eval(const Term& t, const std::vector<Vec>& tuple);

// Lipschitz constant for the max-metric on tuples, from the rules
// L(x_i) = 1, L(a + b) = L(a) + L(b), L(r a) = |r| L(a), L(a ^ b) = L(a v b)
// = L(a) + L(b), L(pos a) = L(|a|) = L(a).
Rational lipschitz(const Term& t);
// The same bookkeeping with only x_index moving.
Rational lipschitz_in(const Term& t, std::size_t index);

// All terms of depth at most `depth` over `arity` variables, closing the
// previous level under +, -, ^, v, pos and |.|, deduplicated by printed form
// and truncated at `limit` in generation order.
std::vector<Term> enumerate_terms(std::size_t arity, std::size_t depth, std::size_t limit);

}  // namespace fbl
