#include "fbl/terms.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "fbl/errors.hpp"
#include "fbl/vectorlattice.hpp"

namespace fbl {

struct Term::Node {
  TermOp op;
  std::size_t index = 0;
  Rational coeff;
  std::shared_ptr<const Node> a, b;
  std::size_t depth = 0;
  std::size_t arity = 0;
};

Term make_term(TermOp op, const Term& a, const Term* b, Rational coeff) {
  auto n = std::make_shared<Term::Node>();
  n->op = op;
  n->coeff = std::move(coeff);
  n->a = a.n_;
  n->depth = 1 + a.n_->depth;
  n->arity = a.n_->arity;
  if (b) {
    n->b = b->n_;
    n->depth = std::max(n->depth, 1 + b->n_->depth);
    n->arity = std::max(n->arity, b->n_->arity);
  }
  return Term(std::move(n));
}

Term Term::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = TermOp::Var;
  n->index = index;
  n->arity = index + 1;
  return Term(std::move(n));
}

TermOp Term::op() const { return n_->op; }
std::size_t Term::index() const { return n_->index; }
const Rational& Term::coeff() const { return n_->coeff; }
Term Term::lhs() const { return Term(n_->a); }
Term Term::rhs() const { return Term(n_->b); }
std::size_t Term::depth() const { return n_->depth; }
std::size_t Term::arity() const { return n_->arity; }

std::string Term::str() const {
  switch (op()) {
    case TermOp::Var: return "x" + std::to_string(index() + 1);
    case TermOp::Add: return "(" + lhs().str() + " + " + rhs().str() + ")";
    case TermOp::Scale: return coeff().str() + "*" + lhs().str();
    case TermOp::Meet: return "(" + lhs().str() + " ^ " + rhs().str() + ")";
    case TermOp::Join: return "(" + lhs().str() + " v " + rhs().str() + ")";
    case TermOp::Pos: return "pos(" + lhs().str() + ")";
    case TermOp::Abs: return "|" + lhs().str() + "|";
  }
  return {};
}

Term operator+(const Term& a, const Term& b) { return make_term(TermOp::Add, a, &b, {}); }
Term operator*(const Rational& r, const Term& a) { return make_term(TermOp::Scale, a, nullptr, r); }
Term operator-(const Term& a, const Term& b) { return a + Rational(-1) * b; }

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case TermOp::Var: return a.index() == b.index();
    case TermOp::Scale: return a.coeff() == b.coeff() && a.lhs() == b.lhs();
    case TermOp::Pos:
    case TermOp::Abs: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Term meet(const Term& a, const Term& b) { return make_term(TermOp::Meet, a, &b, {}); }
Term join(const Term& a, const Term& b) { return make_term(TermOp::Join, a, &b, {}); }
Term pos(const Term& a) { return make_term(TermOp::Pos, a, nullptr, {}); }
Term abs(const Term& a) { return make_term(TermOp::Abs, a, nullptr, {}); }

Term linear_term(const Vec& coeffs) {
  std::optional<Term> out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    Term t = coeffs[i] == Rational(1) ? Term::var(i) : coeffs[i] * Term::var(i);
    out = out ? *out + t : t;
  }
  if (!out) throw StructuralError("linear term with no nonzero coefficient");
  return *out;
}

Vec eval(const Term& t, const std::vector<Vec>& tuple) {
  switch (t.op()) {
    case TermOp::Var:
      if (t.index() >= tuple.size()) throw StructuralError("term variable " + t.str() + " outside the tuple");
      return tuple[t.index()];
    case TermOp::Add: return add(eval(t.lhs(), tuple), eval(t.rhs(), tuple));
    case TermOp::Scale: return scale(t.coeff(), eval(t.lhs(), tuple));
    case TermOp::Meet: return meet(eval(t.lhs(), tuple), eval(t.rhs(), tuple));
    case TermOp::Join: return join(eval(t.lhs(), tuple), eval(t.rhs(), tuple));
    case TermOp::Pos: return pos_part(eval(t.lhs(), tuple));
    case TermOp::Abs: return fbl::abs(eval(t.lhs(), tuple));
  }
  return {};
}

namespace {

Rational lip(const Term& t, std::optional<std::size_t> only) {
  switch (t.op()) {
    case TermOp::Var: return !only || *only == t.index() ? Rational(1) : Rational(0);
    case TermOp::Scale: return fbl::abs(t.coeff()) * lip(t.lhs(), only);
    case TermOp::Pos:
    case TermOp::Abs: return lip(t.lhs(), only);
    default: return lip(t.lhs(), only) + lip(t.rhs(), only);
  }
}

}  // namespace

Rational lipschitz(const Term& t) { return lip(t, std::nullopt); }
Rational lipschitz_in(const Term& t, std::size_t index) { return lip(t, index); }

std::vector<Term> enumerate_terms(std::size_t arity, std::size_t depth, std::size_t limit) {
  std::vector<Term> out;
  std::set<std::string> seen;
  auto push = [&](const Term& t) {
    if (out.size() < limit && seen.insert(t.str()).second) out.push_back(t);
  };
  for (std::size_t i = 0; i < arity; ++i) push(Term::var(i));
  std::size_t begin = 0;
  for (std::size_t d = 0; d < depth && out.size() < limit; ++d) {
    const std::size_t end = out.size();
    for (std::size_t i = 0; i < end; ++i) {
      const bool new_i = i >= begin;
      if (new_i) {
        push(pos(out[i]));
        push(abs(out[i]));
      }
      for (std::size_t j = 0; j < end; ++j) {
        if (i == j || (!new_i && j < begin)) continue;
        if (i < j) {
          push(out[i] + out[j]);
          push(meet(out[i], out[j]));
          push(join(out[i], out[j]));
        }
        push(out[i] - out[j]);
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace fbl
