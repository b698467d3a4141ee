#include "fbl/lp.hpp"

#include <sstream>

#include "fbl/errors.hpp"
#include "fbl/vectorlattice.hpp"

namespace fbl {
namespace {

// Standard-form column z_p >= 0 standing for sign * x_var.
struct StdColumn {
  std::size_t var;
  int sign;
};

class Tableau {
 public:
  std::vector<Vec> rows;
  Vec rhs;
  std::vector<std::size_t> basis;
  Vec d;  // reduced costs c_j - c_B B^{-1} A_j
  Rational value;
  std::vector<char> enterable;
  std::size_t pivots = 0;

  std::size_t ncols() const { return d.size(); }

  void pivot(std::size_t r, std::size_t c) {
    ++pivots;
    Vec& pr = rows[r];
    Rational p = pr[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < pr.size(); ++j)
      if (!pr[j].is_zero()) nz.push_back(j);
    if (!(p == Rational(1))) {
      for (std::size_t j : nz) pr[j] /= p;
      rhs[r] /= p;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Rational f = rows[i][c];
      for (std::size_t j : nz) rows[i][j].sub_mul(f, pr[j]);
      rhs[i].sub_mul(f, rhs[r]);
    }
    if (!d[c].is_zero()) {
      Rational f = d[c];
      for (std::size_t j : nz) d[j].sub_mul(f, pr[j]);
      value += f * rhs[r];
    }
    basis[r] = c;
  }

  // Maximises; returns false when unbounded.
  bool run() {
    while (true) {
      std::size_t enter = ncols();
      for (std::size_t j = 0; j < ncols(); ++j)
        if (enterable[j] && d[j].sign() > 0) {
          enter = j;
          break;
        }
      if (enter == ncols()) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter].sign() <= 0) continue;
        Rational ratio = rhs[i] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  if (!lp.bounds.empty() && lp.bounds.size() != n) throw StructuralError("lp: bounds size mismatch");
  for (const auto& c : lp.constraints)
    if (c.coeffs.size() != n) throw StructuralError("lp: constraint length mismatch");

  // x_j = shift_j + sum over its columns of sign * z.
  Vec shift(n);
  std::vector<StdColumn> cols;
  struct BoundRow {
    std::size_t col;
    Rational cap;
  };
  std::vector<BoundRow> bound_rows;
  for (std::size_t j = 0; j < n; ++j) {
    VariableBounds b = lp.bounds.empty() ? VariableBounds{} : lp.bounds[j];
    if (b.lower) {
      shift[j] = *b.lower;
      cols.push_back({j, 1});
      if (b.upper) bound_rows.push_back({cols.size() - 1, *b.upper - *b.lower});
    } else if (b.upper) {
      shift[j] = *b.upper;
      cols.push_back({j, -1});
    } else {
      cols.push_back({j, 1});
      cols.push_back({j, -1});
    }
  }
  const std::size_t nz = cols.size();

  struct RowSpec {
    Vec coeffs;  // over z columns
    Relation rel;
    Rational rhs;
    int flip;
    std::size_t origin;  // constraint index, or npos for bound rows
  };
  constexpr std::size_t npos = std::size_t(-1);
  std::vector<RowSpec> specs;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    RowSpec s{Vec(nz), c.rel, c.rhs, 1, i};
    for (std::size_t p = 0; p < nz; ++p) {
      const Rational& a = c.coeffs[cols[p].var];
      if (!a.is_zero()) s.coeffs[p] = cols[p].sign > 0 ? a : -a;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!c.coeffs[j].is_zero() && !shift[j].is_zero()) s.rhs -= c.coeffs[j] * shift[j];
    specs.push_back(std::move(s));
  }
  for (const auto& br : bound_rows) {
    RowSpec s{Vec(nz), Relation::LessEq, br.cap, 1, npos};
    s.coeffs[br.col] = 1;
    specs.push_back(std::move(s));
  }
  for (auto& s : specs) {
    if (s.rhs.sign() < 0) {
      s.flip = -1;
      s.rhs = -s.rhs;
      for (auto& a : s.coeffs) a = -a;
      if (s.rel == Relation::LessEq)
        s.rel = Relation::GreaterEq;
      else if (s.rel == Relation::GreaterEq)
        s.rel = Relation::LessEq;
    }
  }

  const std::size_t m = specs.size();
  std::size_t nslack = 0, nart = 0;
  for (const auto& s : specs) {
    if (s.rel != Relation::Equal) ++nslack;
    if (s.rel != Relation::LessEq) ++nart;
  }
  const std::size_t ncols = nz + nslack + nart;
  Tableau t;
  t.rows.assign(m, Vec(ncols));
  t.rhs.resize(m);
  t.basis.resize(m);
  std::vector<std::size_t> identity_col(m);
  std::vector<char> is_art(ncols, 0);
  {
    std::size_t sc = nz, ac = nz + nslack;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < nz; ++p) t.rows[i][p] = specs[i].coeffs[p];
      t.rhs[i] = specs[i].rhs;
      if (specs[i].rel == Relation::LessEq) {
        t.rows[i][sc] = 1;
        identity_col[i] = sc++;
      } else {
        if (specs[i].rel == Relation::GreaterEq) t.rows[i][sc++] = -1;
        t.rows[i][ac] = 1;
        is_art[ac] = 1;
        identity_col[i] = ac++;
      }
      t.basis[i] = identity_col[i];
    }
  }

  LPResult result;
  if (nart > 0) {
    t.d.assign(ncols, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis[i]]) continue;
      for (std::size_t j = 0; j < ncols; ++j)
        if (!is_art[j] && !t.rows[i][j].is_zero()) t.d[j] += t.rows[i][j];
      t.value -= t.rhs[i];
    }
    t.enterable.assign(ncols, 1);
    for (std::size_t j = 0; j < ncols; ++j)
      if (is_art[j]) t.enterable[j] = 0;
    t.run();
    if (t.value.sign() < 0) {
      result.status = LPStatus::Infeasible;
      result.pivots = t.pivots;
      return result;
    }
    // Drive zero-level artificials out; rows where that is impossible are redundant.
    for (std::size_t i = 0; i < t.rows.size();) {
      if (!is_art[t.basis[i]]) {
        ++i;
        continue;
      }
      std::size_t c = ncols;
      for (std::size_t j = 0; j < ncols; ++j)
        if (!is_art[j] && !t.rows[i][j].is_zero()) {
          c = j;
          break;
        }
      if (c < ncols) {
        t.pivot(i, c);
        ++i;
      } else {
        t.rows.erase(t.rows.begin() + long(i));
        t.rhs.erase(t.rhs.begin() + long(i));
        t.basis.erase(t.basis.begin() + long(i));
        specs.erase(specs.begin() + long(i));
        identity_col.erase(identity_col.begin() + long(i));
      }
    }
  }

  // Phase 2: maximise s * c.x where s = -1 for minimisation.
  const int s = lp.sense == Sense::Maximize ? 1 : -1;
  Vec cz(ncols);
  for (std::size_t p = 0; p < nz; ++p) {
    const Rational& c = lp.objective[cols[p].var];
    if (!c.is_zero()) cz[p] = (cols[p].sign * s > 0) ? c : -c;
  }
  t.d = cz;
  t.value = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Rational& cb = cz[t.basis[i]];
    if (cb.is_zero()) continue;
    for (std::size_t j = 0; j < ncols; ++j)
      if (!t.rows[i][j].is_zero()) t.d[j].sub_mul(cb, t.rows[i][j]);
    t.value += cb * t.rhs[i];
  }
  t.enterable.assign(ncols, 1);
  for (std::size_t j = 0; j < ncols; ++j)
    if (is_art[j]) t.enterable[j] = 0;
  if (!t.run()) {
    result.status = LPStatus::Unbounded;
    result.pivots = t.pivots;
    return result;
  }

  Vec z(ncols);
  for (std::size_t i = 0; i < t.rows.size(); ++i) z[t.basis[i]] = t.rhs[i];
  result.primal = shift;
  for (std::size_t p = 0; p < nz; ++p)
    if (!z[p].is_zero()) result.primal[cols[p].var] += cols[p].sign > 0 ? z[p] : -z[p];
  result.dual.assign(lp.constraints.size(), Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (specs[i].origin == npos) continue;
    Rational y = -t.d[identity_col[i]];
    if (specs[i].flip < 0) y = -y;
    if (s < 0) y = -y;
    result.dual[specs[i].origin] = y;
  }
  result.reduced = lp.objective;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    if (result.dual[i].is_zero()) continue;
    const Vec& a = lp.constraints[i].coeffs;
    for (std::size_t j = 0; j < n; ++j)
      if (!a[j].is_zero()) result.reduced[j].sub_mul(result.dual[i], a[j]);
  }
  result.optimum = Rational(0);
  for (std::size_t j = 0; j < n; ++j)
    if (!lp.objective[j].is_zero()) result.optimum += lp.objective[j] * result.primal[j];
  result.status = LPStatus::Optimal;
  result.pivots = t.pivots;
  std::string err = check_optimality(lp, result);
  if (!err.empty()) throw InvariantError("simplex produced an invalid certificate: " + err);
  return result;
}

std::string check_optimality(const LinearProgram& lp, const LPResult& r) {
  const std::size_t n = lp.num_vars();
  if (r.status != LPStatus::Optimal) return "status is not optimal";
  if (r.primal.size() != n || r.reduced.size() != n || r.dual.size() != lp.constraints.size())
    return "witness sizes";
  const int s = lp.sense == Sense::Maximize ? 1 : -1;
  Rational primal_value, dual_value;
  for (std::size_t j = 0; j < n; ++j) primal_value += lp.objective[j] * r.primal[j];
  if (!(primal_value == r.optimum)) return "optimum does not match primal";
  for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
    const auto& c = lp.constraints[i];
    Rational lhs = dot(c.coeffs, r.primal);
    int cmp = (lhs < c.rhs) ? -1 : (c.rhs < lhs ? 1 : 0);
    if ((c.rel == Relation::LessEq && cmp > 0) || (c.rel == Relation::GreaterEq && cmp < 0) ||
        (c.rel == Relation::Equal && cmp != 0))
      return "constraint " + std::to_string(i) + " violated";
    int ys = r.dual[i].sign() * s;
    if ((c.rel == Relation::LessEq && ys < 0) || (c.rel == Relation::GreaterEq && ys > 0))
      return "dual sign on constraint " + std::to_string(i);
    dual_value += r.dual[i] * c.rhs;
  }
  Vec recon = r.reduced;
  for (std::size_t i = 0; i < lp.constraints.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) recon[j] += r.dual[i] * lp.constraints[i].coeffs[j];
  if (recon != lp.objective) return "dual does not reproduce the objective";
  for (std::size_t j = 0; j < n; ++j) {
    VariableBounds b = lp.bounds.empty() ? VariableBounds{} : lp.bounds[j];
    if (b.lower && r.primal[j] < *b.lower) return "lower bound of x" + std::to_string(j);
    if (b.upper && *b.upper < r.primal[j]) return "upper bound of x" + std::to_string(j);
    int rs = r.reduced[j].sign() * s;
    if (rs == 0) continue;
    const std::optional<Rational>& active = rs > 0 ? b.upper : b.lower;
    if (!active) return "reduced cost on unbounded side of x" + std::to_string(j);
    dual_value += r.reduced[j] * *active;
  }
  if (!(dual_value == primal_value)) return "duality gap " + (primal_value - dual_value).str();
  return {};
}

std::string describe(const LinearProgram& lp) {
  std::ostringstream os;
  os << (lp.sense == Sense::Maximize ? "max " : "min ") << to_string(lp.objective) << "\n";
  for (const auto& c : lp.constraints)
    os << "  " << to_string(c.coeffs)
       << (c.rel == Relation::LessEq ? " <= " : c.rel == Relation::Equal ? " = " : " >= ") << c.rhs << "\n";
  for (std::size_t j = 0; j < lp.bounds.size(); ++j) {
    os << "  x" << j << " in [" << (lp.bounds[j].lower ? lp.bounds[j].lower->str() : "-inf") << ", "
       << (lp.bounds[j].upper ? lp.bounds[j].upper->str() : "inf") << "]\n";
  }
  return os.str();
}

}  // namespace fbl
