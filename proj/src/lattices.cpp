#include "fbl/lattices.hpp"

#include <algorithm>

#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/lp.hpp"
#include "fbl/polyhedra.hpp"

namespace fbl {

struct FiniteLattice::Data {
  std::size_t dim = 0;
  std::optional<std::vector<Vec>> functionals;
  std::optional<std::vector<Vec>> generators;
  std::optional<GridShape> grid;
  std::string label;
};

namespace {

constexpr std::size_t kGridBallLimit = 4096;

void validate_family(std::size_t dim, std::vector<Vec>& fam, const char* what, bool take_abs) {
  for (auto& v : fam) {
    if (v.size() != dim) throw StructuralError(std::string(what) + " of length " + std::to_string(v.size()) +
                                               " in a lattice of dimension " + std::to_string(dim));
    if (take_abs) v = abs(v);
    if (!is_nonnegative(v)) throw PreconditionError(std::string(what) + " is not positive", to_string(v));
    if (is_zero(v)) throw PreconditionError(std::string(what) + " is zero");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    bool covered = std::any_of(fam.begin(), fam.end(), [&](const Vec& v) { return !v[j].is_zero(); });
    if (!covered)
      throw PreconditionError(std::string(what) + (take_abs ? " leave the ball unbounded" : " vanish on an atom"),
                              "e" + std::to_string(j));
  }
}

Rational functional_norm(const std::vector<Vec>& fs, const Vec& x) {
  Rational best;
  for (const auto& f : fs) {
    Rational s;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!f[j].is_zero() && !x[j].is_zero()) s += f[j] * fbl::abs(x[j]);
    best = max(best, s);
  }
  return best;
}

std::size_t selection_count(const GridShape& s) {
  std::size_t n = 1;
  for (std::size_t w : s.widths()) {
    if (n > kGridBallLimit / w) return kGridBallLimit + 1;
    n *= w;
  }
  return n;
}

}  // namespace

FiniteLattice::FiniteLattice() {
  auto d = std::make_shared<Data>();
  d->functionals = std::vector<Vec>{};
  d->generators = std::vector<Vec>{};
  d->label = "0";
  d_ = std::move(d);
}

FiniteLattice FiniteLattice::from_forms(std::size_t dim, std::optional<std::vector<Vec>> functionals,
                                        std::optional<std::vector<Vec>> generators, std::string label,
                                        std::optional<GridShape> grid) {
  if (dim == 0) return FiniteLattice().with_label(label.empty() ? "0" : label);
  if (!functionals && !generators) throw StructuralError("lattice needs functionals or ball generators");
  if (functionals) validate_family(dim, *functionals, "functionals", false);
  if (generators) validate_family(dim, *generators, "ball generators", true);
  if (grid && grid->cells() != dim) throw StructuralError("grid shape does not match dimension");
  auto d = std::make_shared<Data>();
  d->dim = dim;
  d->functionals = std::move(functionals);
  d->generators = std::move(generators);
  d->grid = std::move(grid);
  d->label = std::move(label);
  FiniteLattice l;
  l.d_ = std::move(d);
  return l;
}

FiniteLattice FiniteLattice::from_functionals(std::size_t dim, std::vector<Vec> functionals, std::string label) {
  return from_forms(dim, std::move(functionals), std::nullopt, std::move(label));
}

FiniteLattice FiniteLattice::from_ball(std::size_t dim, std::vector<Vec> generators, std::string label) {
  return from_forms(dim, std::nullopt, std::move(generators), std::move(label));
}

FiniteLattice FiniteLattice::grid(const GridShape& shape, std::string label) {
  std::optional<std::vector<Vec>> gens;
  if (selection_count(shape) <= kGridBallLimit) gens = grid_row_selections(shape);
  if (label.empty()) label = "grid" + shape.str();
  return from_forms(shape.cells(), grid_row_functionals(shape), std::move(gens), std::move(label), shape);
}

FiniteLattice FiniteLattice::l1(std::size_t n) {
  return grid(GridShape({n}), "l1^" + std::to_string(n));
}

FiniteLattice FiniteLattice::linf(std::size_t n) {
  return grid(GridShape::uniform(n, 1), "linf^" + std::to_string(n));
}

std::size_t FiniteLattice::dim() const { return d_->dim; }
bool FiniteLattice::has_functionals() const { return d_->functionals.has_value(); }
bool FiniteLattice::has_ball() const { return d_->generators.has_value(); }

const std::vector<Vec>& FiniteLattice::functionals() const {
  if (!d_->functionals) throw StructuralError("lattice '" + d_->label + "' has no functional form");
  return *d_->functionals;
}

const std::vector<Vec>& FiniteLattice::ball_generators() const {
  if (!d_->generators) throw StructuralError("lattice '" + d_->label + "' has no ball form");
  return *d_->generators;
}

const std::optional<GridShape>& FiniteLattice::grid_shape() const { return d_->grid; }
const std::string& FiniteLattice::label() const { return d_->label; }

FiniteLattice FiniteLattice::with_label(std::string label) const {
  auto d = std::make_shared<Data>(*d_);
  d->label = std::move(label);
  FiniteLattice l;
  l.d_ = std::move(d);
  return l;
}

Rational FiniteLattice::norm(const Vec& x) const {
  if (x.size() != dim()) throw StructuralError("norm: vector length " + std::to_string(x.size()) +
                                               " in lattice of dimension " + std::to_string(dim()));
  if (d_->functionals) return functional_norm(*d_->functionals, x);
  auto g = sch_gauge(x, *d_->generators);
  if (!g) throw InvariantError("gauge infinite on a validated ball");
  return *g;
}

Rational FiniteLattice::atom_norm(std::size_t j) const { return norm(unit_vector(dim(), j)); }

FiniteLattice complete_forms(const FiniteLattice& lat) {
  if (lat.dim() == 0 || (lat.has_functionals() && lat.has_ball())) return lat;
  if (lat.has_functionals())
    return FiniteLattice::from_forms(lat.dim(), lat.functionals(), maximal_vertices(lat.functionals(), lat.dim()),
                                     lat.label(), lat.grid_shape());
  return FiniteLattice::from_forms(lat.dim(), maximal_vertices(lat.ball_generators(), lat.dim()),
                                   lat.ball_generators(), lat.label(), lat.grid_shape());
}

std::vector<Vec> canonical_oeps(const FiniteLattice& lat) {
  if (lat.dim() == 0) return {};
  if (lat.has_ball()) return sorted(order_extreme_points(lat.ball_generators(), lat.dim()));
  return sorted(maximal_vertices(lat.functionals(), lat.dim()));
}

bool same_norm(const FiniteLattice& a, const FiniteLattice& b) {
  return a.dim() == b.dim() && canonical_oeps(a) == canonical_oeps(b);
}

FiniteLattice dualize(const FiniteLattice& lat) {
  if (lat.dim() == 0) return lat;
  FiniteLattice c = complete_forms(lat);
  std::vector<Vec> f = order_extreme_points(c.ball_generators(), c.dim());
  std::vector<Vec> g = order_extreme_points(c.functionals(), c.dim());
  return FiniteLattice::from_forms(c.dim(), std::move(f), std::move(g), lat.label() + "*");
}

LatticeMap::LatticeMap(FiniteLattice dom, FiniteLattice cod, std::vector<Vec> columns)
    : dom_(std::move(dom)), cod_(std::move(cod)), columns_(std::move(columns)) {
  if (columns_.size() != dom_.dim())
    throw StructuralError("map has " + std::to_string(columns_.size()) + " columns, domain dimension " +
                          std::to_string(dom_.dim()));
  for (const auto& c : columns_)
    if (c.size() != cod_.dim())
      throw StructuralError("map column of length " + std::to_string(c.size()) + ", codomain dimension " +
                            std::to_string(cod_.dim()));
}

Vec LatticeMap::apply(const Vec& x) const {
  if (x.size() != dom_.dim()) throw StructuralError("apply: vector does not match the domain");
  Vec y(cod_.dim());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero()) continue;
    for (std::size_t r = 0; r < y.size(); ++r)
      if (!columns_[j][r].is_zero()) y[r] += columns_[j][r] * x[j];
  }
  return y;
}

LatticeMap LatticeMap::scaled(const Rational& r) const {
  std::vector<Vec> cols;
  for (const auto& c : columns_) cols.push_back(scale(r, c));
  return LatticeMap(dom_, cod_, std::move(cols));
}

LatticeMap LatticeMap::with_dom(FiniteLattice dom) const { return LatticeMap(std::move(dom), cod_, columns_); }
LatticeMap LatticeMap::with_cod(FiniteLattice cod) const { return LatticeMap(dom_, std::move(cod), columns_); }

LatticeMap compose(const LatticeMap& g, const LatticeMap& f) {
  if (f.cod().dim() != g.dom().dim()) throw StructuralError("compose: inner codomain does not match outer domain");
  std::vector<Vec> cols;
  for (const auto& c : f.columns()) cols.push_back(g.apply(c));
  return LatticeMap(f.dom(), g.cod(), std::move(cols));
}

LatticeMap identity_map(const FiniteLattice& lat) {
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < lat.dim(); ++j) cols.push_back(unit_vector(lat.dim(), j));
  return LatticeMap(lat, lat, std::move(cols));
}

HomomorphismReport check_homomorphism(const LatticeMap& f) {
  const auto& cols = f.columns();
  std::vector<long> owner(f.cod().dim(), -1);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t r = 0; r < cols[j].size(); ++r) {
      int s = cols[j][r].sign();
      if (s < 0)
        return {false, "negative entry " + cols[j][r].str() + " at row " + std::to_string(r) + ", column " +
                           std::to_string(j)};
      if (s == 0) continue;
      if (owner[r] >= 0)
        return {false, "columns " + std::to_string(owner[r]) + " and " + std::to_string(j) + " overlap at row " +
                           std::to_string(r)};
      owner[r] = long(j);
    }
  return {};
}

Rational EmbeddingCertificate::constant() const {
  if (!c_lower) throw PreconditionError("map is not injective", to_string(lower_witness));
  return max(c_upper, *c_lower);
}

namespace {

// max_{x >= 0, supp x in S, ||f x|| <= 1} w . x ; nullopt if unbounded.
std::optional<std::pair<Rational, Vec>> pullback_max(const LatticeMap& f, const Vec& weight) {
  const std::size_t n = f.dom().dim();
  std::vector<std::size_t> s = support(weight);
  const FiniteLattice& cod = f.cod();
  LinearProgram lp;
  std::vector<std::size_t> rows;
  {
    std::vector<char> touched(cod.dim(), 0);
    for (std::size_t j : s)
      for (std::size_t r = 0; r < cod.dim(); ++r)
        if (!f.entry(r, j).is_zero()) touched[r] = 1;
    for (std::size_t r = 0; r < cod.dim(); ++r)
      if (touched[r]) rows.push_back(r);
  }
  if (cod.has_functionals()) {
    for (std::size_t j : s) lp.objective.push_back(weight[j]);
    for (const auto& g : cod.functionals()) {
      Vec row;
      bool nz = false;
      for (std::size_t j : s) {
        Rational c;
        for (std::size_t r : rows)
          if (!g[r].is_zero() && !f.entry(r, j).is_zero()) c += g[r] * f.entry(r, j);
        nz = nz || !c.is_zero();
        row.push_back(std::move(c));
      }
      if (nz) lp.add(std::move(row), Relation::LessEq, 1);
    }
  } else {
    // Variables: x on S, then lambda over generators restricted to the touched rows.
    std::vector<Vec> gens;
    for (const auto& w : cod.ball_generators()) {
      Vec r;
      bool nz = false;
      for (std::size_t row : rows) {
        r.push_back(w[row]);
        nz = nz || !w[row].is_zero();
      }
      if (nz && std::find(gens.begin(), gens.end(), r) == gens.end()) gens.push_back(std::move(r));
    }
    std::vector<char> alive(gens.size(), 1);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t k = 0; k < gens.size() && alive[i]; ++k)
        if (k != i && alive[k] && leq(gens[i], gens[k])) alive[i] = 0;
    std::vector<Vec> kept;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (alive[i]) kept.push_back(gens[i]);
    for (std::size_t j : s) lp.objective.push_back(weight[j]);
    lp.objective.resize(s.size() + kept.size());
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      Vec row(s.size() + kept.size());
      for (std::size_t k = 0; k < s.size(); ++k) row[k] = f.entry(rows[ri], s[k]);
      for (std::size_t g = 0; g < kept.size(); ++g) row[s.size() + g] = -kept[g][ri];
      lp.add(std::move(row), Relation::LessEq, 0);
    }
    Vec total(s.size() + kept.size());
    for (std::size_t g = 0; g < kept.size(); ++g) total[s.size() + g] = 1;
    lp.add(std::move(total), Relation::LessEq, 1);
  }
  lp.set_nonnegative();
  LPResult res = solve_lp(lp);
  if (res.status == LPStatus::Unbounded) return std::nullopt;
  if (res.status != LPStatus::Optimal) throw InvariantError("pullback program infeasible");
  Vec x(n);
  for (std::size_t k = 0; k < s.size(); ++k) x[s[k]] = res.primal[k];
  return std::make_pair(res.optimum, x);
}

}  // namespace

EmbeddingCertificate certify_embedding(const LatticeMap& f) {
  HomomorphismReport hr = check_homomorphism(f);
  if (!hr.ok) throw PreconditionError("not a lattice homomorphism", hr.reason);
  EmbeddingCertificate cert;
  const FiniteLattice& dom = f.dom();
  const std::size_t n = dom.dim();
  if (n == 0) {
    cert.c_lower = Rational(0);
    return cert;
  }
  // Upper constant.
  if (dom.has_ball()) {
    bool have = false;
    for (const auto& w : dom.ball_generators()) {
      Vec img = f.apply(w);
      if (have && !f.cod().has_functionals()) {
        auto ub = gauge_upper_bound(img, f.cod().ball_generators());
        if (ub && *ub <= cert.c_upper) continue;
      }
      Rational v = f.cod().norm(img);
      if (!have || cert.c_upper < v) {
        cert.c_upper = v;
        cert.upper_witness = w;
        have = true;
      }
    }
  } else {
    FiniteLattice cod = complete_forms(f.cod());
    bool have = false;
    for (const auto& g : cod.functionals()) {
      LinearProgram lp;
      lp.objective.assign(n, Rational(0));
      for (std::size_t j = 0; j < n; ++j) lp.objective[j] = dot(g, f.columns()[j]);
      for (const auto& fd : dom.functionals()) lp.add(fd, Relation::LessEq, 1);
      lp.set_nonnegative();
      LPResult res = solve_lp(lp);
      if (res.status != LPStatus::Optimal) throw InvariantError("operator norm program not optimal");
      if (!have || cert.c_upper < res.optimum) {
        cert.c_upper = res.optimum;
        cert.upper_witness = res.primal;
        have = true;
      }
    }
  }
  // Lower constant.
  for (std::size_t j = 0; j < n; ++j)
    if (is_zero(f.columns()[j])) {
      cert.c_lower = std::nullopt;
      cert.lower_witness = unit_vector(n, j);
      return cert;
    }
  FiniteLattice full_dom = dom.has_functionals() ? dom : complete_forms(dom);
  LatticeMap g = dom.has_functionals() ? f : f.with_dom(full_dom);
  Rational best;
  bool have = false;
  for (const auto& fd : full_dom.functionals()) {
    auto r = pullback_max(g, fd);
    if (!r) throw InvariantError("pullback program unbounded for an injective homomorphism");
    if (!have || best < r->first) {
      best = r->first;
      cert.lower_witness = r->second;
      have = true;
    }
  }
  cert.c_lower = best;
  return cert;
}

Rational operator_norm(const LatticeMap& f) {
  const FiniteLattice dom = f.dom().has_ball() ? f.dom() : complete_forms(f.dom());
  Rational best;
  for (const auto& p : dom.ball_generators()) {
    std::vector<std::size_t> s = support(p);
    if (s.empty()) continue;
    // Fix the sign of the first support coordinate; the ball is symmetric.
    std::size_t patterns = std::size_t(1) << (s.size() - 1);
    for (std::size_t mask = 0; mask < patterns; ++mask) {
      Vec x = p;
      for (std::size_t k = 1; k < s.size(); ++k)
        if (mask >> (k - 1) & 1) x[s[k]] = -x[s[k]];
      best = max(best, f.cod().norm(f.apply(x)));
    }
  }
  return best;
}

FiniteLattice direct_sum_infty(const FiniteLattice& a, const FiniteLattice& b) {
  if (a.dim() == 0) return b;
  if (b.dim() == 0) return a;
  const std::size_t n = a.dim() + b.dim();
  FiniteLattice ca = a.has_functionals() ? a : complete_forms(a);
  FiniteLattice cb = b.has_functionals() ? b : complete_forms(b);
  std::vector<Vec> fs;
  for (const auto& f : ca.functionals()) {
    Vec v = f;
    v.resize(n);
    fs.push_back(std::move(v));
  }
  for (const auto& f : cb.functionals()) {
    Vec v(a.dim());
    v.insert(v.end(), f.begin(), f.end());
    fs.push_back(std::move(v));
  }
  std::optional<std::vector<Vec>> gens;
  if (a.has_ball() && b.has_ball() &&
      a.ball_generators().size() * b.ball_generators().size() <= kGridBallLimit) {
    gens.emplace();
    for (const auto& w : a.ball_generators())
      for (const auto& u : b.ball_generators()) {
        Vec v = w;
        v.insert(v.end(), u.begin(), u.end());
        gens->push_back(std::move(v));
      }
  }
  std::optional<GridShape> grid;
  if (a.grid_shape() && b.grid_shape()) {
    auto w = a.grid_shape()->widths();
    const auto& w2 = b.grid_shape()->widths();
    w.insert(w.end(), w2.begin(), w2.end());
    grid = GridShape(w);
  }
  return FiniteLattice::from_forms(n, std::move(fs), std::move(gens), "(" + a.label() + " (+)inf " + b.label() + ")",
                                   grid);
}

std::pair<LatticeMap, LatticeMap> direct_sum_injections(const FiniteLattice& a, const FiniteLattice& b,
                                                        const FiniteLattice& sum) {
  if (sum.dim() != a.dim() + b.dim()) throw StructuralError("direct sum dimension mismatch");
  std::vector<Vec> ca, cb;
  for (std::size_t j = 0; j < a.dim(); ++j) ca.push_back(unit_vector(sum.dim(), j));
  for (std::size_t j = 0; j < b.dim(); ++j) cb.push_back(unit_vector(sum.dim(), a.dim() + j));
  return {LatticeMap(a, sum, std::move(ca)), LatticeMap(b, sum, std::move(cb))};
}

EquivalenceAudit equivalences_audit(const FiniteLattice& lat, std::size_t full_enumeration_max_dim) {
  EquivalenceAudit audit;
  if (lat.dim() == 0) {
    audit.oep_routes_agree = audit.dual_routes_agree = audit.grid_isometric = true;
    return audit;
  }
  auto fail = [&](const std::string& why) {
    if (audit.failure.empty()) audit.failure = why;
  };
  const std::size_t n = lat.dim();
  FiniteLattice c = complete_forms(lat);
  std::vector<Vec> oep_a = sorted(order_extreme_points(c.ball_generators(), n));
  std::vector<Vec> oep_b = sorted(maximal_vertices(c.functionals(), n));
  audit.oep_count = oep_a.size();
  audit.oep_routes_agree = oep_a == oep_b;
  if (!audit.oep_routes_agree) fail("order extreme points differ between ball and functional descriptions");
  for (const auto& p : oep_a) audit.ep_count += std::size_t(1) << support(p).size();
  if (n <= full_enumeration_max_dim) {
    std::vector<Vec> rows;
    for (const auto& f : c.functionals()) {
      std::vector<std::size_t> s = support(f);
      for (std::size_t mask = 0; mask < (std::size_t(1) << s.size()); ++mask) {
        Vec r = f;
        for (std::size_t k = 0; k < s.size(); ++k)
          if (mask >> k & 1) r[s[k]] = -r[s[k]];
        rows.push_back(std::move(r));
      }
    }
    // Coordinates outside every functional support are impossible (validated), so the ball is bounded.
    std::vector<Vec> verts = polytope_vertices(rows, Vec(rows.size(), Rational(1)), n);
    bool ok = verts.size() == audit.ep_count;
    for (const auto& v : verts) ok = ok && std::binary_search(oep_a.begin(), oep_a.end(), abs(v));
    audit.ep_enumeration_agrees = ok;
    if (!ok) fail("extreme points of the ball are not the signed order extreme points");
  }
  std::vector<Vec> dual_a = sorted(order_extreme_points(c.functionals(), n));
  std::vector<Vec> dual_b = sorted(maximal_vertices(c.ball_generators(), n));
  audit.dual_oep_count = dual_a.size();
  audit.dual_routes_agree = dual_a == dual_b;
  if (!audit.dual_routes_agree) fail("dual order extreme points differ between the two descriptions");
  EmbeddingCertificate cert = certify_embedding(embed_into_grid(c));
  audit.grid_isometric = cert.isometric();
  if (!audit.grid_isometric) fail("grid embedding is not isometric");
  return audit;
}

}  // namespace fbl
