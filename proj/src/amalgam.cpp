#include "fbl/amalgam.hpp"

#include <algorithm>
#include <map>

#include "fbl/errors.hpp"
#include "fbl/polyhedra.hpp"

namespace fbl {
namespace {

std::string cell_name(const FiniteLattice& f, std::size_t p) {
  if (f.grid_shape()) {
    std::size_t k = f.grid_shape()->row_of(p);
    return "(" + std::to_string(k) + "," + std::to_string(p - f.grid_shape()->offset(k)) + ")";
  }
  return "(" + std::to_string(p) + ")";
}

void require_same_source(const LatticeMap& f1, const LatticeMap& f2) {
  if (f1.dom().dim() != f2.dom().dim())
    throw StructuralError("legs start from lattices of dimension " + std::to_string(f1.dom().dim()) + " and " +
                          std::to_string(f2.dom().dim()));
  if (f1.dom().dim() > 0 && !same_norm(f1.dom(), f2.dom()))
    throw StructuralError("legs start from lattices with different norms");
}

void require_c_embedding(const LatticeMap& f, const Rational& c, const char* which) {
  HomomorphismReport hr = check_homomorphism(f);
  if (!hr.ok) throw PreconditionError(std::string(which) + " is not a lattice homomorphism", hr.reason);
  EmbeddingCertificate cert = certify_embedding(f);
  if (!cert.within(c))
    throw PreconditionError(std::string(which) + " is not a " + c.str() + "-embedding",
                            cert.c_lower ? "constant " + cert.constant().str() : "kernel " + to_string(cert.lower_witness));
}

std::vector<Vec> prune_dominated(std::vector<Vec> gens) {
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  std::vector<char> alive(gens.size(), 1);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t k = 0; k < gens.size() && alive[i]; ++k)
      if (k != i && alive[k] && leq(gens[i], gens[k])) alive[i] = 0;
  std::vector<Vec> out;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (alive[i]) out.push_back(std::move(gens[i]));
  return out;
}

// The construction itself; valid for any pair of codomains with ball generators.
PushoutResult atomic_pushout(const LatticeMap& f1, const LatticeMap& f2, const Rational& c) {
  const FiniteLattice& e = f1.dom();
  const FiniteLattice f1c = f1.cod().has_ball() ? f1.cod() : complete_forms(f1.cod());
  const FiniteLattice f2c = f2.cod().has_ball() ? f2.cod() : complete_forms(f2.cod());
  const std::size_t n1 = f1c.dim(), n2 = f2c.dim();
  std::vector<long> owner1(n1, -1), owner2(n2, -1);
  for (std::size_t i = 0; i < e.dim(); ++i) {
    for (std::size_t p : support(f1.columns()[i])) owner1[p] = long(i);
    for (std::size_t q : support(f2.columns()[i])) owner2[q] = long(i);
  }
  std::vector<std::string> legend;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> tensor;
  for (std::size_t i = 0; i < e.dim(); ++i)
    for (std::size_t p : support(f1.columns()[i]))
      for (std::size_t q : support(f2.columns()[i])) {
        tensor[{p, q}] = legend.size();
        legend.push_back("u" + cell_name(f1c, p) + "*v" + cell_name(f2c, q));
      }
  std::vector<std::size_t> left(n1), right(n2);
  for (std::size_t p = 0; p < n1; ++p)
    if (owner1[p] < 0) {
      left[p] = legend.size();
      legend.push_back("u" + cell_name(f1c, p));
    }
  for (std::size_t q = 0; q < n2; ++q)
    if (owner2[q] < 0) {
      right[q] = legend.size();
      legend.push_back("v" + cell_name(f2c, q));
    }
  const std::size_t ng = legend.size();
  std::vector<Vec> c1(n1, Vec(ng)), c2(n2, Vec(ng));
  for (std::size_t p = 0; p < n1; ++p) {
    if (owner1[p] < 0) {
      c1[p][left[p]] = 1;
      continue;
    }
    const Vec& b = f2.columns()[std::size_t(owner1[p])];
    for (std::size_t q : support(b)) c1[p][tensor.at({p, q})] = b[q];
  }
  for (std::size_t q = 0; q < n2; ++q) {
    if (owner2[q] < 0) {
      c2[q][right[q]] = 1;
      continue;
    }
    const Vec& a = f1.columns()[std::size_t(owner2[q])];
    for (std::size_t p : support(a)) c2[q][tensor.at({p, q})] = a[p];
  }
  std::vector<Vec> gens;
  auto push_image = [&](const std::vector<Vec>& cols, const Vec& w) {
    Vec img(ng);
    for (std::size_t j = 0; j < w.size(); ++j)
      if (!w[j].is_zero())
        for (std::size_t r = 0; r < ng; ++r)
          if (!cols[j][r].is_zero()) img[r] += cols[j][r] * w[j];
    gens.push_back(std::move(img));
  };
  for (const auto& w : f1c.ball_generators()) push_image(c1, w);
  for (const auto& w : f2c.ball_generators()) push_image(c2, w);
  FiniteLattice g = FiniteLattice::from_ball(ng, prune_dominated(std::move(gens)),
                                             "G(" + f1.cod().label() + "," + f2.cod().label() + ")");
  PushoutResult res{g,
                    LatticeMap(f1.cod(), g, c1),
                    LatticeMap(f2.cod(), g, c2),
                    LatticeMap(f1.cod(), g, c1),
                    LatticeMap(f2.cod(), g, c2),
                    {}, {}, {}, {},
                    std::move(legend),
                    c};
  if (compose(res.raw_g1, f1).columns() != compose(res.raw_g2, f2).columns())
    throw InvariantError("pushout square does not commute");
  res.raw_cert1 = certify_embedding(res.raw_g1);
  res.raw_cert2 = certify_embedding(res.raw_g2);
  const Rational c2sq = c * c;
  if (!res.raw_cert1.within(c2sq) || !res.raw_cert2.within(c2sq))
    throw InvariantError("pushout maps exceed the c^2 bound");
  if (c == Rational(1)) {
    res.cert1 = res.raw_cert1;
    res.cert2 = res.raw_cert2;
  } else {
    res.g1 = res.raw_g1.scaled(c);
    res.g2 = res.raw_g2.scaled(c);
    res.cert1 = certify_embedding(res.g1);
    res.cert2 = certify_embedding(res.g2);
  }
  if (!res.cert1.within(c) || !res.cert2.within(c)) throw InvariantError("scaled pushout maps exceed c");
  return res;
}

}  // namespace

NormalizedLeg normalize_to_full(const LatticeMap& f, GridLayout layout, std::optional<std::size_t> pad_rows) {
  LatticeMap emb = f.cod().grid_shape() ? identity_map(f.cod()) : embed_into_grid(f.cod(), layout);
  if (pad_rows) {
    const GridShape shape = *emb.cod().grid_shape();
    if (*pad_rows < shape.rows())
      throw StructuralError("cannot pad a grid of " + std::to_string(shape.rows()) + " rows down to " +
                            std::to_string(*pad_rows));
    LatticeMap leg = compose(emb, f);
    std::vector<char> in_image(shape.cells(), 0);
    for (const auto& col : leg.columns())
      for (std::size_t p : support(col)) in_image[p] = 1;
    std::size_t best = 0, best_overlap = shape.cells() + 1;
    for (std::size_t k = 0; k < shape.rows(); ++k) {
      std::size_t ov = 0;
      for (std::size_t j = 0; j < shape.width(k); ++j) ov += in_image[shape.offset(k) + j];
      if (ov < best_overlap) {
        best_overlap = ov;
        best = k;
      }
    }
    std::vector<std::size_t> widths = shape.widths();
    while (widths.size() < *pad_rows) widths.push_back(shape.width(best));
    GridShape padded(widths);
    FiniteLattice target = FiniteLattice::grid(padded);
    std::vector<Vec> cols;
    for (std::size_t p = 0; p < shape.cells(); ++p) {
      Vec v(padded.cells());
      v[p] = 1;
      if (shape.row_of(p) == best)
        for (std::size_t k = shape.rows(); k < padded.rows(); ++k) v[padded.offset(k) + (p - shape.offset(best))] = 1;
      cols.push_back(std::move(v));
    }
    emb = compose(LatticeMap(emb.cod(), target, std::move(cols)), emb);
  }
  return {compose(emb, f), emb};
}

std::vector<Vec> induced_matrix(const LatticeMap& f) {
  if (!f.cod().grid_shape()) throw StructuralError("induced matrix needs a grid codomain");
  const GridShape& s = *f.cod().grid_shape();
  std::vector<Vec> a(s.rows(), Vec(f.dom().dim()));
  for (std::size_t i = 0; i < f.dom().dim(); ++i)
    for (std::size_t k = 0; k < s.rows(); ++k)
      for (std::size_t j = 0; j < s.width(k); ++j) a[k][i] += f.columns()[i][s.offset(k) + j];
  return a;
}

PushoutResult pushout(const LatticeMap& f1, const LatticeMap& f2, const Rational& c) {
  require_same_source(f1, f2);
  if (!f1.cod().grid_shape() || !f2.cod().grid_shape())
    throw StructuralError("pushout needs grid codomains; normalise the legs first");
  if (c < Rational(1)) throw PreconditionError("embedding constant below 1", c.str());
  require_c_embedding(f1, c, "first leg");
  require_c_embedding(f2, c, "second leg");
  return atomic_pushout(f1, f2, c);
}

PushoutResult amalgamate(const LatticeMap& f1, const LatticeMap& f2, const Rational& c, AmalgamRoute route) {
  if (route == AmalgamRoute::Auto)
    route = (f1.cod().has_functionals() && f2.cod().has_functionals()) ? AmalgamRoute::Grid : AmalgamRoute::Direct;
  if (route == AmalgamRoute::Direct) {
    require_same_source(f1, f2);
    if (c < Rational(1)) throw PreconditionError("embedding constant below 1", c.str());
    require_c_embedding(f1, c, "first leg");
    require_c_embedding(f2, c, "second leg");
    return atomic_pushout(f1, f2, c);
  }
  NormalizedLeg n1 = normalize_to_full(f1), n2 = normalize_to_full(f2);
  PushoutResult p = pushout(n1.leg, n2.leg, c);
  p.g1 = compose(p.g1, n1.cod_embedding);
  p.g2 = compose(p.g2, n2.cod_embedding);
  p.raw_g1 = compose(p.raw_g1, n1.cod_embedding);
  p.raw_g2 = compose(p.raw_g2, n2.cod_embedding);
  p.cert1 = certify_embedding(p.g1);
  p.cert2 = certify_embedding(p.g2);
  p.raw_cert1 = certify_embedding(p.raw_g1);
  p.raw_cert2 = certify_embedding(p.raw_g2);
  if (!p.cert1.within(c) || !p.cert2.within(c)) throw InvariantError("amalgam maps exceed c after normalisation");
  return p;
}

PushoutResult amalgamate_c_embeddings(const LatticeMap& f1, const Rational& c1, const LatticeMap& f2,
                                      const Rational& c2, CEmbeddingMode mode) {
  require_same_source(f1, f2);
  Renorming r1 = renorm_for_isometry(f1, c1);
  Renorming r2 = renorm_for_isometry(f2, c2);
  PushoutResult p = amalgamate(r1.map, r2.map, Rational(1), AmalgamRoute::Direct);
  p.g1 = p.g1.with_dom(f1.cod());
  p.g2 = p.g2.with_dom(f2.cod());
  if (mode == CEmbeddingMode::OneIsometric) {
    Renorming rg = renorm_for_isometry(p.g1, c1);
    p.g = rg.lattice;
    p.g1 = rg.map;
    p.g2 = p.g2.with_cod(rg.lattice);
  }
  p.raw_g1 = p.g1;
  p.raw_g2 = p.g2;
  p.cert1 = p.raw_cert1 = certify_embedding(p.g1);
  p.cert2 = p.raw_cert2 = certify_embedding(p.g2);
  p.c = max(c1, c2);
  if (compose(p.g1, f1).columns() != compose(p.g2, f2).columns())
    throw InvariantError("amalgam of c-embeddings does not commute");
  bool ok = mode == CEmbeddingMode::Balanced ? (p.cert1.within(c1) && p.cert2.within(c2))
                                             : (p.cert1.isometric() && p.cert2.within(c1 * c2));
  if (!ok) throw InvariantError("amalgam of c-embeddings exceeds its constants");
  return p;
}

NearAmalgam near_amalgamate(const LatticeMap& f1, const LatticeMap& f2, const Rational& eps) {
  require_same_source(f1, f2);
  IsometrizedPair p1 = isometrize_pair(f1, eps);
  IsometrizedPair p2 = isometrize_pair(f2, eps);
  PushoutResult a = amalgamate(p1.g, p2.g, Rational(1), AmalgamRoute::Direct);
  NearAmalgam out{a.g, compose(a.g1, p1.h), compose(a.g2, p2.h), Rational(0)};
  LatticeMap u = compose(out.g1, f1), v = compose(out.g2, f2);
  std::vector<Vec> diff;
  for (std::size_t i = 0; i < u.columns().size(); ++i) diff.push_back(sub(u.columns()[i], v.columns()[i]));
  out.bound = operator_norm(LatticeMap(f1.dom(), out.h, std::move(diff)));
  if (Rational(2) * eps < out.bound) throw InvariantError("near amalgamation exceeds 2 eps");
  if (!certify_embedding(out.g1).isometric() || !certify_embedding(out.g2).isometric())
    throw InvariantError("near amalgamation maps are not isometric");
  return out;
}

RowDomination check_row_domination(const std::vector<Vec>& a, const std::vector<Vec>& b, const Rational& c,
                                   bool isometric) {
  RowDomination rd;
  const Rational bound = isometric ? Rational(1) : c * c;
  for (const auto& row : a) {
    rd.forward.push_back(sch_gauge(row, b));
    rd.ok = rd.ok && rd.forward.back() && *rd.forward.back() <= bound;
  }
  for (const auto& row : b) {
    rd.backward.push_back(sch_gauge(row, a));
    rd.ok = rd.ok && rd.backward.back() && *rd.backward.back() <= bound;
  }
  if (isometric && !a.empty() && !b.empty()) {
    const std::size_t n = a.front().size();
    rd.same_hull = sorted(order_extreme_points(a, n)) == sorted(order_extreme_points(b, n));
    rd.ok = rd.ok && *rd.same_hull;
  }
  return rd;
}

}  // namespace fbl
