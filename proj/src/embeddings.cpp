#include "fbl/embeddings.hpp"

#include <algorithm>

#include "fbl/amalgam.hpp"
#include "fbl/errors.hpp"
#include "fbl/polyhedra.hpp"

namespace fbl {

LatticeMap embed_into_grid(const FiniteLattice& lat, GridLayout layout, const std::optional<std::vector<Vec>>& functionals) {
  const std::size_t n = lat.dim();
  std::vector<Vec> fs;
  if (functionals) {
    fs = *functionals;
  } else if (lat.has_functionals()) {
    fs = order_extreme_points(lat.functionals(), n);
  } else {
    fs = maximal_vertices(lat.ball_generators(), n);
  }
  for (const auto& f : fs) {
    if (f.size() != n) throw StructuralError("functional length does not match the lattice");
    if (!is_nonnegative(f)) throw PreconditionError("functional is not positive", to_string(f));
  }
  for (std::size_t j = 0; j < n; ++j)
    if (std::none_of(fs.begin(), fs.end(), [&](const Vec& f) { return !f[j].is_zero(); }))
      throw PreconditionError("functionals are not positive-definite", "e" + std::to_string(j));
  std::vector<std::size_t> widths;
  for (const auto& f : fs) widths.push_back(layout == GridLayout::Full ? n : support(f).size());
  if (std::find(widths.begin(), widths.end(), std::size_t(0)) != widths.end())
    throw PreconditionError("zero functional in grid embedding");
  GridShape shape(widths);
  std::vector<Vec> cols(n, Vec(shape.cells()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (layout == GridLayout::Compact && fs[i][j].is_zero()) continue;
      cols[j][shape.offset(i) + pos] = fs[i][j];
      ++pos;
    }
  }
  return LatticeMap(lat, FiniteLattice::grid(shape), std::move(cols));
}

LatticeMap induced_inclusion(const FiniteLattice& ambient, const std::vector<Vec>& atoms, std::string label) {
  for (std::size_t t = 0; t < atoms.size(); ++t) {
    if (atoms[t].size() != ambient.dim()) throw StructuralError("atom length does not match the ambient lattice");
    if (!is_nonnegative(atoms[t]) || is_zero(atoms[t]))
      throw PreconditionError("sublattice atoms must be positive and nonzero", "atom " + std::to_string(t));
    for (std::size_t s = 0; s < t; ++s)
      if (!disjoint(atoms[s], atoms[t]))
        throw PreconditionError("sublattice atoms must be disjoint", "atoms " + std::to_string(s) + "," + std::to_string(t));
  }
  const FiniteLattice amb = ambient.has_functionals() ? ambient : complete_forms(ambient);
  std::vector<Vec> fs;
  for (const auto& g : amb.functionals()) {
    Vec v;
    for (const auto& a : atoms) v.push_back(dot(g, a));
    if (!is_zero(v) && std::find(fs.begin(), fs.end(), v) == fs.end()) fs.push_back(std::move(v));
  }
  if (label.empty()) label = "span<" + ambient.label() + ">";
  FiniteLattice sub = atoms.empty() ? FiniteLattice() : FiniteLattice::from_functionals(atoms.size(), std::move(fs), label);
  return LatticeMap(sub, ambient, atoms);
}

Renorming renorm_for_isometry(const LatticeMap& f, const Rational& c) {
  EmbeddingCertificate cert = certify_embedding(f);
  if (!cert.within(c))
    throw PreconditionError("map is not a " + c.str() + "-embedding",
                            cert.c_lower ? "constant " + cert.constant().str() : "kernel " + to_string(cert.lower_witness));
  RenormCase which;
  Rational s(1);
  if (*cert.c_lower <= Rational(1)) {
    which = RenormCase::Expansion;
  } else if (cert.c_upper <= Rational(1)) {
    which = RenormCase::Contraction;
    s = Rational(1) / *cert.c_lower;
  } else {
    which = RenormCase::General;
    s = Rational(1) / max(cert.c_upper, *cert.c_lower);
  }
  const FiniteLattice a = f.dom().has_ball() ? f.dom() : complete_forms(f.dom());
  const FiniteLattice x = f.cod().has_ball() ? f.cod() : complete_forms(f.cod());
  std::vector<Vec> gens;
  for (const auto& w : a.ball_generators()) gens.push_back(f.apply(w));
  for (const auto& w : x.ball_generators()) gens.push_back(scale(s, w));
  gens = order_extreme_points(gens, x.dim());
  FiniteLattice renormed = FiniteLattice::from_ball(x.dim(), std::move(gens), f.cod().label() + "'");
  LatticeMap g = f.with_cod(renormed);
  if (!certify_embedding(g).isometric()) throw InvariantError("renormed map is not isometric");
  return {renormed, g, which, s, cert};
}

IsometrizedPair isometrize_pair(const LatticeMap& f, const Rational& eps) {
  if (eps.sign() < 0) throw PreconditionError("negative eps", eps.str());
  const Rational one_eps = Rational(1) + eps;
  EmbeddingCertificate cert = certify_embedding(f);
  if (!cert.within(one_eps))
    throw PreconditionError("map is not a (1+eps)-embedding",
                            cert.c_lower ? "constant " + cert.constant().str() : "kernel " + to_string(cert.lower_witness));
  const FiniteLattice& x = f.dom();
  const std::size_t n = x.dim();
  LatticeMap incl = induced_inclusion(f.cod(), f.columns(), "f(" + x.label() + ")");
  const FiniteLattice& fx = incl.dom();
  FiniteLattice z0 = direct_sum_infty(x, fx);
  std::vector<Vec> j1(n, Vec(2 * n)), j2(n, Vec(2 * n));
  const Rational inv = Rational(1) / one_eps;
  for (std::size_t i = 0; i < n; ++i) {
    j1[i][i] = 1;
    j1[i][n + i] = inv;
    j2[i][i] = inv;
    j2[i][n + i] = 1;
  }
  LatticeMap m1(x, z0, j1), m2(fx, z0, j2);
  bool onto = f.cod().dim() == n;
  for (const auto& col : f.columns()) onto = onto && support(col).size() == 1;
  IsometrizedPair out{z0, m1, m1, Rational(0)};
  if (onto) {
    std::vector<Vec> hc(f.cod().dim());
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = support(f.columns()[i]).front();
      hc[r] = scale(Rational(1) / f.columns()[i][r], j2[i]);
    }
    out.h = LatticeMap(f.cod(), z0, std::move(hc));
  } else {
    PushoutResult p = amalgamate(incl, m2, Rational(1), AmalgamRoute::Direct);
    out.z = p.g;
    out.g = compose(p.g2, m1);
    out.h = p.g1;
  }
  LatticeMap hf = compose(out.h, f);
  std::vector<Vec> diff;
  for (std::size_t i = 0; i < n; ++i) diff.push_back(sub(out.g.columns()[i], hf.columns()[i]));
  out.defect = operator_norm(LatticeMap(x, out.z, std::move(diff)));
  if (eps < out.defect) throw InvariantError("isometrised pair exceeds eps");
  if (!certify_embedding(out.g).isometric() || !certify_embedding(out.h).isometric())
    throw InvariantError("isometrised pair is not isometric");
  return out;
}

Snap snap_sublattice(const FiniteLattice& ambient, const std::vector<Vec>& approx,
                     const std::optional<std::vector<Vec>>& reference) {
  const std::size_t n = ambient.dim();
  for (const auto& x : approx) {
    if (x.size() != n) throw StructuralError("element length does not match the ambient lattice");
    if (!is_nonnegative(x)) throw PreconditionError("snapping needs positive elements", to_string(x));
  }
  if (reference && reference->size() != approx.size())
    throw StructuralError("reference family has a different size");
  std::vector<Vec> snapped;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    Vec others(n);
    for (std::size_t k = 0; k < approx.size(); ++k)
      if (k != i) others = join(others, approx[k]);
    Vec g = sub(approx[i], meet(approx[i], others));
    if (is_zero(g)) throw PreconditionError("snapped element vanishes", "element " + std::to_string(i));
    snapped.push_back(std::move(g));
  }
  FiniteLattice dom = induced_inclusion(ambient, reference ? *reference : snapped).dom();
  LatticeMap map(dom, ambient, snapped);
  Snap out{map, certify_embedding(map).constant(), std::nullopt};
  if (reference) {
    Rational err;
    for (std::size_t i = 0; i < snapped.size(); ++i) err = max(err, ambient.norm(sub((*reference)[i], snapped[i])));
    out.reference_error = err;
  }
  return out;
}

}  // namespace fbl
