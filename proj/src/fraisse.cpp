#include "fbl/fraisse.hpp"

#include <algorithm>
#include <numeric>

#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/instances.hpp"

namespace fbl {
namespace {

FiniteLattice with_functionals(const FiniteLattice& l) {
  return l.dim() == 0 || l.has_functionals() ? l : complete_forms(l);
}

std::vector<Vec> apply_all(const LatticeMap& f, const std::vector<Vec>& xs) {
  std::vector<Vec> out;
  for (const auto& x : xs) out.push_back(f.apply(x));
  return out;
}

// l1-normalised profile of coordinate j, with its l1 mass; mass 0 when zero.
std::pair<Vec, Rational> profile(const std::vector<Vec>& tuple, std::size_t j) {
  Vec p;
  Rational mass;
  for (const auto& v : tuple) {
    p.push_back(v[j]);
    mass += fbl::abs(v[j]);
  }
  if (!mass.is_zero())
    for (auto& x : p) x /= mass;
  return {std::move(p), mass};
}

// pos(l) with l(d_g) = 1 and l(d_h) <= 0 for every other class h, met over h.
Term class_witness(const std::vector<Vec>& dirs, std::size_t g) {
  const Vec& dg = dirs[g];
  const std::size_t k = dg.size();
  std::size_t lead = 0;
  while (dg[lead].is_zero()) ++lead;
  Vec base(k);
  base[lead] = Rational(1) / dg[lead];
  std::optional<Term> out;
  for (std::size_t h = 0; h < dirs.size(); ++h) {
    if (h == g) continue;
    const Vec& dh = dirs[h];
    Vec l = base;
    if (dh != scale(Rational(-1), dg)) {
      bool found = false;
      for (std::size_t p = 0; p < k && !found; ++p)
        for (std::size_t q = p + 1; q < k && !found; ++q) {
          Rational det = dg[p] * dh[q] - dg[q] * dh[p];
          if (det.is_zero()) continue;
          l = Vec(k);
          l[p] = dh[q] / det;
          l[q] = -dh[p] / det;
          found = true;
        }
      if (!found) throw InvariantError("parallel profiles in distinct classes");
    }
    Term t = pos(linear_term(l));
    out = out ? meet(*out, t) : t;
  }
  return out ? *out : pos(linear_term(base));
}

Rational tuple_gap(const FiniteLattice& common, const LatticeMap& phi1, const std::vector<Vec>& a,
                   const LatticeMap& phi2, const std::vector<Vec>& b) {
  Rational v;
  for (std::size_t i = 0; i < a.size(); ++i) v = max(v, common.norm(sub(phi1.apply(a[i]), phi2.apply(b[i]))));
  return v;
}

std::vector<std::vector<std::size_t>> norm_preserving_permutations(const FiniteLattice& lat, std::size_t limit) {
  const std::size_t n = lat.dim();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  std::size_t tried = 0;
  do {
    if (tried++ >= limit) break;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) ok = lat.atom_norm(j) == lat.atom_norm(perm[j]);
    if (!ok) continue;
    std::vector<Vec> cols(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) cols[j][perm[j]] = 1;
    if (certify_embedding(LatticeMap(lat, lat, cols)).isometric()) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Atom permutations B -> A, scaled to match atom norms, that are isometric.
void permutation_candidates(const GeneratedTuple& a, const GeneratedTuple& b, std::size_t limit,
                            std::vector<UpperWitness>& out) {
  const std::size_t n = a.lattice.dim();
  if (n == 0 || n != b.lattice.dim()) return;
  const FiniteLattice la = with_functionals(a.lattice), lb = with_functionals(b.lattice);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const LatticeMap id = identity_map(a.lattice);
  std::size_t tried = 0;
  do {
    if (tried++ >= limit) break;
    std::vector<Vec> cols(n, Vec(n));
    for (std::size_t j = 0; j < n; ++j) cols[j][perm[j]] = lb.atom_norm(j) / la.atom_norm(perm[j]);
    LatticeMap t(b.lattice, a.lattice, cols);
    bool plausible = true;
    for (std::size_t j = 0; j < n && plausible; ++j)
      for (std::size_t k = j + 1; k < n && plausible; ++k) {
        Vec x(n);
        x[j] = 1;
        x[k] = 1;
        plausible = la.norm(t.apply(x)) == lb.norm(x);
      }
    if (!plausible || !certify_embedding(t).isometric()) continue;
    out.push_back({a.lattice, id, t, tuple_gap(a.lattice, id, a.tuple, t, b.tuple), "permutation"});
  } while (std::next_permutation(perm.begin(), perm.end()));
}

// Evaluates the atom witnesses of <x> on y, snaps the result to a disjoint
// family in the lattice of y and amalgamates over <x> when that is isometric.
std::optional<PushoutResult> snap_amalgam(const GeneratedTuple& x, const GeneratedTuple& y) {
  GeneratedSublattice src = generated_sublattice(x.lattice, x.tuple);
  if (src.inclusion.dom().dim() == 0) return std::nullopt;
  std::vector<Vec> approx;
  for (const auto& t : src.witness) {
    approx.push_back(eval(t, y.tuple));
    if (is_zero(approx.back())) return std::nullopt;
  }
  try {
    Snap s = snap_sublattice(y.lattice, approx);
    LatticeMap t(src.inclusion.dom(), y.lattice, s.map.columns());
    if (!certify_embedding(t).isometric()) return std::nullopt;
    return amalgamate(src.inclusion, t, Rational(1), AmalgamRoute::Direct);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }
}

}  // namespace

void validate(const GeneratedTuple& g) {
  for (const auto& v : g.tuple)
    if (v.size() != g.lattice.dim()) throw StructuralError("tuple entry does not live in the lattice");
  if (!g.witness) return;
  if (g.witness->size() != g.lattice.dim()) throw StructuralError("witness count differs from the dimension");
  for (std::size_t t = 0; t < g.witness->size(); ++t) {
    Vec atom(g.lattice.dim());
    atom[t] = 1;
    if (eval((*g.witness)[t], g.tuple) != atom)
      throw InvariantError("witness term " + (*g.witness)[t].str() + " does not give atom " + std::to_string(t));
  }
}

GeneratedTuple GeneratedSublattice::as_tuple() const { return {inclusion.dom(), coords, witness}; }

GeneratedSublattice generated_sublattice(const FiniteLattice& ambient, const std::vector<Vec>& tuple) {
  for (const auto& v : tuple)
    if (v.size() != ambient.dim()) throw StructuralError("tuple entry does not live in the lattice");
  std::vector<Vec> dirs, atoms;
  for (std::size_t j = 0; j < ambient.dim(); ++j) {
    auto [d, mass] = profile(tuple, j);
    if (mass.is_zero()) continue;
    auto it = std::find(dirs.begin(), dirs.end(), d);
    std::size_t t = std::size_t(it - dirs.begin());
    if (it == dirs.end()) {
      dirs.push_back(d);
      atoms.emplace_back(ambient.dim());
    }
    atoms[t][j] = mass;
  }
  GeneratedSublattice out{induced_inclusion(ambient, atoms, "<" + ambient.label() + ">"),
                          std::vector<Vec>(tuple.size(), Vec(dirs.size())), {}};
  for (std::size_t i = 0; i < tuple.size(); ++i)
    for (std::size_t t = 0; t < dirs.size(); ++t) out.coords[i][t] = dirs[t][i];
  for (std::size_t t = 0; t < dirs.size(); ++t) {
    out.witness.push_back(class_witness(dirs, t));
    if (eval(out.witness.back(), tuple) != atoms[t]) throw InvariantError("atom witness does not evaluate to its atom");
  }
  return out;
}

Correspondence tuple_correspondence(const FiniteLattice& a_lattice, const std::vector<Vec>& a,
                                    const FiniteLattice& b_lattice, const std::vector<Vec>& b) {
  if (a.size() != b.size()) throw StructuralError("tuples of different lengths");
  for (const auto& v : b)
    if (v.size() != b_lattice.dim()) throw StructuralError("tuple entry does not live in the lattice");
  Correspondence out{generated_sublattice(a_lattice, a), std::nullopt, {}};
  const FiniteLattice& sub = out.source.inclusion.dom();
  std::vector<Vec> dirs(sub.dim());
  for (std::size_t t = 0; t < sub.dim(); ++t)
    for (std::size_t i = 0; i < a.size(); ++i) dirs[t].push_back(out.source.coords[i][t]);
  std::vector<Vec> cols(sub.dim(), Vec(b_lattice.dim()));
  for (std::size_t j = 0; j < b_lattice.dim(); ++j) {
    auto [d, mass] = profile(b, j);
    if (mass.is_zero()) continue;
    auto it = std::find(dirs.begin(), dirs.end(), d);
    if (it == dirs.end()) {
      out.diagnosis = "coordinate " + std::to_string(j) + " of the target tuple has profile " + to_string(d) +
                      " outside the generated sublattice";
      return out;
    }
    cols[std::size_t(it - dirs.begin())][j] = mass;
  }
  for (std::size_t t = 0; t < cols.size(); ++t)
    if (is_zero(cols[t])) {
      out.diagnosis = "atom " + std::to_string(t) + " of the generated sublattice maps to 0";
      return out;
    }
  LatticeMap map(sub, b_lattice, std::move(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (map.apply(out.source.coords[i]) != b[i]) throw InvariantError("correspondence misses a tuple entry");
  if (sub.dim() > 0) {
    EmbeddingCertificate cert = certify_embedding(map);
    if (!cert.isometric()) {
      out.diagnosis = "correspondence is a " + cert.constant().str() + "-embedding, not isometric";
      return out;
    }
  }
  out.map = std::move(map);
  return out;
}

UpperWitness dk_upper(const GeneratedTuple& a, const GeneratedTuple& b, const SearchBudget& budget) {
  if (a.tuple.size() != b.tuple.size()) throw PreconditionError("tuples of different lengths",
                                                                std::to_string(a.tuple.size()) + " vs " +
                                                                    std::to_string(b.tuple.size()));
  validate(a);
  validate(b);
  std::vector<UpperWitness> cands;
  {
    FiniteLattice s = direct_sum_infty(a.lattice, b.lattice);
    auto [i1, i2] = direct_sum_injections(a.lattice, b.lattice, s);
    cands.push_back({s, i1, i2, tuple_gap(s, i1, a.tuple, i2, b.tuple), "sup-sum"});
  }
  permutation_candidates(a, b, budget.permutations, cands);
  if (budget.snap && !a.tuple.empty()) {
    if (auto p = snap_amalgam(a, b))
      cands.push_back({p->g, p->g1, p->g2, tuple_gap(p->g, p->g1, a.tuple, p->g2, b.tuple), "snap"});
    if (auto p = snap_amalgam(b, a))
      cands.push_back({p->g, p->g2, p->g1, tuple_gap(p->g, p->g2, a.tuple, p->g1, b.tuple), "snap-reverse"});
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < cands.size(); ++k)
    if (cands[k].value < cands[best].value) best = k;
  return cands[best];
}

LowerWitness dk_lower(const GeneratedTuple& a, const GeneratedTuple& b, std::size_t depth, std::size_t term_limit) {
  if (a.tuple.size() != b.tuple.size()) throw PreconditionError("tuples of different lengths",
                                                                std::to_string(a.tuple.size()) + " vs " +
                                                                    std::to_string(b.tuple.size()));
  LowerWitness best;
  if (a.tuple.empty()) return best;
  const FiniteLattice la = with_functionals(a.lattice), lb = with_functionals(b.lattice);
  for (const Term& t : enumerate_terms(a.tuple.size(), depth, term_limit)) {
    Rational lip = lipschitz(t);
    if (lip.is_zero()) continue;
    Rational na = la.norm(eval(t, a.tuple)), nb = lb.norm(eval(t, b.tuple));
    Rational v = fbl::abs(na - nb) / lip;
    if (!best.term || best.value < v) best = {t, na, nb, lip, v};
  }
  return best;
}

DistanceBound distance(const GeneratedTuple& a, const GeneratedTuple& b, const SearchBudget& budget,
                       std::size_t depth) {
  DistanceBound d{dk_lower(a, b, depth), dk_upper(a, b, budget)};
  if (d.upper.value < d.lower.value) throw InvariantError("distance lower bound exceeds the upper bound");
  return d;
}

Rational verify_upper(const UpperWitness& w, const GeneratedTuple& a, const GeneratedTuple& b) {
  if (w.phi1.dom().dim() != a.lattice.dim() || w.phi2.dom().dim() != b.lattice.dim())
    throw StructuralError("witness maps do not start at the tuple lattices");
  if (a.lattice.dim() > 0 && !certify_embedding(w.phi1).isometric())
    throw InvariantError("first witness map is not isometric");
  if (b.lattice.dim() > 0 && !certify_embedding(w.phi2).isometric())
    throw InvariantError("second witness map is not isometric");
  Rational v = tuple_gap(w.common, w.phi1, a.tuple, w.phi2, b.tuple);
  if (v != w.value) throw InvariantError("witness value " + w.value.str() + " recomputes to " + v.str());
  return v;
}

UpperWitness compose_witnesses(const GeneratedTuple& a, const UpperWitness& w_ab, const GeneratedTuple& b,
                               const UpperWitness& w_bc, const GeneratedTuple& c) {
  if (w_ab.phi2.dom().dim() != b.lattice.dim() || w_bc.phi1.dom().dim() != b.lattice.dim())
    throw StructuralError("witnesses do not share the middle lattice");
  GeneratedSublattice e = generated_sublattice(b.lattice, b.tuple);
  LatticeMap l1 = compose(w_ab.phi2, e.inclusion), l2 = compose(w_bc.phi1, e.inclusion);
  PushoutResult p = amalgamate(l1, l2, Rational(1), AmalgamRoute::Direct);
  LatticeMap phi1 = compose(p.g1, w_ab.phi1), phi2 = compose(p.g2, w_bc.phi2);
  UpperWitness out{p.g, phi1, phi2, tuple_gap(p.g, phi1, a.tuple, phi2, c.tuple), "composed"};
  if (w_ab.value + w_bc.value < out.value) throw InvariantError("composed witness breaks the triangle bound");
  return out;
}

ChainState start_chain(std::vector<FiniteLattice> catalogue, std::size_t first, std::uint64_t seed,
                       std::size_t max_dim) {
  if (catalogue.empty()) throw PreconditionError("empty catalogue", "size 0");
  if (first >= catalogue.size()) throw StructuralError("first lattice outside the catalogue");
  ChainState s;
  for (auto& l : catalogue) {
    if (l.dim() == 0) throw PreconditionError("catalogue lattices must be nonzero", l.label());
    s.catalogue.push_back(complete_forms(l));
  }
  s.stages.push_back(s.catalogue[first].with_label("A1"));
  s.to_last.push_back(identity_map(s.stages[0]));
  s.copies.push_back({first, s.to_last[0].columns()});
  s.seed = seed;
  s.max_dim = max_dim;
  return s;
}

ChainState chain_step(ChainState state) {
  if (state.queue.empty()) throw PreconditionError("chain step with an empty task queue", "queue size 0");
  std::size_t pick = 0;
  for (std::size_t k = 1; k < state.queue.size(); ++k)
    if (state.queue[pick].priority < state.queue[k].priority) pick = k;
  ChainTask task = std::move(state.queue[pick]);
  state.queue.erase(state.queue.begin() + long(pick));
  const std::size_t last = state.stages.size() - 1;
  if (task.stage > last) throw StructuralError("task refers to stage " + std::to_string(task.stage + 1));
  for (const auto& v : task.source)
    if (v.size() != state.stages[task.stage].dim()) throw StructuralError("task source does not live in its stage");
  const FiniteLattice& top = state.stages[last];
  Correspondence corr =
      tuple_correspondence(top, apply_all(state.to_last[task.stage], task.source), task.target, task.target_tuple);
  if (!corr.map) {
    state.records.push_back({task.origin, false, corr.diagnosis, top.dim(), std::nullopt});
    return state;
  }
  PushoutResult p = amalgamate(corr.source.inclusion, *corr.map, Rational(1), AmalgamRoute::Direct);
  FiniteLattice next = complete_forms(p.g).with_label("A" + std::to_string(state.stages.size() + 1));
  LatticeMap conn = p.g1.with_cod(next), emb = p.g2.with_cod(next);
  if (!p.cert1.isometric() || !p.cert2.isometric()) throw InvariantError("chain amalgam is not isometric");
  for (auto& m : state.to_last) m = compose(conn, m);
  for (auto& c : state.copies) c.atoms = apply_all(conn, c.atoms);
  if (task.catalogue_index) state.copies.push_back({*task.catalogue_index, emb.columns()});
  state.stages.push_back(next);
  state.connecting.push_back(conn);
  state.to_last.push_back(identity_map(next));
  state.records.push_back({task.origin, true, {}, next.dim(), emb});
  return state;
}

namespace {

Vec sparse_positive(Rng& rng, std::size_t dim) {
  Vec v(dim);
  std::size_t first = std::size_t(rng.below(dim));
  v[first] = rng.rational(1, 2, 4);
  if (dim > 1 && rng.coin()) {
    std::size_t second = std::size_t(rng.below(dim - 1));
    if (second >= first) ++second;
    v[second] = rng.rational(1, 2, 4);
  }
  return v;
}

ChainTask generate_task(const ChainState& s, const std::vector<std::vector<std::vector<std::size_t>>>& autos,
                        std::size_t step) {
  Rng rng(s.seed, step);
  const std::size_t last = s.stages.size() - 1;
  const FiniteLattice& top = s.stages[last];
  const bool grow = top.dim() < s.max_dim;
  const std::uint64_t kind = grow ? rng.below(3) : 2;
  ChainTask t;
  t.stage = last;
  if (kind == 0) {
    std::size_t idx = std::size_t(rng.below(s.catalogue.size()));
    t.target = s.catalogue[idx];
    t.origin = "joint";
    t.catalogue_index = idx;
  } else if (kind == 1) {
    std::size_t idx = std::size_t(rng.below(s.catalogue.size()));
    const FiniteLattice& b = s.catalogue[idx];
    Vec a = sparse_positive(rng, top.dim()), y = sparse_positive(rng, b.dim());
    t.source = {a};
    t.target = b;
    t.target_tuple = {scale(top.norm(a) / b.norm(y), y)};
    t.origin = "split";
    t.catalogue_index = idx;
  } else {
    const CatalogueCopy& c = s.copies[std::size_t(rng.below(s.copies.size()))];
    const FiniteLattice& b = s.catalogue[c.catalogue_index];
    const auto& perms = autos[c.catalogue_index];
    const auto& perm = perms[std::size_t(rng.below(perms.size()))];
    const std::size_t m = b.dim();
    std::uint64_t mask = grow ? 1 + rng.below((std::uint64_t(1) << m) - 1) : (std::uint64_t(1) << m) - 1;
    for (std::size_t j = 0; j < m; ++j)
      if (mask >> j & 1) {
        t.source.push_back(c.atoms[j]);
        Vec e(m);
        e[perm[j]] = 1;
        t.target_tuple.push_back(std::move(e));
      }
    t.target = b;
    t.origin = "realize";
    t.catalogue_index = c.catalogue_index;
  }
  return t;
}

}  // namespace

ChainState extend_chain(ChainState s, std::size_t steps) {
  std::vector<std::vector<std::vector<std::size_t>>> autos;
  for (const auto& l : s.catalogue) {
    if (l.dim() > 6) throw PreconditionError("catalogue lattice too large for automorphism search", l.label());
    autos.push_back(norm_preserving_permutations(l, 720));
  }
  for (std::size_t k = 0; k < steps; ++k) {
    if (s.queue.empty()) s.queue.push_back(generate_task(s, autos, s.records.size()));
    s = chain_step(std::move(s));
  }
  return s;
}

ChainState build_chain(std::vector<FiniteLattice> catalogue, std::size_t steps, std::uint64_t seed,
                       std::size_t max_dim) {
  return extend_chain(start_chain(std::move(catalogue), 0, seed, max_dim), steps);
}

std::string audit_chain(const ChainState& s) {
  if (s.stages.empty()) return "no stages";
  if (s.connecting.size() + 1 != s.stages.size() || s.to_last.size() != s.stages.size())
    return "stage and map counts disagree";
  for (std::size_t n = 0; n < s.connecting.size(); ++n) {
    if (!certify_embedding(s.connecting[n]).isometric())
      return "connecting map " + std::to_string(n + 1) + " is not isometric";
    if (compose(s.to_last[n + 1], s.connecting[n]) != s.to_last[n])
      return "cached composite from stage " + std::to_string(n + 1) + " is inconsistent";
  }
  if (s.to_last.back() != identity_map(s.stages.back())) return "last composite is not the identity";
  for (std::size_t n = 0; n < s.stages.size(); ++n) {
    EquivalenceAudit a = equivalences_audit(s.stages[n]);
    if (!a.passed()) return "stage " + std::to_string(n + 1) + ": " + a.failure;
  }
  for (const auto& c : s.copies)
    if (!certify_embedding(LatticeMap(s.catalogue[c.catalogue_index], s.stages.back(), c.atoms)).isometric())
      return "a recorded catalogue copy is not isometric";
  return {};
}

ProbeReport homogeneity_probe(const ChainState& state, std::size_t stage_a, const std::vector<Vec>& a,
                              std::size_t stage_b, const std::vector<Vec>& b, const Rational& eps,
                              const SearchBudget& budget) {
  const std::size_t last = state.stages.size() - 1;
  if (stage_a > last || stage_b > last) throw StructuralError("probe refers to a missing stage");
  if (a.size() != b.size()) throw PreconditionError("tuples of different lengths",
                                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  ProbeReport r;
  r.state = state;
  const std::vector<Vec> a_top = apply_all(state.to_last[stage_a], a), b_top = apply_all(state.to_last[stage_b], b);
  if (a_top == b_top) {
    r.success = true;
    r.realizing = state.to_last[stage_a];
    r.upper = Rational(0);
    return r;
  }
  ChainTask task{stage_b, b, state.stages[stage_a], a, 0, "probe", std::nullopt};
  std::optional<LatticeMap> pre;  // stage of a -> target of the task
  Correspondence direct = tuple_correspondence(state.stages[last], b_top, state.stages[stage_a], a);
  if (direct.map) {
    pre = identity_map(state.stages[stage_a]);
    r.upper = Rational(0);
  } else {
    UpperWitness w = dk_upper({state.stages[stage_a], a, std::nullopt}, {state.stages[stage_b], b, std::nullopt},
                              budget);
    r.upper = w.value;
    if (!(w.value < eps)) {
      r.refused = true;
      r.reason = "best upper certificate " + w.value.str() + " (" + w.strategy + ") is not below " + eps.str();
      r.lower = dk_lower({state.stages[stage_a], a, std::nullopt}, {state.stages[stage_b], b, std::nullopt});
      return r;
    }
    task.target = w.common;
    task.target_tuple = apply_all(w.phi2, b);
    pre = w.phi1;
  }
  for (const auto& t : r.state.queue) task.priority = std::max(task.priority, t.priority + 1);
  r.state.queue.push_back(task);
  r.state = chain_step(std::move(r.state));
  r.steps = 1;
  const StepRecord& rec = r.state.records.back();
  if (!rec.accepted) {
    r.reason = "targeted task rejected: " + rec.diagnosis;
    return r;
  }
  r.realizing = compose(*rec.target_embedding, *pre);
  const FiniteLattice& top = r.state.stages.back();
  const std::vector<Vec> b_new = apply_all(r.state.to_last[stage_b], b);
  for (std::size_t i = 0; i < a.size(); ++i) r.distance = max(r.distance, top.norm(sub(r.realizing->apply(a[i]), b_new[i])));
  r.success = r.distance < eps || r.distance.is_zero();
  if (!r.success) r.reason = "achieved distance " + r.distance.str() + " is not below " + eps.str();
  return r;
}

}  // namespace fbl
