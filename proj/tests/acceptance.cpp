// Acceptance gate: ten exact criteria on seeded random instances. Prints one
// PASS or FAIL line per criterion and exits nonzero if any fails.

#include <chrono>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/amalgam.hpp"
#include "fbl/branching.hpp"
#include "fbl/document.hpp"
#include "fbl/embeddings.hpp"
#include "fbl/fraisse.hpp"
#include "fbl/instances.hpp"
#include "fbl/lattices.hpp"
#include "oracles.hpp"

using namespace fbl;

namespace {

// Collects the first few failures of a criterion.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  void note(const std::string& s) { notes_ = s; }
  bool passed() const { return failed_ == 0 && checks_ > 0; }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ << " checks";
    if (!notes_.empty()) out << ", " << notes_;
    if (failed_ > 0) {
      out << ", " << failed_ << " failed:";
      for (const auto& f : failures_) out << " [" << f << "]";
    }
    return out.str();
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string at(const char* what, int k) { return std::string(what) + " at instance " + std::to_string(k); }

// Legs shared by criteria 1-3.
struct ScaledLegs {
  LatticeMap f1, f2;
  Rational c;
};
std::vector<ScaledLegs> isometric_instances, scaled_instances;

void criterion_1(Verdict& v) {
  Rng rng(101);
  for (int k = 0; k < 200; ++k) {
    LegPair legs = random_isometric_legs(rng, 3, 3, 4);
    v.require(certify_embedding(legs.f1).isometric() && certify_embedding(legs.f2).isometric(), at("legs not isometric", k));
    PushoutResult p = pushout(legs.f1, legs.f2, Rational(1));
    v.require(compose(p.g1, legs.f1) == compose(p.g2, legs.f2), at("square does not commute", k));
    v.require(p.cert1.c_upper == 1 && p.cert1.c_lower == Rational(1), at("g1 does not certify (1,1)", k));
    v.require(p.cert2.c_upper == 1 && p.cert2.c_lower == Rational(1), at("g2 does not certify (1,1)", k));
    // Recertify independently of the stored certificates.
    v.require(certify_embedding(p.g1).isometric() && certify_embedding(p.g2).isometric(), at("recertification", k));
    isometric_instances.push_back({legs.f1, legs.f2, Rational(1)});
  }
}

void criterion_2(Verdict& v) {
  Rng rng(102);
  for (int k = 0; k < 100; ++k) {
    const Rational c = k % 2 ? Rational(5, 4) : Rational(3, 2);
    LegPair legs = random_isometric_legs(rng, 3, 3, 4);
    LatticeMap f1 = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), c));
    LatticeMap f2 = scale_columns(legs.f2, random_factors(rng, legs.e.dim(), c));
    v.require(certify_embedding(f1).within(c) && certify_embedding(f2).within(c), at("legs exceed c", k));
    PushoutResult p = pushout(f1, f2, c);
    v.require(compose(p.g1, f1) == compose(p.g2, f2), at("square does not commute", k));
    v.require(certify_embedding(p.raw_g1).within(c * c) && certify_embedding(p.raw_g2).within(c * c),
              at("raw map exceeds c^2", k));
    v.require(certify_embedding(p.g1).within(c) && certify_embedding(p.g2).within(c), at("scaled map exceeds c", k));
    scaled_instances.push_back({f1, f2, c});
  }
}

void criterion_3(Verdict& v) {
  int k = 0;
  for (const auto& s : isometric_instances) {
    RowDomination rd = check_row_domination(induced_matrix(s.f1), induced_matrix(s.f2), s.c, true);
    v.require(rd.ok, at("isometric rows not dominated", k));
    v.require(rd.same_hull && *rd.same_hull, at("isometric row hulls differ", k));
    bool gauges = true;
    for (const auto& g : rd.forward) gauges = gauges && g && *g <= 1;
    for (const auto& g : rd.backward) gauges = gauges && g && *g <= 1;
    v.require(gauges, at("isometric gauge above 1", k));
    ++k;
  }
  for (const auto& s : scaled_instances) {
    RowDomination rd = check_row_domination(induced_matrix(s.f1), induced_matrix(s.f2), s.c, false);
    v.require(rd.ok, at("scaled rows not dominated", k));
    bool gauges = true;
    for (const auto& g : rd.forward) gauges = gauges && g && *g <= s.c * s.c;
    for (const auto& g : rd.backward) gauges = gauges && g && *g <= s.c * s.c;
    v.require(gauges, at("scaled gauge above c^2", k));
    ++k;
  }
}

std::vector<FiniteLattice> criterion_lattices() {
  Rng rng(104);
  std::vector<FiniteLattice> out;
  for (int k = 0; k < 100; ++k) out.push_back(random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin()));
  return out;
}

// Extreme points of the unit ball by trying every basis of tight signed rows.
std::set<Vec> oracle_extreme_points(const FiniteLattice& lat) {
  FiniteLattice c = complete_forms(lat);
  std::vector<Vec> rows;
  Vec rhs;
  for (const auto& f : c.functionals()) {
    const std::size_t n = f.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      Vec r = f;
      for (std::size_t j = 0; j < n; ++j)
        if (mask >> j & 1) r[j] = -r[j];
      rows.push_back(r);
      rhs.push_back(1);
    }
  }
  std::vector<Vec> vs = oracle::brute_force_vertices(rows, rhs);
  return {vs.begin(), vs.end()};
}

// Every sign pattern on the support of every order extreme point.
std::set<Vec> signed_oeps(const FiniteLattice& lat) {
  std::set<Vec> out;
  for (const Vec& p : canonical_oeps(lat)) {
    std::vector<std::size_t> supp;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (!p[j].is_zero()) supp.push_back(j);
    for (std::size_t mask = 0; mask < (std::size_t(1) << supp.size()); ++mask) {
      Vec q = p;
      for (std::size_t b = 0; b < supp.size(); ++b)
        if (mask >> b & 1) q[supp[b]] = -q[supp[b]];
      out.insert(q);
    }
  }
  return out;
}

void criterion_4(Verdict& v, const std::vector<FiniteLattice>& lats) {
  int k = 0;
  for (const auto& l : lats) {
    EquivalenceAudit a = equivalences_audit(l);
    v.require(a.passed(), at(("audit: " + a.failure).c_str(), k));
    v.require(a.oep_count > 0 && a.dual_oep_count > 0, at("no order extreme points", k));
    const std::set<Vec> eps = oracle_extreme_points(l);
    v.require(eps == signed_oeps(l), at("extreme points differ from signed order extreme points", k));
    v.require(eps.size() == a.ep_count, at("extreme point count", k));
    EmbeddingCertificate c = certify_embedding(embed_into_grid(l));
    v.require(c.c_upper == 1 && c.c_lower == Rational(1), at("grid embedding does not certify (1,1)", k));
    ++k;
  }
}

void criterion_5(Verdict& v, const std::vector<FiniteLattice>& lats) {
  Rng rng(105);
  int k = 0;
  std::size_t bad = 0;
  for (const auto& l : lats) {
    LatticeMap f = embed_into_grid(l);
    for (int t = 0; t < 1000; ++t) {
      Vec x(l.dim());
      for (auto& e : x) e = rng.rational(-4, 4, 12);
      if (l.norm(x) != f.cod().norm(f.apply(x))) ++bad;
    }
    v.require(bad == 0, at("norm differs on a random vector", k));
    ++k;
  }
}

void criterion_6(Verdict& v) {
  Rng rng(106);
  const std::vector<Rational> cs{Rational(5, 4), Rational(3, 2), Rational(2)};
  std::size_t general = 0;
  for (int k = 0; k < 50; ++k) {
    const Rational c = cs[std::size_t(k) % cs.size()];
    LegPair legs = random_isometric_legs(rng, 3, 3, 4);
    LatticeMap f = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), c));
    v.require(certify_embedding(f).within(c), at("input is not a c-embedding", k));
    Renorming r = renorm_for_isometry(f, c);
    general += r.which == RenormCase::General;
    EmbeddingCertificate cert = certify_embedding(r.map);
    v.require(cert.c_upper == 1 && cert.c_lower == Rational(1), at("renormed map does not certify (1,1)", k));
    const FiniteLattice& x = f.cod();
    bool ratios = true;
    for (const FiniteLattice& lat : {complete_forms(x), complete_forms(r.lattice)})
      for (const Vec& p : lat.ball_generators()) {
        const Rational q = x.norm(p) / r.lattice.norm(p);
        ratios = ratios && Rational(1) / c <= q && q <= c;
      }
    v.require(ratios, at("vertex norm ratio outside [1/c, c]", k));
  }
  v.note(std::to_string(general) + " general renormings");
}

void criterion_7(Verdict& v) {
  Rng rng(107);
  for (int k = 0; k < 50; ++k) {
    const Rational eps = k % 2 ? Rational(1, 10) : Rational(1, 20);
    LegPair legs = random_isometric_legs(rng, 2, 2, 3);
    LatticeMap f = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), 1 + eps));
    IsometrizedPair p = isometrize_pair(f, eps);
    v.require(certify_embedding(p.g).isometric() && certify_embedding(p.h).isometric(), at("g or h not isometric", k));
    // ||g - h f|| recomputed from the matrices.
    LatticeMap hf = compose(p.h, f);
    std::vector<Vec> diff = p.g.columns();
    for (std::size_t i = 0; i < diff.size(); ++i)
      for (std::size_t r = 0; r < diff[i].size(); ++r) diff[i][r] -= hf.columns()[i][r];
    const Rational defect = operator_norm(LatticeMap(p.g.dom(), p.g.cod(), diff));
    v.require(defect <= eps, at("||g - h f|| exceeds eps", k));
    v.require(defect == p.defect, at("reported defect differs from the operator norm", k));

    LegPair near = random_isometric_legs(rng, 2, 2, 2);
    LatticeMap f1 = scale_columns(near.f1, random_factors(rng, near.e.dim(), 1 + eps));
    LatticeMap f2 = scale_columns(near.f2, random_factors(rng, near.e.dim(), 1 + eps));
    NearAmalgam n = near_amalgamate(f1, f2, eps);
    v.require(certify_embedding(n.g1).isometric() && certify_embedding(n.g2).isometric(), at("near legs not isometric", k));
    LatticeMap a = compose(n.g1, f1), b = compose(n.g2, f2);
    std::vector<Vec> gap = a.columns();
    for (std::size_t i = 0; i < gap.size(); ++i)
      for (std::size_t r = 0; r < gap[i].size(); ++r) gap[i][r] -= b.columns()[i][r];
    const Rational bound = operator_norm(LatticeMap(f1.dom(), n.h, gap));
    v.require(bound <= 2 * eps, at("||g1 f1 - g2 f2|| exceeds 2 eps", k));
    v.require(bound <= n.bound, at("reported near bound below the operator norm", k));
  }
}

void criterion_8(Verdict& v) {
  BranchTree t = build_dyadic_tree(2);
  v.require(check_tree(t).empty(), "dyadic tree malformed");
  v.require(t.levels.back().size() == 16, "dyadic tree does not have 16 leaves");
  TwoGenerator g = two_generator(t, 2);
  v.require(g.recoverers.size() == 16, "recoverer count");
  for (std::size_t i = 0; i < g.recoverers.size() && i < t.levels.back().size(); ++i) {
    const Vec image = eval(g.recoverers[i], {g.u, g.v});
    const Vec& leaf = t.levels.back()[i].element;
    Vec scaled = leaf;
    for (auto& e : scaled) e *= g.multiples[i];
    v.require(g.multiples[i] > 0, at("multiple not positive", int(i)));
    v.require(image == scaled, at("recoverer does not reproduce its leaf", int(i)));
  }
  v.require(check_reconstruction(t, 2, g).empty(), "library reconstruction check");
}

const std::vector<FiniteLattice> chain_catalogue = {FiniteLattice::l1(2), FiniteLattice::linf(2),
                                                    FiniteLattice::grid(GridShape({2, 2}))};

void criterion_9(Verdict& v) {
  ChainState s = build_chain(chain_catalogue, 30, 7, 24);
  v.require(s.records.size() == 30, "step count");
  v.require(audit_chain(s).empty(), "chain audit: " + audit_chain(s));
  for (std::size_t n = 0; n < s.stages.size(); ++n) {
    EquivalenceAudit a = equivalences_audit(s.stages[n], 0);
    v.require(a.passed(), "stage " + std::to_string(n) + " audit: " + a.failure);
  }
  for (std::size_t n = 0; n < s.connecting.size(); ++n) {
    EmbeddingCertificate c = certify_embedding(s.connecting[n]);
    v.require(c.c_upper == 1 && c.c_lower == Rational(1), "connecting map " + std::to_string(n) + " not (1,1)");
  }
  const std::string text = chain_document(s);
  v.require(chain_document(build_chain(chain_catalogue, 30, 7, 24)) == text, "rerun is not byte-identical");
  v.require(chain_document(parse_chain_document(text)) == text, "chain document does not round-trip");

  ChainState two = start_chain({FiniteLattice::l1(2)}, 0, 7, 24);
  two.queue.push_back({0, {}, FiniteLattice::l1(2), {}, 0, "joint", 0});
  two = chain_step(std::move(two));
  v.require(two.copies.size() == 2, "scripted chain has two copies of l1^2");
  if (two.copies.size() == 2) {
    const std::vector<Vec>& a = two.copies[0].atoms;
    const std::vector<Vec>& b = two.copies[1].atoms;
    ProbeReport r = homogeneity_probe(two, 1, a, 1, b, Rational(1, 10));
    v.require(r.success && !r.refused, "probe did not succeed: " + r.reason);
    v.require(r.distance == 0, "probe distance is not 0");
    if (r.realizing) {
      bool lands = true;
      for (std::size_t i = 0; i < a.size(); ++i) lands = lands && r.realizing->apply(a[i]) == r.state.to_last[1].apply(b[i]);
      v.require(lands, "realizing map does not carry a onto b");
      v.require(certify_embedding(*r.realizing).isometric(), "realizing map not isometric");
    }
    v.require(audit_chain(r.state).empty(), "probed chain audit");
  }
  std::size_t dim = s.stages.back().dim();
  v.note("last stage dimension " + std::to_string(dim));
}

GeneratedTuple random_tuple_in(Rng& rng, std::size_t length) {
  FiniteLattice l = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
  return {l, random_tuple(rng, l.dim(), length), std::nullopt};
}

void criterion_10(Verdict& v) {
  Rng rng(110);
  Rational widest(0);
  for (int k = 0; k < 100; ++k) {
    const std::size_t length = std::size_t(rng.range(1, 2));
    GeneratedTuple a = random_tuple_in(rng, length), b = random_tuple_in(rng, length);
    DistanceBound d = distance(a, b);
    v.require(d.lower.value <= d.upper.value, at("lower bound above upper bound", k));
    v.require(verify_upper(d.upper, a, b) == d.upper.value, at("upper witness does not re-verify", k));
    v.require(dk_upper(a, a).value == 0, at("d(a, a) is not 0", k));
    if (d.upper.value - d.lower.value > widest) widest = d.upper.value - d.lower.value;
    if (k % 4 == 0) {
      GeneratedTuple c = random_tuple_in(rng, length);
      UpperWitness ab = dk_upper(a, b), bc = dk_upper(b, c);
      UpperWitness ac = compose_witnesses(a, ab, b, bc, c);
      v.require(ac.value <= ab.value + bc.value, at("composed witness exceeds the sum of its parts", k));
      v.require(verify_upper(ac, a, c) == ac.value, at("composed witness does not re-verify", k));
    }
  }
  v.note("widest interval " + widest.str());
}

}  // namespace

int main() {
  const std::vector<FiniteLattice> lats = criterion_lattices();
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"isometric pushouts commute and certify (1,1)", criterion_1},
      {"scaled pushouts certify raw <= c^2 and scaled <= c", criterion_2},
      {"leg matrices dominate each other", criterion_3},
      {"four equivalent descriptions agree", [&](Verdict& v) { criterion_4(v, lats); }},
      {"grid embeddings preserve norms", [&](Verdict& v) { criterion_5(v, lats); }},
      {"renormings are isometric within [1/c, c]", criterion_6},
      {"almost isometries split within eps", criterion_7},
      {"two generators recover the dyadic leaves", criterion_8},
      {"chain construction audits and probes", criterion_9},
      {"distance intervals are sound", criterion_10},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.passed() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << v.summary() << ", " << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s)" << std::endl;
    all = all && v.passed();
  }
  return all ? 0 : 1;
}
