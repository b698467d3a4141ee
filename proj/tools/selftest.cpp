#include "selftest.hpp"

#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "fbl/amalgam.hpp"
#include "fbl/branching.hpp"
#include "fbl/document.hpp"
#include "fbl/embeddings.hpp"
#include "fbl/fraisse.hpp"
#include "fbl/instances.hpp"

using namespace fbl;

namespace {

// Each check returns an empty string on success, else the failure.
using Check = std::function<std::string()>;

std::string isometric_pushouts() {
  Rng rng(1);
  for (int k = 0; k < 10; ++k) {
    LegPair legs = random_isometric_legs(rng, 2, 2, 3);
    PushoutResult p = amalgamate(legs.f1, legs.f2, Rational(1));
    if (!(compose(p.g1, legs.f1) == compose(p.g2, legs.f2))) return "square does not commute at draw " + std::to_string(k);
    if (!p.cert1.isometric() || !p.cert2.isometric()) return "leg not isometric at draw " + std::to_string(k);
  }
  return {};
}

std::string c_embedding_pushouts() {
  Rng rng(2);
  const Rational c(5, 4);
  for (int k = 0; k < 10; ++k) {
    LegPair legs = random_isometric_legs(rng, 2, 2, 3);
    LatticeMap f1 = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), c));
    LatticeMap f2 = scale_columns(legs.f2, random_factors(rng, legs.e.dim(), c));
    PushoutResult p = amalgamate(f1, f2, c);
    if (!(compose(p.g1, f1) == compose(p.g2, f2))) return "square does not commute at draw " + std::to_string(k);
    if (!p.cert1.within(c) || !p.cert2.within(c)) return "scaled leg exceeds c at draw " + std::to_string(k);
    if (!p.raw_cert1.within(c * c) || !p.raw_cert2.within(c * c)) return "raw leg exceeds c^2 at draw " + std::to_string(k);
  }
  return {};
}

std::string grid_embeddings() {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    FiniteLattice l = random_lattice(rng, 1 + rng.below(3), rng.coin());
    LatticeMap f = embed_into_grid(l);
    if (!certify_embedding(f).isometric()) return "embedding not isometric at draw " + std::to_string(k);
    for (int t = 0; t < 20; ++t) {
      Vec x(l.dim());
      for (auto& v : x) v = rng.rational(-3, 3, 6);
      if (l.norm(x) != f.cod().norm(f.apply(x))) return "norm differs at draw " + std::to_string(k);
    }
  }
  return {};
}

std::string renormings() {
  Rng rng(4);
  const Rational c(3, 2);
  for (int k = 0; k < 10; ++k) {
    LegPair legs = random_isometric_legs(rng, 2, 2, 3);
    LatticeMap f = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), c));
    Renorming r = renorm_for_isometry(f, c);
    if (!certify_embedding(r.map).isometric()) return "renormed map not isometric at draw " + std::to_string(k);
  }
  return {};
}

std::string isometrized_pairs() {
  Rng rng(5);
  const Rational eps(1, 10);
  for (int k = 0; k < 5; ++k) {
    LegPair legs = random_isometric_legs(rng, 2, 2, 3);
    LatticeMap f = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), 1 + eps));
    IsometrizedPair p = isometrize_pair(f, eps);
    if (p.defect > eps) return "defect above eps at draw " + std::to_string(k);
  }
  return {};
}

std::string dyadic_reconstruction() {
  BranchTree t = build_dyadic_tree(2);
  if (std::string e = check_tree(t); !e.empty()) return e;
  return check_reconstruction(t, 2, two_generator(t));
}

std::string chain_audit() {
  ChainState s = build_chain({FiniteLattice::l1(2), FiniteLattice::linf(2)}, 4, 5, 8);
  if (std::string e = audit_chain(s); !e.empty()) return e;
  ChainState back = parse_chain_document(chain_document(s));
  if (chain_document(back) != chain_document(s)) return "chain document does not round-trip";
  return {};
}

std::string distance_bounds() {
  Rng rng(6);
  for (int k = 0; k < 5; ++k) {
    GeneratedTuple a = generated_sublattice(FiniteLattice::l1(3), random_tuple(rng, 3, 2)).as_tuple();
    GeneratedTuple b = generated_sublattice(FiniteLattice::linf(3), random_tuple(rng, 3, 2)).as_tuple();
    DistanceBound d = distance(a, b);
    if (d.lower.value > d.upper.value) return "lower bound exceeds upper bound at draw " + std::to_string(k);
    if (verify_upper(d.upper, a, b) != d.upper.value) return "upper witness does not re-verify at draw " + std::to_string(k);
  }
  return {};
}

}  // namespace

bool run_selftest(std::ostream& out) {
  const std::vector<std::pair<std::string, Check>> checks{
      {"isometric pushouts commute", isometric_pushouts},
      {"c-embedding pushouts keep their constants", c_embedding_pushouts},
      {"grid embeddings preserve norms", grid_embeddings},
      {"renormings are isometric", renormings},
      {"isometrized pairs stay within eps", isometrized_pairs},
      {"dyadic tree reconstructs its leaves", dyadic_reconstruction},
      {"chains audit and round-trip", chain_audit},
      {"distance bounds are ordered", distance_bounds},
  };
  bool ok = true;
  for (const auto& [name, check] : checks) {
    std::string failure;
    try {
      failure = check();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    out << (failure.empty() ? "PASS " : "FAIL ") << name;
    if (!failure.empty()) out << ": " << failure;
    out << "\n";
    ok = ok && failure.empty();
  }
  return ok;
}
