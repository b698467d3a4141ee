#include <doctest.h>

#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/instances.hpp"
#include "fbl/lattices.hpp"
#include "fbl/polyhedra.hpp"
#include "oracles.hpp"

using namespace fbl;

namespace {

// Extreme points of the unit ball by brute force over signed functional rows.
std::size_t oracle_ep_count(const FiniteLattice& lat) {
  FiniteLattice c = complete_forms(lat);
  std::vector<Vec> rows;
  Vec rhs;
  for (const auto& f : c.functionals()) {
    const std::size_t n = f.size();
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      Vec r = f;
      for (std::size_t k = 0; k < n; ++k)
        if (mask >> k & 1) r[k] = -r[k];
      rows.push_back(r);
      rhs.push_back(1);
    }
  }
  return oracle::brute_force_vertices(rows, rhs).size();
}

}  // namespace

TEST_SUITE("lattices") {
  TEST_CASE("construction rejects degenerate norms") {
    CHECK_THROWS_AS(FiniteLattice::from_functionals(2, {{1, 0}}), PreconditionError);
    CHECK_THROWS_AS(FiniteLattice::from_functionals(2, {{1, -1}, {0, 1}}), PreconditionError);
    CHECK_THROWS_AS(FiniteLattice::from_ball(2, {{1, 0}}), PreconditionError);
    CHECK_THROWS_AS(FiniteLattice::from_functionals(2, {{1, 0, 0}}), StructuralError);
    CHECK_THROWS_AS(FiniteLattice::from_forms(2, std::nullopt, std::nullopt), StructuralError);
    CHECK(FiniteLattice().dim() == 0);
  }

  TEST_CASE("norms of the classical lattices") {
    CHECK(FiniteLattice::l1(2).norm({1, -1}) == Rational(2));
    CHECK(FiniteLattice::linf(2).norm({1, -1}) == Rational(1));
    FiniteLattice g = FiniteLattice::grid(GridShape::uniform(2, 2));
    CHECK(g.norm({1, -2, 3, 0}) == Rational(3));
    FiniteLattice ball = FiniteLattice::from_ball(2, {{1, 0}, {0, 1}});
    CHECK(ball.norm({1, -1}) == Rational(2));
  }

  TEST_CASE("dualize swaps l1 and l_inf and is an involution on norms") {
    FiniteLattice d1 = dualize(FiniteLattice::l1(2));
    CHECK(same_norm(d1, FiniteLattice::linf(2)));
    CHECK(same_norm(dualize(FiniteLattice::linf(3)), FiniteLattice::l1(3)));
    Rng rng(41);
    for (int t = 0; t < 30; ++t) {
      FiniteLattice l = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
      CHECK(same_norm(dualize(dualize(l)), l));
    }
  }

  TEST_CASE("homomorphism check names the offending entry") {
    FiniteLattice a = FiniteLattice::l1(2), b = FiniteLattice::l1(2);
    CHECK(check_homomorphism(LatticeMap(a, b, {{1, 0}, {0, 1}})).ok);
    auto neg = check_homomorphism(LatticeMap(a, b, {{1, 0}, {0, -1}}));
    CHECK_FALSE(neg.ok);
    CHECK(neg.reason.find("negative") != std::string::npos);
    auto ov = check_homomorphism(LatticeMap(a, b, {{1, 0}, {1, 1}}));
    CHECK_FALSE(ov.ok);
    CHECK(ov.reason.find("overlap") != std::string::npos);
    CHECK_THROWS_AS(certify_embedding(LatticeMap(a, b, {{1, 1}, {1, 0}})), PreconditionError);
  }

  TEST_CASE("certificates of simple maps") {
    FiniteLattice r = FiniteLattice::l1(1);
    auto c = certify_embedding(LatticeMap(r, r, {{2}}));
    CHECK(c.c_upper == Rational(2));
    CHECK(*c.c_lower == Rational(1, 2));
    CHECK(c.within(Rational(2)));
    CHECK_FALSE(c.isometric());
    // l_inf^2 -> l1^2 identity: norm 2, inverse norm 1.
    auto d = certify_embedding(LatticeMap(FiniteLattice::linf(2), FiniteLattice::l1(2), {{1, 0}, {0, 1}}));
    CHECK(d.c_upper == Rational(2));
    CHECK(*d.c_lower == Rational(1));
    auto k = certify_embedding(LatticeMap(FiniteLattice::l1(2), FiniteLattice::l1(1), {{1}, {0}}));
    CHECK_FALSE(k.c_lower.has_value());
  }

  TEST_CASE("certificates agree between functional and ball descriptions") {
    Rng rng(77);
    for (int t = 0; t < 40; ++t) {
      std::size_t n = std::size_t(rng.range(1, 2)), m = std::size_t(rng.range(n, 4));
      FiniteLattice a = random_lattice(rng, n, rng.coin()), x = random_lattice(rng, m, rng.coin());
      LatticeMap f = random_homomorphism(rng, a, x);
      auto c1 = certify_embedding(f);
      FiniteLattice af = complete_forms(a), xf = complete_forms(x);
      auto c2 = certify_embedding(LatticeMap(FiniteLattice::from_functionals(n, af.functionals()),
                                             FiniteLattice::from_ball(m, xf.ball_generators()), f.columns()));
      auto c3 = certify_embedding(LatticeMap(FiniteLattice::from_ball(n, af.ball_generators()),
                                             FiniteLattice::from_functionals(m, xf.functionals()), f.columns()));
      CHECK(c1.c_upper == c2.c_upper);
      CHECK(c1.c_upper == c3.c_upper);
      CHECK(*c1.c_lower == *c2.c_lower);
      CHECK(*c1.c_lower == *c3.c_lower);
      // Witnesses attain the constants.
      CHECK(x.norm(f.apply(c1.upper_witness)) == c1.c_upper * a.norm(c1.upper_witness));
      CHECK(a.norm(c1.lower_witness) == *c1.c_lower * x.norm(f.apply(c1.lower_witness)));
      // The operator norm of a positive map is its upper constant.
      CHECK(operator_norm(f) == c1.c_upper);
    }
  }

  TEST_CASE("direct sums in l_inf") {
    FiniteLattice s = direct_sum_infty(FiniteLattice::l1(2), FiniteLattice::l1(1));
    CHECK(s.dim() == 3);
    CHECK(s.norm({1, 1, 1}) == Rational(2));
    CHECK(s.grid_shape().has_value());
    auto [i1, i2] = direct_sum_injections(FiniteLattice::l1(2), FiniteLattice::l1(1), s);
    CHECK(certify_embedding(i1).isometric());
    CHECK(certify_embedding(i2).isometric());
  }

  TEST_CASE("equivalence audit on classical and random lattices") {
    for (const auto& l : {FiniteLattice::l1(3), FiniteLattice::linf(3), FiniteLattice::grid(GridShape({2, 1}))}) {
      auto a = equivalences_audit(l);
      CHECK(a.passed());
    }
    auto g = equivalences_audit(FiniteLattice::grid(GridShape::uniform(2, 2)));
    CHECK(g.oep_count == 4);
    CHECK(g.ep_count == 16);
    Rng rng(3);
    for (int t = 0; t < 40; ++t) {
      FiniteLattice l = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
      auto a = equivalences_audit(l);
      CHECK_MESSAGE(a.passed(), a.failure);
      CHECK(a.ep_count == oracle_ep_count(l));
    }
  }
}
