#include <doctest.h>

#include "fbl/amalgam.hpp"
#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/instances.hpp"
#include "fbl/polyhedra.hpp"

using namespace fbl;

TEST_SUITE("embeddings") {
  TEST_CASE("grid embedding of a two-functional norm") {
    FiniteLattice x = FiniteLattice::from_functionals(2, {{1, Rational(1, 2)}, {Rational(1, 2), 1}});
    LatticeMap phi = embed_into_grid(x);
    CHECK(phi.cod().grid_shape()->widths() == std::vector<std::size_t>{2, 2});
    CHECK(phi.columns()[0] == Vec{1, 0, Rational(1, 2), 0});
    CHECK(phi.columns()[1] == Vec{0, Rational(1, 2), 0, 1});
    CHECK(certify_embedding(phi).isometric());
    LatticeMap compact = embed_into_grid(x, GridLayout::Compact);
    CHECK(certify_embedding(compact).isometric());
    CHECK_THROWS_AS(embed_into_grid(x, GridLayout::Full, std::vector<Vec>{{1, 0}}), PreconditionError);
    // A proper subset of the functionals gives a contraction.
    LatticeMap part = embed_into_grid(x, GridLayout::Full, std::vector<Vec>{{1, Rational(1, 2)}});
    auto c = certify_embedding(part);
    CHECK(c.c_upper == Rational(1));
    CHECK(*c.c_lower == Rational(2));
  }

  TEST_CASE("grid embeddings of random lattices are isometric") {
    Rng rng(8);
    for (int t = 0; t < 40; ++t) {
      FiniteLattice l = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
      CHECK(certify_embedding(embed_into_grid(l)).isometric());
      CHECK(certify_embedding(embed_into_grid(l, GridLayout::Compact)).isometric());
    }
  }

  TEST_CASE("renorming the dilation by two") {
    FiniteLattice r = FiniteLattice::l1(1);
    LatticeMap f(r, r, {{2}});
    Renorming rn = renorm_for_isometry(f, Rational(2));
    CHECK(rn.which == RenormCase::Expansion);
    CHECK(rn.lattice.norm({1}) == Rational(1, 2));
    CHECK(certify_embedding(rn.map).isometric());
    Renorming half = renorm_for_isometry(LatticeMap(r, r, {{Rational(1, 2)}}), Rational(2));
    CHECK(half.which == RenormCase::Contraction);
    CHECK(half.lattice.norm({1}) == Rational(2));
    CHECK_THROWS_AS(renorm_for_isometry(f, Rational(3, 2)), PreconditionError);
  }

  TEST_CASE("renorming random c-embeddings") {
    Rng rng(19);
    int general = 0;
    for (int t = 0; t < 40; ++t) {
      std::size_t n = std::size_t(rng.range(1, 2)), m = std::size_t(rng.range(n, 3));
      FiniteLattice a = random_lattice(rng, n, rng.coin()), x = random_lattice(rng, m, rng.coin());
      LatticeMap f = random_homomorphism(rng, a, x);
      Rational c = certify_embedding(f).constant();
      Renorming rn = renorm_for_isometry(f, c);
      general += rn.which == RenormCase::General;
      CHECK(certify_embedding(rn.map).isometric());
      FiniteLattice xc = complete_forms(x);
      FiniteLattice nc = complete_forms(rn.lattice);
      for (const auto& v : xc.ball_generators()) {
        Rational ratio = x.norm(v) / rn.lattice.norm(v);
        CHECK(Rational(1) / c <= ratio);
        CHECK(ratio <= c);
      }
      for (const auto& v : nc.ball_generators()) {
        Rational ratio = x.norm(v) / rn.lattice.norm(v);
        CHECK(Rational(1) / c <= ratio);
        CHECK(ratio <= c);
      }
    }
    CHECK(general > 0);
  }

  TEST_CASE("isometrising a one-dimensional dilation") {
    FiniteLattice r = FiniteLattice::l1(1);
    Rational eps(1, 10);
    IsometrizedPair p = isometrize_pair(LatticeMap(r, r, {{Rational(11, 10)}}), eps);
    CHECK(p.defect == eps);
    CHECK(p.z.dim() == 2);
    CHECK(p.g.columns()[0] == Vec{1, Rational(10, 11)});
  }

  TEST_CASE("isometrising random (1+eps)-embeddings") {
    Rng rng(21);
    for (int t = 0; t < 12; ++t) {
      LegPair legs = random_isometric_legs(rng, 2, 2, 3);
      Rational eps = t % 2 ? Rational(1, 10) : Rational(1, 20);
      LatticeMap f = scale_columns(legs.f1, random_factors(rng, legs.e.dim(), Rational(1) + eps));
      IsometrizedPair p = isometrize_pair(f, eps);
      CHECK(p.defect <= eps);
      CHECK(certify_embedding(p.g).isometric());
      CHECK(certify_embedding(p.h).isometric());
    }
  }

  TEST_CASE("snapping almost disjoint elements") {
    FiniteLattice l = FiniteLattice::l1(2);
    Snap s = snap_sublattice(l, {{1, Rational(1, 4)}, {Rational(1, 4), 1}});
    CHECK(s.map.columns()[0] == Vec{Rational(3, 4), 0});
    CHECK(s.map.columns()[1] == Vec{0, Rational(3, 4)});
    CHECK(check_homomorphism(s.map).ok);
    CHECK_THROWS_AS(snap_sublattice(l, {{1, 1}, {1, 1}}), PreconditionError);

    FiniteLattice l3 = FiniteLattice::l1(3);
    std::vector<Vec> ref{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    std::vector<Vec> approx{{1, Rational(1, 100), 0}, {0, 1, Rational(1, 100)}, {Rational(1, 100), 0, 1}};
    Snap t = snap_sublattice(l3, approx, ref);
    Rational dsum;
    for (std::size_t i = 0; i < 3; ++i) dsum += l3.norm(sub(ref[i], t.map.columns()[i]));
    CHECK(*t.reference_error <= Rational(1, 100));
    CHECK(t.distortion <= (Rational(1) + dsum) / (Rational(1) - dsum));
  }
}
