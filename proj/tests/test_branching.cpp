#include <doctest.h>

#include <algorithm>

#include "fbl/branching.hpp"
#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/instances.hpp"

using namespace fbl;

namespace {

BranchTree two_leaf_tree(std::size_t leaves) {
  std::vector<Vec> xs;
  for (std::size_t i = 0; i < leaves; ++i) xs.push_back(unit_vector(leaves, i));
  return tree_from_leaves(FiniteLattice::linf(leaves), {leaves}, xs);
}

// Random tree with at most six leaves, which split the coordinates of a random lattice into
// consecutive nonempty blocks with positive weights.
BranchTree random_tree(Rng& rng) {
  std::vector<std::size_t> branching;
  const std::size_t d = 1 + std::size_t(rng.below(3));
  std::size_t count = 1;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t b = 1 + std::size_t(rng.below(3));
    while (count * b > 6) --b;
    branching.push_back(b);
    count *= b;
  }
  const std::size_t dim = count + std::size_t(rng.below(3));
  FiniteLattice amb = random_lattice(rng, dim, rng.coin());
  std::vector<Vec> leaves(count, Vec(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t leaf = j < count ? j : std::size_t(rng.below(count));
    leaves[leaf][j] = rng.rational(1, 3, 4);
  }
  return tree_from_leaves(amb, branching, leaves);
}

}  // namespace

TEST_SUITE("branching") {
  TEST_CASE("dyadic trees of depth 0 and 1") {
    BranchTree t0 = build_dyadic_tree(0);
    CHECK(t0.levels.size() == 1);
    CHECK(t0.spans[0].dim() == 1);
    CHECK(t0.inclusions.empty());
    CHECK(check_tree(t0).empty());

    BranchTree t1 = build_dyadic_tree(1);
    REQUIRE(t1.inclusions.size() == 1);
    const Rational h(1, 2);
    CHECK(t1.inclusions[0].columns()[0] == Vec{h, h, h, h});
    CHECK(t1.spans[1].norm(t1.inclusions[0].columns()[0]) == Rational(1));
    CHECK(t1.levels[0][0].element == Vec{h, h, h, h});
    CHECK(t1.ambient.norm(t1.levels[0][0].element) == Rational(1));
    CHECK(t1.levels[1][1].path == BranchPath{1});  // row 0, second half
    CHECK(t1.levels[1][2].path == BranchPath{2});  // row 1, first half
    CHECK(check_tree(t1).empty());
    CHECK_THROWS_AS(build_dyadic_tree(4), PreconditionError);
  }

  TEST_CASE("dyadic level spans are the grids on their normalised nodes") {
    BranchTree t = build_dyadic_tree(2);
    CHECK(check_tree(t).empty());
    for (std::size_t n = 0; n <= 2; ++n) {
      const std::size_t s = std::size_t(1) << n;
      CHECK(t.spans[n].grid_shape() == GridShape::uniform(s, s));
      std::vector<Vec> atoms;
      for (const auto& node : t.levels[n]) {
        CHECK(t.ambient.norm(node.element) == Rational(1, static_cast<long long>(s)));
        atoms.push_back(scale(Rational(static_cast<long long>(s)), node.element));
      }
      CHECK(same_norm(induced_inclusion(t.ambient, atoms).dom(), t.spans[n]));
      CHECK(certify_embedding(t.level_inclusion(n)).isometric());
      CHECK(equivalences_audit(t.spans[n]).passed());
    }
    Rng rng(2);
    const LatticeMap both = compose(t.inclusions[1], t.inclusions[0]);
    CHECK(both.columns()[0] == Vec(16, Rational(1, 4)));
    for (int k = 0; k < 100; ++k) {
      Vec x(4);
      for (auto& e : x) e = rng.rational(-3, 3, 5);
      CHECK(grid_norm(GridShape::uniform(4, 4), t.inclusions[1].apply(x)) == grid_norm(GridShape::uniform(2, 2), x));
    }
  }

  TEST_CASE("depth-3 dyadic tree") {
    BranchTree t = build_dyadic_tree(3);
    CHECK(t.levels[3].size() == 64);
    CHECK(check_tree(t).empty());
  }

  TEST_CASE("trees from leaves") {
    Rng rng(5);
    for (int k = 0; k < 20; ++k) {
      BranchTree t = random_tree(rng);
      CHECK(check_tree(t).empty());
      for (std::size_t n = 0; n <= t.depth(); ++n) {
        for (const auto& node : t.levels[n]) CHECK(t.find(node.path));
        CHECK(certify_embedding(t.level_inclusion(n)).isometric());
      }
    }
    FiniteLattice l = FiniteLattice::l1(3);
    CHECK_THROWS_AS(tree_from_leaves(l, {2}, {{1, 0, 0}, {1, 1, 0}}), PreconditionError);
    CHECK_THROWS_AS(tree_from_leaves(l, {2}, {{1, 0, 0}, {0, -1, 0}}), PreconditionError);
    CHECK_THROWS_AS(tree_from_leaves(l, {3}, {{1, 0, 0}, {0, 1, 0}}), StructuralError);
    CHECK_THROWS_AS(tree_from_leaves(l, {0}, {}), StructuralError);
  }

  TEST_CASE("two generators on two and three leaves") {
    BranchTree t = two_leaf_tree(2);
    TwoGenerator g = two_generator(t);
    CHECK(g.coefficients == std::vector<Rational>{1, 2});
    CHECK(g.v == Vec{1, 2});
    CHECK(g.recoverers[1].str() == "pos((2/3*x2 + -1*x1))");
    CHECK(g.multiples[1] == Rational(1, 3));
    CHECK(eval(g.recoverers[1], {g.u, g.v}) == Vec{0, Rational(1, 3)});
    CHECK(check_reconstruction(t, 1, g).empty());

    BranchTree t3 = two_leaf_tree(3);
    TwoGenerator g3 = two_generator(t3);
    CHECK(g3.coefficients == std::vector<Rational>{1, 2, 3});
    CHECK(g3.multiples == std::vector<Rational>{Rational(1, 2), Rational(1, 2), Rational(1, 5)});
    CHECK(check_reconstruction(t3, 1, g3).empty());
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(scale(Rational(1) / g3.multiples[i], eval(g3.recoverers[i], {g3.u, g3.v})) == unit_vector(3, i));

    TwoGenerator bad = g3;
    bad.multiples[0] = Rational(1);
    CHECK(!check_reconstruction(t3, 1, bad).empty());
  }

  TEST_CASE("two generators reconstruct the dyadic leaves") {
    BranchTree t = build_dyadic_tree(2);
    TwoGenerator g = two_generator(t);
    CHECK(g.recoverers.size() == 16);
    std::vector<Rational> sorted = g.coefficients;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK(sorted.front() == Rational(1));
    CHECK(sorted.back() == Rational(19, 4));
    CHECK(check_reconstruction(t, 2, g).empty());
    CHECK(check_reconstruction(t, 1, two_generator(t, 1)).empty());
    for (const auto& r : g.recoverers) CHECK(r.arity() <= 2);
    CHECK_THROWS_AS(two_generator(t, 0), PreconditionError);
    CHECK_THROWS_AS(two_generator(t, 3), PreconditionError);
  }

  TEST_CASE("two generators on random trees") {
    Rng rng(9);
    for (int k = 0; k < 20; ++k) {
      BranchTree t = random_tree(rng);
      for (std::size_t n = 1; n <= t.depth(); ++n) CHECK(check_reconstruction(t, n, two_generator(t, n)).empty());
    }
  }

  TEST_CASE("coefficient budgets") {
    BranchTree t = two_leaf_tree(2);
    std::vector<LevelBudget> b = coefficient_budget(t, Rational(1, 10));
    REQUIRE(b.size() == 1);
    CHECK(b[0].lipschitz == Rational(4));  // ((v - u/2)_+ - 3 (v - 3u/2)_+)_+
    CHECK(*b[0].drift == Rational(1, 40));
    CHECK(*coefficient_budget(t, Rational(0))[0].drift == Rational(0));
    CHECK_THROWS_AS(coefficient_budget(t, Rational(-1)), PreconditionError);

    BranchTree single = tree_from_leaves(FiniteLattice::l1(1), {1}, {{1}});
    CHECK(!coefficient_budget(single, Rational(1))[0].drift);

    BranchTree d = build_dyadic_tree(2);
    const Rational eps(1, 10);
    Rng rng(4);
    for (const LevelBudget& lb : coefficient_budget(d, eps)) {
      REQUIRE(lb.drift);
      TwoGenerator g = two_generator(d, lb.level);
      for (int k = 0; k < 10; ++k) {
        Vec v = g.v;
        for (const auto& leaf : d.levels[2]) v = add(v, scale(*lb.drift * rng.rational(-1, 1, 10) * Rational(9, 10), leaf.element));
        for (std::size_t i = 0; i < g.recoverers.size(); ++i) {
          const Vec moved = eval(g.recoverers[i], {g.u, v});
          CHECK(d.ambient.norm(sub(moved, eval(g.recoverers[i], {g.u, g.v}))) < eps);
        }
      }
    }
  }

  TEST_CASE("band projections") {
    BranchTree t = build_dyadic_tree(2);
    BandProjection root = band_project(t, {});
    CHECK(root.projection == identity_map(t.spans[2]));
    CHECK(root.report.passed());

    std::vector<LatticeMap> parts;
    for (std::size_t a = 0; a < 4; ++a) {
      BandProjection bp = band_project(t, {a});
      CHECK(bp.report.passed());
      CHECK(bp.band.size() == 4);
      CHECK(certify_embedding(bp.projection).c_upper == Rational(1));
      CHECK(compose(bp.projection, bp.projection) == bp.projection);
      // the other branch bit owns two of the four rows
      const std::size_t bit = a / 2;
      for (std::size_t cell = 0; cell < 16; ++cell)
        if (cell / 4 / 2 != bit) CHECK(is_zero(bp.projection.columns()[cell]));
      parts.push_back(bp.projection);
    }
    std::vector<Vec> cols(16);
    for (std::size_t j = 0; j < 16; ++j) {
      cols[j] = Vec(16);
      for (const auto& p : parts) cols[j] = add(cols[j], p.columns()[j]);
    }
    CHECK(LatticeMap(t.spans[2], t.spans[2], cols) == identity_map(t.spans[2]));
    CHECK(is_zero(compose(parts[0], parts[1]).columns()[0]));
    CHECK(band_project(t, {1, 3}).band.size() == 1);
    CHECK_THROWS_AS(band_project(t, {4}), PreconditionError);
    CHECK_THROWS_AS(band_project(t, {0, 0, 0}), PreconditionError);
  }
}
