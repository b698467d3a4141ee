#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fbl/errors.hpp"
#include "fbl/fraisse.hpp"
#include "fbl/instances.hpp"
#include "fbl/polyhedra.hpp"

using namespace fbl;

namespace {

// Dimension of the span of `vs` by exact elimination.
std::size_t rank_of(std::vector<Vec> vs) {
  std::size_t rank = 0;
  const std::size_t n = vs.empty() ? 0 : vs[0].size();
  for (std::size_t col = 0; col < n && rank < vs.size(); ++col) {
    std::size_t piv = rank;
    while (piv < vs.size() && vs[piv][col].is_zero()) ++piv;
    if (piv == vs.size()) continue;
    std::swap(vs[piv], vs[rank]);
    for (std::size_t r = 0; r < vs.size(); ++r)
      if (r != rank && !vs[r][col].is_zero()) {
        Rational f = vs[r][col] / vs[rank][col];
        for (std::size_t c = 0; c < n; ++c) vs[r][c] -= f * vs[rank][c];
      }
    ++rank;
  }
  return rank;
}

// Closure of span(tuple) under the terms pos(x - r y) for spanning vectors
// x, y and every coordinate ratio r = x[j] / y[j], iterated until the
// dimension stops growing.
std::size_t closure_dim(const std::vector<Vec>& tuple) {
  auto basis_of = [](const std::vector<Vec>& vs) {
    std::vector<Vec> basis;
    for (const auto& v : vs) {
      basis.push_back(v);
      if (rank_of(basis) < basis.size()) basis.pop_back();
    }
    return basis;
  };
  std::vector<Vec> span = basis_of(tuple);
  for (;;) {
    std::vector<Vec> next = span;
    for (const auto& x : span) {
      next.push_back(pos_part(x));
      for (const auto& y : span)
        for (std::size_t j = 0; j < y.size(); ++j)
          if (!y[j].is_zero()) next.push_back(pos_part(sub(x, scale(x[j] / y[j], y))));
    }
    next = basis_of(next);
    if (next.size() == span.size()) return span.size();
    span = std::move(next);
  }
}

bool is_grid_up_to_scaling(const FiniteLattice& l) {
  // The compact grid embedding is onto exactly when l is itself a grid.
  return embed_into_grid(l, GridLayout::Compact).cod().dim() == l.dim();
}

std::string chain_shape(const ChainState& s) {
  std::ostringstream os;
  for (std::size_t n = 0; n < s.stages.size(); ++n) {
    const FiniteLattice& st = s.stages[n];
    os << "stage " << n + 1 << " dim " << st.dim() << " functionals " << st.functionals().size() << " generators "
       << st.ball_generators().size() << "\n";
  }
  for (const auto& r : s.records) os << r.origin << (r.accepted ? " accepted" : " rejected") << " dim " << r.dim << "\n";
  return os.str();
}

void check_golden(const std::string& name, const std::string& text) {
  const std::string path = std::string(FBL_GOLDEN_DIR) + "/" + name;
  if (std::getenv("FBL_UPDATE_GOLDEN")) {
    std::ofstream(path) << text;
    return;
  }
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == text);
}

const std::vector<FiniteLattice> three_catalogue = {FiniteLattice::l1(2), FiniteLattice::linf(2),
                                                    FiniteLattice::grid(GridShape({2, 2}))};

}  // namespace

TEST_SUITE("fraisse") {
  TEST_CASE("generated sublattice of a signed tuple") {
    FiniteLattice l = FiniteLattice::l1(4);
    std::vector<Vec> tuple{{1, 2, -1, 0}, {1, 2, 0, 0}};
    GeneratedSublattice g = generated_sublattice(l, tuple);
    REQUIRE(g.inclusion.dom().dim() == 2);
    CHECK(g.inclusion.columns()[0] == Vec{2, 4, 0, 0});
    CHECK(g.inclusion.columns()[1] == Vec{0, 0, 1, 0});
    CHECK(g.coords[0] == Vec{Rational(1, 2), -1});
    CHECK(g.coords[1] == Vec{Rational(1, 2), 0});
    validate(g.as_tuple());
    CHECK(generated_sublattice(l, {}).inclusion.dom().dim() == 0);
    CHECK_THROWS_AS(generated_sublattice(l, {{1, 2}}), StructuralError);
  }

  TEST_CASE("generated sublattices agree with iterated closure") {
    Rng rng(31);
    for (int t = 0; t < 60; ++t) {
      const std::size_t n = std::size_t(rng.range(1, 5));
      FiniteLattice l = random_lattice(rng, n, rng.coin());
      std::vector<Vec> tuple = random_tuple(rng, n, std::size_t(rng.range(1, 3)));
      if (rng.coin()) tuple.push_back(scale(Rational(2), tuple[0]));
      GeneratedSublattice g = generated_sublattice(l, tuple);
      CHECK(g.inclusion.dom().dim() == closure_dim(tuple));
      for (std::size_t i = 0; i < tuple.size(); ++i) CHECK(g.inclusion.apply(g.coords[i]) == tuple[i]);
      for (std::size_t k = 0; k < g.witness.size(); ++k)
        CHECK(eval(g.witness[k], tuple) == g.inclusion.columns()[k]);
      validate(g.as_tuple());
      CHECK(certify_embedding(g.inclusion).isometric());
    }
  }

  TEST_CASE("tuple correspondence splitting an element into three parts") {
    FiniteLattice a = FiniteLattice::l1(2), b = FiniteLattice::l1(3);
    Correspondence c = tuple_correspondence(a, {{1, 0}}, b, {{Rational(1, 3), Rational(1, 3), Rational(1, 3)}});
    REQUIRE(c.map);
    CHECK(c.map->columns()[0] == Vec{Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    PushoutResult p = amalgamate(c.source.inclusion, *c.map, Rational(1), AmalgamRoute::Direct);
    CHECK(compose(p.g1, c.source.inclusion) == compose(p.g2, *c.map));
    CHECK(p.cert1.isometric());
    CHECK(p.cert2.isometric());

    Correspondence stretched = tuple_correspondence(a, {{1, 0}}, b, {{1, 1, 0}});
    CHECK(!stretched.map);
    CHECK(stretched.diagnosis.find("2-embedding") != std::string::npos);
    Correspondence outside = tuple_correspondence(a, {{1, 0}, {1, 0}}, b, {{1, 0, 0}, {0, 1, 0}});
    CHECK(!outside.map);
    CHECK(outside.diagnosis.find("outside") != std::string::npos);
    Correspondence kernel = tuple_correspondence(a, {{1, 1}, {1, 0}}, b, {{1, 0, 0}, {1, 0, 0}});
    CHECK(!kernel.map);
    CHECK(kernel.diagnosis.find("maps to 0") != std::string::npos);
  }

  TEST_CASE("distance examples") {
    FiniteLattice r = FiniteLattice::l1(1);
    GeneratedTuple one{r, {{1}}, std::nullopt}, more{r, {{Rational(5, 4)}}, std::nullopt};
    DistanceBound same = distance(one, one);
    CHECK(same.upper.value == Rational(0));
    CHECK(same.lower.value == Rational(0));
    DistanceBound d = distance(one, more);
    CHECK(d.upper.value == Rational(1, 4));
    CHECK(d.lower.value == Rational(1, 4));
    GeneratedTuple two{r, {{2}}, std::nullopt};
    CHECK(dk_lower(one, two).value >= Rational(1));

    GeneratedTuple l1{FiniteLattice::l1(2), {{1, 0}, {0, 1}}, std::nullopt};
    GeneratedTuple li{FiniteLattice::linf(2), {{1, 0}, {0, 1}}, std::nullopt};
    DistanceBound x = distance(l1, li);
    CHECK(x.upper.value <= Rational(1));
    CHECK(x.lower.value >= Rational(1, 2));
    CHECK(verify_upper(x.upper, l1, li) == x.upper.value);
    Term sum = Term::var(0) + Term::var(1);
    CHECK(lipschitz(sum) == Rational(2));
    CHECK(l1.lattice.norm(eval(sum, l1.tuple)) == Rational(2));
    CHECK(li.lattice.norm(eval(sum, li.tuple)) == Rational(1));
  }

  TEST_CASE("exhaustive small-grid search for l1 against l_inf atoms") {
    // Joint embeddings into l_inf^R(l_1^C) with cell values in {0, 1/2, 1};
    // isometry is read off the row sums directly.
    const Rational half(1, 2);
    std::optional<Rational> best;
    for (std::size_t rows = 1; rows <= 2; ++rows)
      for (std::size_t width = 1; width <= 3; ++width) {
        const std::size_t cells = rows * width;
        std::vector<std::pair<Vec, Vec>> l1s, lis;
        std::size_t total = 1;
        for (std::size_t k = 0; k < cells; ++k) total *= 5;
        for (std::size_t code = 0; code < total; ++code) {
          Vec u(cells), v(cells);
          std::size_t c = code;
          for (std::size_t k = 0; k < cells; ++k, c /= 5) {
            std::size_t o = c % 5;
            if (o == 1 || o == 2) u[k] = o == 1 ? half : Rational(1);
            if (o == 3 || o == 4) v[k] = o == 3 ? half : Rational(1);
          }
          bool le_l1 = true, full_l1 = false, le_li = true, top_u = false, top_v = false;
          for (std::size_t r = 0; r < rows; ++r) {
            Rational su, sv;
            for (std::size_t j = 0; j < width; ++j) {
              su += u[r * width + j];
              sv += v[r * width + j];
            }
            le_l1 = le_l1 && su <= Rational(1) && sv <= Rational(1);
            full_l1 = full_l1 || (su == Rational(1) && sv == Rational(1));
            le_li = le_li && su + sv <= Rational(1);
            top_u = top_u || su == Rational(1);
            top_v = top_v || sv == Rational(1);
          }
          if (le_l1 && full_l1) l1s.push_back({u, v});
          if (le_li && top_u && top_v) lis.push_back({u, v});
        }
        GridShape shape(std::vector<std::size_t>(rows, width));
        for (const auto& [u1, v1] : l1s)
          for (const auto& [u2, v2] : lis) {
            Rational val = max(grid_norm(shape, sub(u1, u2)), grid_norm(shape, sub(v1, v2)));
            if (!best || val < *best) best = val;
          }
      }
    REQUIRE(best);
    CHECK(*best == Rational(1));
    GeneratedTuple l1{FiniteLattice::l1(2), {{1, 0}, {0, 1}}, std::nullopt};
    GeneratedTuple li{FiniteLattice::linf(2), {{1, 0}, {0, 1}}, std::nullopt};
    CHECK(dk_upper(l1, li).value == *best);
  }

  TEST_CASE("bounds are ordered and upper witnesses verify on random pairs") {
    Rng rng(41);
    for (int t = 0; t < 40; ++t) {
      const std::size_t k = std::size_t(rng.range(1, 2));
      FiniteLattice la = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
      FiniteLattice lb = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
      GeneratedTuple a{la, random_tuple(rng, la.dim(), k), std::nullopt};
      GeneratedTuple b{lb, random_tuple(rng, lb.dim(), k), std::nullopt};
      DistanceBound d = distance(a, b);
      CHECK(d.lower.value <= d.upper.value);
      CHECK(verify_upper(d.upper, a, b) == d.upper.value);
      CHECK(dk_upper(a, a).value == Rational(0));
      if (d.lower.term) {
        CHECK(la.norm(eval(*d.lower.term, a.tuple)) == d.lower.norm_a);
        CHECK(fbl::abs(d.lower.norm_a - d.lower.norm_b) == d.lower.value * d.lower.lip);
      }
    }
  }

  TEST_CASE("composed witnesses obey the triangle bound") {
    Rng rng(43);
    for (int t = 0; t < 20; ++t) {
      const std::size_t k = std::size_t(rng.range(1, 2));
      std::vector<GeneratedTuple> g;
      for (int i = 0; i < 3; ++i) {
        FiniteLattice l = random_lattice(rng, std::size_t(rng.range(1, 3)), rng.coin());
        g.push_back({l, random_tuple(rng, l.dim(), k), std::nullopt});
      }
      UpperWitness ab = dk_upper(g[0], g[1]), bc = dk_upper(g[1], g[2]);
      UpperWitness ac = compose_witnesses(g[0], ab, g[1], bc, g[2]);
      CHECK(ac.value <= ab.value + bc.value);
      CHECK(verify_upper(ac, g[0], g[2]) == ac.value);
    }
  }

  TEST_CASE("chain of zero steps and of one-dimensional pieces") {
    ChainState zero = build_chain(three_catalogue, 0, 1);
    CHECK(zero.stages.size() == 1);
    CHECK(audit_chain(zero).empty());
    ChainState line = build_chain({FiniteLattice::l1(1)}, 5, 2);
    CHECK(line.stages.size() == 6);
    for (std::size_t n = 0; n < line.stages.size(); ++n) {
      CHECK(is_grid_up_to_scaling(line.stages[n]));
      if (n > 0) CHECK(line.stages[n - 1].dim() <= line.stages[n].dim());
    }
    CHECK(audit_chain(line).empty());
  }

  TEST_CASE("degenerate and splitting tasks") {
    ChainState s = start_chain({FiniteLattice::l1(2)}, 0, 5, 24);
    // B = <a> itself: the amalgam is an isometric copy of the stage.
    GeneratedSublattice e = generated_sublattice(s.stages[0], {{1, 0}});
    s.queue.push_back({0, {{1, 0}}, e.inclusion.dom(), e.coords, 0, "degenerate", std::nullopt});
    s.queue.push_back({0, {{1, 0}}, FiniteLattice::l1(3), {{Rational(1, 3), Rational(1, 3), Rational(1, 3)}}, 0,
                       "split", std::nullopt});
    s.queue.push_back({0, {{1, 0}}, FiniteLattice::l1(3), {{1, 1, 0}}, 0, "bad", std::nullopt});
    s = chain_step(std::move(s));
    CHECK(s.stages.back().dim() == 2);
    CHECK(certify_embedding(s.connecting.back()).isometric());
    s = chain_step(std::move(s));
    CHECK(s.stages.back().dim() == 4);
    const LatticeMap& split = *s.records.back().target_embedding;
    CHECK(s.to_last[1].apply({1, 0}) == split.apply({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
    s = chain_step(std::move(s));
    CHECK(!s.records.back().accepted);
    CHECK(s.stages.size() == 3);
    CHECK(audit_chain(s).empty());
    CHECK_THROWS_AS(chain_step(s), PreconditionError);
  }

  TEST_CASE("twenty scripted tasks") {
    ChainState s = start_chain(three_catalogue, 0, 11, 24);
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
      const std::size_t last = s.stages.size() - 1;
      const FiniteLattice& top = s.stages[last];
      const std::size_t idx = std::size_t(rng.below(2));
      const FiniteLattice& b = s.catalogue[idx];
      Vec a(top.dim()), y(b.dim());
      a[std::size_t(rng.below(top.dim()))] = rng.rational(1, 2, 3);
      y[std::size_t(rng.below(b.dim()))] = 1;
      s.queue.push_back({last, {a}, b, {scale(top.norm(a) / b.norm(y), y)}, 0, "script", idx});
      s = chain_step(std::move(s));
      REQUIRE(s.records.back().accepted);
      CHECK(certify_embedding(s.connecting.back()).isometric());
    }
    CHECK(audit_chain(s).empty());
    check_golden("chain_scripted_20.txt", chain_shape(s));
  }

  TEST_CASE("thirty-step chain over three catalogue lattices") {
    ChainState s = build_chain(three_catalogue, 30, 7);
    CHECK(s.stages.size() == 31);
    CHECK(audit_chain(s).empty());
    ChainState again = build_chain(three_catalogue, 30, 7);
    CHECK(chain_shape(again) == chain_shape(s));
    for (std::size_t n = 0; n < s.stages.size(); ++n) CHECK(canonical_oeps(s.stages[n]) == canonical_oeps(again.stages[n]));
    check_golden("chain_build_30.txt", chain_shape(s));
    CHECK(chain_shape(extend_chain(build_chain(three_catalogue, 12, 7), 18)) == chain_shape(s));
  }

  TEST_CASE("probe on two disjoint copies of l1^2") {
    ChainState s = start_chain({FiniteLattice::l1(2)}, 0, 3, 24);
    s.queue.push_back({0, {}, FiniteLattice::l1(2), {}, 0, "joint", 0});
    s = chain_step(std::move(s));
    REQUIRE(s.copies.size() == 2);
    const std::vector<Vec>& a = s.copies[0].atoms;
    const std::vector<Vec>& b = s.copies[1].atoms;
    ProbeReport same = homogeneity_probe(s, 1, a, 1, a, Rational(1, 10));
    CHECK(same.success);
    CHECK(same.steps == 0);
    CHECK(same.distance == Rational(0));
    ProbeReport r = homogeneity_probe(s, 1, a, 1, b, Rational(1, 10));
    REQUIRE(r.success);
    CHECK(r.steps == 1);
    CHECK(r.distance == Rational(0));
    CHECK(certify_embedding(*r.realizing).isometric());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(r.realizing->apply(a[i]) == r.state.to_last[1].apply(b[i]));
    CHECK(audit_chain(r.state).empty());
  }

  TEST_CASE("probe refuses to move a weak unit onto a non-unit") {
    ChainState s = start_chain({FiniteLattice::linf(2)}, 0, 3, 24);
    std::vector<Vec> a{{1, 1}, {1, 0}}, b{{1, 0}, {1, 0}};
    ProbeReport r = homogeneity_probe(s, 0, a, 0, b, Rational(1, 2));
    CHECK(r.refused);
    CHECK(!r.success);
    REQUIRE(r.upper);
    REQUIRE(r.lower);
    CHECK(*r.upper == Rational(1));
    CHECK(r.lower->value >= Rational(1, 2));
    CHECK(r.state.stages.size() == 1);
  }
}
