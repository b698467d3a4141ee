#include "fbl/branching.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/instances.hpp"

namespace fbl {
namespace {

std::string path_str(const BranchPath& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

Vec normalized(const FiniteLattice& ambient, const Vec& x) { return scale(Rational(1) / ambient.norm(x), x); }

// Parent and child indices, level spans and inclusions from paths and elements.
// spans[n] defaults to the induced span of the normalised level elements.
void finish(BranchTree& t, std::vector<std::optional<FiniteLattice>> span_override) {
  const std::size_t d = t.depth();
  for (std::size_t n = 0; n < d; ++n) {
    std::map<BranchPath, std::size_t> idx;
    for (std::size_t i = 0; i < t.levels[n].size(); ++i) idx[t.levels[n][i].path] = i;
    for (auto& node : t.levels[n]) node.children.assign(t.branching[n], 0);
    for (std::size_t i = 0; i < t.levels[n + 1].size(); ++i) {
      BranchNode& c = t.levels[n + 1][i];
      BranchPath parent(c.path.begin(), c.path.end() - 1);
      c.parent = idx.at(parent);
      t.levels[n][c.parent].children[c.path.back()] = i;
    }
  }
  t.spans.clear();
  t.inclusions.clear();
  for (std::size_t n = 0; n <= d; ++n) {
    std::vector<Vec> atoms;
    for (const auto& node : t.levels[n]) atoms.push_back(normalized(t.ambient, node.element));
    FiniteLattice induced = induced_inclusion(t.ambient, atoms, "S" + std::to_string(n)).dom();
    t.spans.push_back(n < span_override.size() && span_override[n] ? *span_override[n] : induced);
  }
  for (std::size_t n = 0; n < d; ++n) {
    std::vector<Vec> cols;
    for (const auto& node : t.levels[n]) {
      Vec col(t.levels[n + 1].size());
      const Rational pn = t.ambient.norm(node.element);
      for (std::size_t c : node.children) col[c] = t.ambient.norm(t.levels[n + 1][c].element) / pn;
      cols.push_back(std::move(col));
    }
    t.inclusions.emplace_back(t.spans[n], t.spans[n + 1], std::move(cols));
  }
}

std::vector<std::size_t> leaves_below(const BranchTree& t, std::size_t level, std::size_t index) {
  std::vector<std::size_t> cur{index};
  for (std::size_t n = level; n < t.depth(); ++n) {
    std::vector<std::size_t> next;
    for (std::size_t i : cur)
      for (std::size_t c : t.levels[n][i].children) next.push_back(c);
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end());
  return cur;
}

void require_level(const BranchTree& t, std::size_t level) {
  if (level == 0 || level > t.depth())
    throw PreconditionError("level must lie in 1..depth", std::to_string(level));
}

}  // namespace

std::optional<std::size_t> BranchTree::find(const BranchPath& path) const {
  if (path.size() >= levels.size()) return std::nullopt;
  const auto& lv = levels[path.size()];
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (lv[i].path == path) return i;
  return std::nullopt;
}

LatticeMap BranchTree::level_inclusion(std::size_t n) const {
  std::vector<Vec> cols;
  for (const auto& node : levels.at(n)) cols.push_back(normalized(ambient, node.element));
  return LatticeMap(spans.at(n), ambient, std::move(cols));
}

BranchTree tree_from_leaves(const FiniteLattice& ambient, std::vector<std::size_t> branching,
                            const std::vector<Vec>& leaves) {
  std::size_t count = 1;
  for (std::size_t b : branching) {
    if (b == 0) throw StructuralError("branching sets must be nonempty");
    count *= b;
  }
  if (leaves.size() != count) throw StructuralError("expected " + std::to_string(count) + " leaves");
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].size() != ambient.dim()) throw StructuralError("leaf length does not match the ambient lattice");
    if (!is_nonnegative(leaves[i]) || is_zero(leaves[i]))
      throw PreconditionError("leaves must be positive and nonzero", "leaf " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j)
      if (!disjoint(leaves[i], leaves[j]))
        throw PreconditionError("leaves must be pairwise disjoint", "leaves " + std::to_string(j) + "," + std::to_string(i));
  }
  BranchTree t;
  t.ambient = ambient;
  t.branching = std::move(branching);
  const std::size_t d = t.depth();
  t.levels.resize(d + 1);
  for (std::size_t i = 0; i < count; ++i) {
    BranchPath p(d);
    std::size_t r = i;
    for (std::size_t k = d; k-- > 0;) {
      p[k] = r % t.branching[k];
      r /= t.branching[k];
    }
    t.levels[d].push_back({p, leaves[i], 0, {}});
  }
  for (std::size_t n = d; n-- > 0;) {
    for (std::size_t i = 0; i < t.levels[n + 1].size(); i += t.branching[n]) {
      const BranchPath& cp = t.levels[n + 1][i].path;
      Vec sum = zeros(ambient.dim());
      for (std::size_t m = 0; m < t.branching[n]; ++m) sum = add(sum, t.levels[n + 1][i + m].element);
      t.levels[n].push_back({BranchPath(cp.begin(), cp.end() - 1), std::move(sum), 0, {}});
    }
  }
  finish(t, {});
  return t;
}

BranchTree assemble_tree(FiniteLattice ambient, std::vector<std::size_t> branching,
                         std::vector<std::vector<BranchNode>> levels, std::vector<FiniteLattice> spans) {
  const std::size_t d = branching.size();
  if (levels.size() != d + 1 || spans.size() != d + 1) throw StructuralError("expected one level and one span per depth");
  std::size_t count = 1;
  for (std::size_t n = 0; n <= d; ++n) {
    if (n > 0) {
      if (branching[n - 1] == 0) throw StructuralError("branching sets must be nonempty");
      count *= branching[n - 1];
    }
    if (levels[n].size() != count) throw StructuralError("level " + std::to_string(n) + " has the wrong size");
    if (spans[n].dim() != count) throw StructuralError("span " + std::to_string(n) + " has the wrong dimension");
    std::map<BranchPath, int> seen;
    for (const auto& node : levels[n]) {
      if (node.path.size() != n) throw StructuralError("path " + path_str(node.path) + " at level " + std::to_string(n));
      for (std::size_t k = 0; k < n; ++k)
        if (node.path[k] >= branching[k]) throw StructuralError("path " + path_str(node.path) + " leaves the tree");
      if (node.element.size() != ambient.dim()) throw StructuralError("node length does not match the ambient lattice");
      if (!is_nonnegative(node.element) || is_zero(node.element))
        throw PreconditionError("nodes must be positive and nonzero", path_str(node.path));
      if (seen[node.path]++) throw StructuralError("path " + path_str(node.path) + " repeats");
    }
  }
  BranchTree t;
  t.ambient = std::move(ambient);
  t.branching = std::move(branching);
  t.levels = std::move(levels);
  std::vector<std::optional<FiniteLattice>> overrides(spans.begin(), spans.end());
  finish(t, std::move(overrides));
  return t;
}

BranchTree build_dyadic_tree(std::size_t depth) {
  if (depth > 3) throw PreconditionError("dyadic trees are limited to depth 3", std::to_string(depth));
  const std::size_t side = std::size_t(1) << depth;
  BranchTree t;
  t.ambient = FiniteLattice::grid(GridShape::uniform(side, side), "U" + std::to_string(depth));
  t.branching.assign(depth, 4);
  t.levels.resize(depth + 1);
  std::vector<std::optional<FiniteLattice>> spans;
  const Rational leaf(1, static_cast<long long>(side));
  for (std::size_t n = 0; n <= depth; ++n) {
    const std::size_t s = std::size_t(1) << n, below = depth - n;
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c) {
        BranchPath p(n);
        for (std::size_t k = 0; k < n; ++k) {
          const std::size_t shift = n - 1 - k;
          p[k] = 2 * ((r >> shift) & 1) + ((c >> shift) & 1);
        }
        Vec x(side * side);
        for (std::size_t rr = r << below; rr < (r + 1) << below; ++rr)
          for (std::size_t cc = c << below; cc < (c + 1) << below; ++cc) x[rr * side + cc] = leaf;
        t.levels[n].push_back({std::move(p), std::move(x), 0, {}});
      }
    spans.push_back(FiniteLattice::grid(GridShape::uniform(s, s), "S" + std::to_string(n)));
  }
  finish(t, std::move(spans));
  return t;
}

std::string check_tree(const BranchTree& t) {
  for (std::size_t n = 0; n < t.depth(); ++n)
    for (const auto& node : t.levels[n]) {
      Vec sum = zeros(t.ambient.dim());
      for (std::size_t a = 0; a < node.children.size(); ++a) {
        const Vec& xa = t.levels[n + 1][node.children[a]].element;
        if (!is_nonnegative(xa)) return "negative node below " + path_str(node.path);
        for (std::size_t b = 0; b < a; ++b)
          if (!disjoint(xa, t.levels[n + 1][node.children[b]].element))
            return "siblings below " + path_str(node.path) + " overlap";
        sum = add(sum, xa);
      }
      if (sum != node.element) return "children of " + path_str(node.path) + " do not sum to it";
    }
  for (std::size_t n = 0; n < t.inclusions.size(); ++n)
    if (!certify_embedding(t.inclusions[n]).isometric()) return "inclusion " + std::to_string(n) + " is not isometric";
  return {};
}

std::vector<Rational> branch_coefficients(const BranchTree& t, std::size_t level) {
  require_level(t, level);
  std::vector<Rational> out;
  for (const auto& node : t.levels[level]) {
    Rational a, h(1);
    for (std::size_t k = 0; k < node.path.size(); ++k) {
      if (k == 0) {
        a = Rational(static_cast<long long>(node.path[0] + 1));
      } else {
        h = h / Rational(static_cast<long long>(t.branching[k]));
        a += Rational(static_cast<long long>(node.path[k])) * h;
      }
    }
    out.push_back(a);
  }
  return out;
}

TwoGenerator two_generator(const BranchTree& t, std::size_t level) {
  TwoGenerator g;
  g.coefficients = branch_coefficients(t, level);
  const auto& nodes = t.levels[level];
  g.u = t.levels[0][0].element;
  g.v = zeros(t.ambient.dim());
  for (std::size_t i = 0; i < nodes.size(); ++i) g.v = add(g.v, scale(g.coefficients[i], nodes[i].element));

  std::vector<Rational> w = g.coefficients;
  std::sort(w.begin(), w.end());
  const Term u = Term::var(0), v = Term::var(1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Rational& a = g.coefficients[i];
    const std::size_t p = std::size_t(std::lower_bound(w.begin(), w.end(), a) - w.begin());
    if (w.size() == 1) {
      g.recoverers.push_back(u);
      g.multiples.push_back(Rational(1));
    } else if (p + 1 == w.size()) {
      const Rational s = (w[p - 1] + a) / Rational(2);
      g.recoverers.push_back(pos((Rational(1) / s) * v - u));
      g.multiples.push_back(a / s - Rational(1));
    } else {
      const Rational s = p == 0 ? a / Rational(2) : (w[p - 1] + a) / Rational(2);
      const Rational r = (a + w[p + 1]) / Rational(2);
      const Rational c = (w[p + 1] - s) / (w[p + 1] - r);
      g.recoverers.push_back(pos(pos(v - s * u) - c * pos(v - r * u)));
      g.multiples.push_back(a - s);
    }
  }
  return g;
}

TwoGenerator two_generator(const BranchTree& t) { return two_generator(t, t.depth()); }

std::string check_reconstruction(const BranchTree& t, std::size_t level, const TwoGenerator& g) {
  require_level(t, level);
  const auto& nodes = t.levels[level];
  if (g.recoverers.size() != nodes.size() || g.multiples.size() != nodes.size())
    return "expected " + std::to_string(nodes.size()) + " recoverers";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (g.multiples[i] <= Rational(0)) return "multiple " + std::to_string(i) + " is not positive";
    if (eval(g.recoverers[i], {g.u, g.v}) != scale(g.multiples[i], nodes[i].element))
      return "recoverer " + std::to_string(i) + " misses " + path_str(nodes[i].path);
  }
  return {};
}

std::vector<LevelBudget> coefficient_budget(const BranchTree& t, const Rational& eps) {
  if (eps < Rational(0)) throw PreconditionError("eps must be nonnegative", eps.str());
  const Rational un = t.ambient.norm(t.levels[0][0].element);
  std::vector<LevelBudget> out;
  for (std::size_t k = 1; k <= t.depth(); ++k) {
    LevelBudget b;
    b.level = k;
    for (const auto& r : two_generator(t, k).recoverers) b.lipschitz = max(b.lipschitz, lipschitz_in(r, 1));
    if (!b.lipschitz.is_zero()) b.drift = eps / (b.lipschitz * un);
    out.push_back(std::move(b));
  }
  return out;
}

BandProjection band_project(const BranchTree& t, const BranchPath& sigma) {
  const auto idx = t.find(sigma);
  if (!idx) throw PreconditionError("not a node of the tree", path_str(sigma));
  const std::size_t d = t.depth(), n = t.levels[d].size();
  std::vector<std::size_t> band = leaves_below(t, sigma.size(), *idx);
  std::vector<Vec> cols(n, Vec(n));
  for (std::size_t i : band) cols[i][i] = 1;
  LatticeMap p(t.spans[d], t.spans[d], std::move(cols));

  BandReport rep;
  auto fail = [&rep](const std::string& why) {
    if (rep.failure.empty()) rep.failure = why;
  };
  rep.homomorphism = check_homomorphism(p).ok;
  if (!rep.homomorphism) fail("not a homomorphism");
  rep.contractive = rep.homomorphism && certify_embedding(p).c_upper <= Rational(1);
  if (!rep.contractive) fail("not contractive");
  rep.idempotent = compose(p, p) == p;
  if (!rep.idempotent) fail("not idempotent");
  rep.identity_on_band = true;
  for (std::size_t i : band)
    if (p.apply(unit_vector(n, i)) != unit_vector(n, i)) rep.identity_on_band = false;
  if (!rep.identity_on_band) fail("not the identity on the band");

  std::vector<Vec> samples;
  for (std::size_t i = 0; i < n; ++i) samples.push_back(unit_vector(n, i));
  Rng rng(n);
  for (int k = 0; k < 12; ++k) {
    Vec x(n);
    for (auto& e : x) e = rng.rational(-2, 2, 3);
    samples.push_back(std::move(x));
  }
  rep.disjoint_decomposition = rep.meet_compatible = true;
  for (const auto& x : samples) {
    const Vec px = p.apply(x), rest = sub(x, px);
    if (add(px, rest) != x || !disjoint(px, rest) || !is_zero(p.apply(rest))) rep.disjoint_decomposition = false;
    for (const auto& y : samples)
      if (p.apply(meet(x, y)) != meet(px, p.apply(y)) || p.apply(join(x, y)) != join(px, p.apply(y)))
        rep.meet_compatible = false;
  }
  if (!rep.disjoint_decomposition) fail("range and kernel do not split the space");
  if (!rep.meet_compatible) fail("does not preserve meets and joins");
  return {std::move(p), std::move(band), std::move(rep)};
}

}  // namespace fbl
