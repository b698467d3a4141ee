#include "fbl/polyhedra.hpp"

#include <algorithm>
#include <numeric>

#include "fbl/errors.hpp"
#include "fbl/lp.hpp"
#include "fbl/vectorlattice.hpp"

namespace fbl {
namespace {

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : w_((n + 63) / 64, 0) {}
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] &= o.w_[k];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w_) c += std::size_t(__builtin_popcountll(x));
    return c;
  }

 private:
  std::vector<std::uint64_t> w_;
};

// Scales v to the primitive integer vector on the same ray.
Vec primitive(Vec v) {
  mpz_class l = 1;
  for (const auto& x : v)
    if (!x.is_zero()) {
      mpq_class q = x.to_mpq();
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    }
  mpz_class g = 0;
  std::vector<mpz_class> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    mpq_class q = v[i].to_mpq();
    ints[i] = q.get_num() * (l / q.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) return v;
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = v[i].is_zero() ? Rational(0) : Rational(mpq_class(ints[i] / g));
  return v;
}

// Row-reduces a copy of rows; returns indices of a maximal independent prefix-greedy subset.
std::vector<std::size_t> independent_rows(const std::vector<Vec>& rows, std::size_t dim, std::vector<Vec>* echelon) {
  std::vector<std::size_t> chosen;
  std::vector<Vec> ech;           // reduced rows
  std::vector<std::size_t> pivc;  // pivot column per reduced row
  for (std::size_t i = 0; i < rows.size() && chosen.size() < dim; ++i) {
    Vec r = rows[i];
    for (std::size_t k = 0; k < ech.size(); ++k) {
      if (r[pivc[k]].is_zero()) continue;
      Rational f = r[pivc[k]] / ech[k][pivc[k]];
      for (std::size_t j = 0; j < dim; ++j)
        if (!ech[k][j].is_zero()) r[j].sub_mul(f, ech[k][j]);
    }
    std::size_t p = 0;
    while (p < dim && r[p].is_zero()) ++p;
    if (p == dim) continue;
    chosen.push_back(i);
    ech.push_back(std::move(r));
    pivc.push_back(p);
  }
  if (echelon) *echelon = ech;
  return chosen;
}

// Nonzero z with E z = 0 for an echelon system of rank < dim.
Vec null_vector(const std::vector<Vec>& ech, std::size_t dim) {
  std::vector<std::size_t> piv;
  for (const auto& r : ech) {
    std::size_t p = 0;
    while (r[p].is_zero()) ++p;
    piv.push_back(p);
  }
  std::size_t free_col = 0;
  while (std::find(piv.begin(), piv.end(), free_col) != piv.end()) ++free_col;
  Vec z(dim);
  z[free_col] = 1;
  // Back-substitute from the last echelon row (pivots increase only after full reduction).
  for (std::size_t k = ech.size(); k-- > 0;) {
    Rational s;
    for (std::size_t j = 0; j < dim; ++j)
      if (j != piv[k]) s += ech[k][j] * z[j];
    z[piv[k]] = -s / ech[k][piv[k]];
  }
  return z;
}

std::vector<Vec> inverse(std::vector<Vec> m) {
  const std::size_t n = m.size();
  std::vector<Vec> inv(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].is_zero()) ++p;
    if (p == n) throw InvariantError("inverse of a singular basis");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    Rational d = m[c][c];
    for (auto& x : m[c]) x /= d;
    for (auto& x : inv[c]) x /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c].is_zero()) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        if (!m[c][k].is_zero()) m[r][k].sub_mul(f, m[c][k]);
        if (!inv[c][k].is_zero()) inv[r][k].sub_mul(f, inv[c][k]);
      }
    }
  }
  return inv;
}

struct Ray {
  Vec z;
  Bits tight;
};

}  // namespace

Enumeration enumerate_vertices(const std::vector<Vec>& a, const Vec& b, std::size_t dim) {
  if (a.size() != b.size()) throw StructuralError("enumerate_vertices: row/rhs count mismatch");
  for (const auto& r : a)
    if (r.size() != dim) throw StructuralError("enumerate_vertices: row length mismatch");
  const std::size_t D = dim + 1;
  // Homogenised cone {(x, t) : a x - b t <= 0, -t <= 0}; row 0 is t >= 0.
  std::vector<Vec> h;
  h.reserve(a.size() + 1);
  Vec trow(D);
  trow[dim] = -1;
  h.push_back(trow);
  for (std::size_t i = 0; i < a.size(); ++i) {
    Vec r = a[i];
    r.push_back(-b[i]);
    h.push_back(std::move(r));
  }
  Enumeration out;
  std::vector<Vec> ech;
  std::vector<std::size_t> base = independent_rows(h, D, &ech);
  if (base.size() < D) {
    Vec z = null_vector(ech, D);
    z.pop_back();
    out.line = primitive(z);
    return out;
  }
  std::vector<Vec> hb;
  for (std::size_t i : base) hb.push_back(h[i]);
  std::vector<Vec> hinv = inverse(hb);
  const std::size_t m = h.size();
  std::vector<Ray> rays;
  for (std::size_t k = 0; k < D; ++k) {
    Vec z(D);
    for (std::size_t i = 0; i < D; ++i) z[i] = -hinv[i][k];
    Ray r{primitive(std::move(z)), Bits(m)};
    for (std::size_t j = 0; j < D; ++j)
      if (j != k) r.tight.set(base[j]);
    rays.push_back(std::move(r));
  }
  std::vector<char> in_base(m, 0);
  for (std::size_t i : base) in_base[i] = 1;
  for (std::size_t row = 0; row < m; ++row) {
    if (in_base[row]) continue;
    const Vec& hr = h[row];
    std::vector<Rational> s(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      s[i] = dot(hr, rays[i].z);
      if (s[i].sign() > 0) pos.push_back(i);
      else if (s[i].sign() < 0) neg.push_back(i);
    }
    if (pos.empty()) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (s[i].is_zero()) rays[i].tight.set(row);
      continue;
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (s[i].sign() > 0) continue;
      Ray r = rays[i];
      if (s[i].is_zero()) r.tight.set(row);
      next.push_back(std::move(r));
    }
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        Bits common = rays[p].tight & rays[n].tight;
        if (common.count() + 2 < D) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r)
          if (r != p && r != n && common.subset_of(rays[r].tight)) adjacent = false;
        if (!adjacent) continue;
        Vec z(D);
        for (std::size_t j = 0; j < D; ++j) {
          z[j] = s[p] * rays[n].z[j];
          z[j].sub_mul(s[n], rays[p].z[j]);
        }
        Ray nr{primitive(std::move(z)), common};
        nr.tight.set(row);
        next.push_back(std::move(nr));
      }
    rays = std::move(next);
  }
  for (const auto& r : rays) {
    const Rational& t = r.z[dim];
    if (t.sign() > 0) {
      Vec v(r.z.begin(), r.z.end() - 1);
      for (auto& x : v) x /= t;
      out.vertices.push_back(std::move(v));
    } else if (t.is_zero()) {
      out.rays.emplace_back(r.z.begin(), r.z.end() - 1);
    }
  }
  out.vertices = sorted(std::move(out.vertices));
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  out.rays = sorted(std::move(out.rays));
  out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
  if (out.vertices.empty()) out.rays.clear();  // empty polyhedron
  return out;
}

std::vector<Vec> polytope_vertices(const std::vector<Vec>& a, const Vec& b, std::size_t dim) {
  Enumeration e = enumerate_vertices(a, b, dim);
  if (e.line) throw PreconditionError("polyhedron contains a line", to_string(*e.line));
  if (!e.rays.empty()) throw PreconditionError("polyhedron is unbounded", to_string(e.rays.front()));
  return e.vertices;
}

std::vector<Vec> polar_dual(const std::vector<Vec>& vertices, std::size_t dim) {
  if (vertices.empty()) throw PreconditionError("polar of an empty point set");
  Enumeration e = enumerate_vertices(vertices, Vec(vertices.size(), Rational(1)), dim);
  if (e.line) throw PreconditionError("origin is not interior: hull is flat", to_string(*e.line));
  if (!e.rays.empty()) throw PreconditionError("origin is not interior to the hull", to_string(e.rays.front()));
  return e.vertices;
}

std::optional<Rational> gauge_upper_bound(const Vec& x, const std::vector<Vec>& gens) {
  std::vector<std::size_t> s = support(x);
  if (s.empty()) return Rational(0);
  std::optional<Rational> best;
  for (const auto& g : gens) {
    Rational t;
    bool covers = true;
    for (std::size_t j : s) {
      if (g[j].is_zero()) {
        covers = false;
        break;
      }
      t = max(t, fbl::abs(x[j]) / fbl::abs(g[j]));
    }
    if (covers && (!best || t < *best)) best = t;
  }
  return best;
}

std::optional<Rational> sch_gauge(const Vec& x, const std::vector<Vec>& gens, Vec* weights) {
  std::vector<std::size_t> s = support(x);
  if (weights) weights->assign(gens.size(), Rational(0));
  if (s.empty()) return Rational(0);
  for (const auto& g : gens)
    if (g.size() != x.size()) throw StructuralError("sch_gauge: generator length mismatch");
  // Restrict to supp x, dropping generators that vanish there or are dominated.
  std::vector<std::size_t> keep;
  std::vector<Vec> cols;
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    Vec c;
    c.reserve(s.size());
    bool nonzero = false;
    for (std::size_t j : s) {
      c.push_back(fbl::abs(gens[gi][j]));
      nonzero = nonzero || !c.back().is_zero();
    }
    if (nonzero) {
      keep.push_back(gi);
      cols.push_back(std::move(c));
    }
  }
  std::vector<char> alive(cols.size(), 1);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (k == i || !alive[k]) continue;
      if (leq(cols[i], cols[k]) && (cols[i] != cols[k] || k < i)) {
        alive[i] = 0;
        break;
      }
    }
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (alive[i]) idx.push_back(i);
  Vec ax;
  for (std::size_t j : s) ax.push_back(fbl::abs(x[j]));
  for (std::size_t r = 0; r < s.size(); ++r) {
    bool covered = false;
    for (std::size_t i : idx) covered = covered || !cols[i][r].is_zero();
    if (!covered) return std::nullopt;
  }
  if (idx.size() == 1) {
    Rational t;
    for (std::size_t r = 0; r < s.size(); ++r) t = max(t, ax[r] / cols[idx[0]][r]);
    if (weights) (*weights)[keep[idx[0]]] = t;
    return t;
  }
  LinearProgram lp;
  lp.sense = Sense::Minimize;
  lp.objective.assign(idx.size(), Rational(1));
  for (std::size_t r = 0; r < s.size(); ++r) {
    Vec row;
    row.reserve(idx.size());
    for (std::size_t i : idx) row.push_back(cols[i][r]);
    lp.add(std::move(row), Relation::GreaterEq, ax[r]);
  }
  lp.set_nonnegative();
  LPResult res = solve_lp(lp);
  if (res.status != LPStatus::Optimal) throw InvariantError("gauge program not optimal with covered support");
  if (weights)
    for (std::size_t k = 0; k < idx.size(); ++k) (*weights)[keep[idx[k]]] = res.primal[k];
  return res.optimum;
}

std::vector<Vec> order_extreme_points(const std::vector<Vec>& gens, std::size_t dim) {
  std::vector<Vec> w;
  for (const auto& g : gens) {
    if (g.size() != dim) throw StructuralError("order_extreme_points: generator length mismatch");
    Vec a = fbl::abs(g);
    if (is_zero(a) || std::find(w.begin(), w.end(), a) != w.end()) continue;
    w.push_back(std::move(a));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    bool covered = false;
    for (const auto& g : w) covered = covered || !g[j].is_zero();
    if (!covered) throw PreconditionError("generators do not span: ball is unbounded along an atom", "e" + std::to_string(j));
  }
  std::vector<char> alive(w.size(), 1);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t k = 0; k < w.size() && alive[i]; ++k)
      if (k != i && alive[k] && leq(w[i], w[k])) alive[i] = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!alive[i]) continue;
    std::vector<Vec> others;
    for (std::size_t k = 0; k < w.size(); ++k)
      if (k != i && alive[k]) others.push_back(w[k]);
    auto g = sch_gauge(w[i], others);
    if (g && *g <= Rational(1)) alive[i] = 0;
  }
  std::vector<Vec> out;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (alive[i]) out.push_back(std::move(w[i]));
  return out;
}

namespace {

std::vector<Vec> maximal_vertices_connected(const std::vector<Vec>& functionals, std::size_t dim) {
  std::vector<Vec> a;
  Vec b;
  for (const auto& f : functionals) {
    a.push_back(f);
    b.push_back(1);
  }
  for (std::size_t j = 0; j < dim; ++j) {
    a.push_back(unit_vector(dim, j, Rational(-1)));
    b.push_back(0);
  }
  std::vector<Vec> verts = polytope_vertices(a, b, dim);
  std::vector<Vec> out;
  for (const auto& v : verts) {
    std::vector<char> blocked(dim, 0);
    for (const auto& f : functionals) {
      if (!(dot(f, v) == Rational(1))) continue;
      for (std::size_t j = 0; j < dim; ++j)
        if (f[j].sign() > 0) blocked[j] = 1;
    }
    if (std::all_of(blocked.begin(), blocked.end(), [](char c) { return c != 0; })) out.push_back(v);
  }
  return out;
}

}  // namespace

// Coordinates linked by a common functional form blocks; the polytope is the
// product of its block polytopes, so its maximal vertices are the products of
// the blocks' maximal vertices.
std::vector<Vec> maximal_vertices(const std::vector<Vec>& functionals, std::size_t dim) {
  for (const auto& f : functionals) {
    if (f.size() != dim) throw StructuralError("maximal_vertices: functional length mismatch");
    if (!is_nonnegative(f)) throw PreconditionError("functional is not positive", to_string(f));
  }
  std::vector<std::size_t> parent(dim);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : functionals) {
    std::vector<std::size_t> s = support(f);
    for (std::size_t k = 1; k < s.size(); ++k) parent[find(s[k])] = find(s[0]);
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<long> block_of(dim, -1);
  for (std::size_t j = 0; j < dim; ++j) {
    std::size_t r = find(j);
    if (block_of[r] < 0) {
      block_of[r] = long(blocks.size());
      blocks.emplace_back();
    }
    blocks[std::size_t(block_of[r])].push_back(j);
  }
  if (blocks.size() <= 1) return maximal_vertices_connected(functionals, dim);
  std::vector<Vec> out{Vec(dim)};
  for (const auto& blk : blocks) {
    std::vector<Vec> rows;
    for (const auto& f : functionals) {
      if (std::none_of(blk.begin(), blk.end(), [&](std::size_t j) { return f[j].sign() > 0; })) continue;
      Vec r;
      for (std::size_t j : blk) r.push_back(f[j]);
      rows.push_back(std::move(r));
    }
    std::vector<Vec> part = maximal_vertices_connected(rows, blk.size());
    std::vector<Vec> next;
    next.reserve(out.size() * part.size());
    for (const auto& v : out)
      for (const auto& p : part) {
        Vec w = v;
        for (std::size_t k = 0; k < blk.size(); ++k) w[blk[k]] = p[k];
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return sorted(std::move(out));
}

std::vector<Vec> sorted(std::vector<Vec> vs) {
  std::sort(vs.begin(), vs.end());
  return vs;
}

}  // namespace fbl
