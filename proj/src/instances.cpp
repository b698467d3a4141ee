#include "fbl/instances.hpp"

#include <algorithm>

#include "fbl/errors.hpp"

namespace fbl {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream), std::uint32_t(stream >> 32)};
  eng_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw StructuralError("Rng::below(0)");
  const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
  while (true) {
    std::uint64_t x = eng_();
    if (x < limit) return x % n;
  }
}

long Rng::range(long lo, long hi) { return lo + long(below(std::uint64_t(hi - lo + 1))); }

Rational Rng::rational(long lo, long hi, long max_den) {
  long q = range(1, max_den);
  return Rational(range(lo * q, hi * q), q);
}

namespace {

Rational twelfths(Rng& rng, long lo, long hi) { return Rational(rng.range(lo, hi), 12); }

void cover_atoms(Rng& rng, std::vector<Vec>& fam, std::size_t dim) {
  for (std::size_t j = 0; j < dim; ++j) {
    bool covered = std::any_of(fam.begin(), fam.end(), [&](const Vec& v) { return !v[j].is_zero(); });
    if (!covered) fam[rng.below(fam.size())][j] = twelfths(rng, 6, 12);
  }
  for (auto& v : fam)
    if (is_zero(v)) v[rng.below(dim)] = twelfths(rng, 6, 12);
}

}  // namespace

FiniteLattice random_lattice(Rng& rng, std::size_t dim, bool ball_form) {
  std::size_t m = std::size_t(rng.range(1, long(dim) + 2));
  std::vector<Vec> fam;
  for (std::size_t k = 0; k < m; ++k) {
    Vec v(dim);
    for (std::size_t j = 0; j < dim; ++j)
      if (rng.below(3) != 0) v[j] = twelfths(rng, 1, 18);
    fam.push_back(std::move(v));
  }
  cover_atoms(rng, fam, dim);
  return ball_form ? FiniteLattice::from_ball(dim, std::move(fam), "rand-ball")
                   : FiniteLattice::from_functionals(dim, std::move(fam), "rand-fun");
}

LegPair random_isometric_legs(Rng& rng, std::size_t max_dim, std::size_t max_rows, std::size_t max_width) {
  const std::size_t n = std::size_t(rng.range(1, long(max_dim)));
  const std::size_t m = std::size_t(rng.range(1, long(max_rows)));
  // Functionals of E with integer numerators over 12; each row may touch at most max_width atoms.
  std::vector<std::vector<long>> num(m, std::vector<long>(n, 0));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (rng.below(4) != 0) num[k][i] = rng.range(1, 12);
  for (std::size_t i = 0; i < n; ++i) {
    bool covered = false;
    for (std::size_t k = 0; k < m; ++k) covered = covered || num[k][i] > 0;
    if (!covered) num[rng.below(m)][i] = rng.range(1, 12);
  }
  for (std::size_t k = 0; k < m; ++k) {
    bool any = false;
    for (long v : num[k]) any = any || v > 0;
    if (!any) num[k][rng.below(n)] = rng.range(1, 12);
  }
  std::vector<Vec> fs(m, Vec(n));
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < n; ++i) fs[k][i] = Rational(num[k][i], 12);
  FiniteLattice e = FiniteLattice::from_functionals(n, fs, "E");

  auto make_leg = [&]() {
    // Row order is a random permutation of the functionals; a spare row may repeat one.
    std::vector<std::size_t> rows(m);
    for (std::size_t k = 0; k < m; ++k) rows[k] = k;
    for (std::size_t k = m; k > 1; --k) std::swap(rows[k - 1], rows[rng.below(k)]);
    if (rows.size() < max_rows && rng.coin()) rows.push_back(rows[rng.below(rows.size())]);
    std::vector<std::size_t> widths;
    std::vector<std::vector<std::pair<std::size_t, long>>> cells;  // per row: (atom, numerator) per cell
    for (std::size_t k : rows) {
      std::vector<std::pair<std::size_t, long>> row;
      std::size_t positive = 0;
      for (std::size_t i = 0; i < n; ++i) positive += num[k][i] > 0;
      std::size_t width = std::max<std::size_t>(positive, std::size_t(rng.range(long(positive), long(max_width))));
      std::size_t spare = width - positive;
      for (std::size_t i = 0; i < n; ++i) {
        if (num[k][i] == 0) continue;
        long v = num[k][i];
        std::size_t parts = 1;
        while (spare > 0 && long(parts) < v && rng.coin()) {
          ++parts;
          --spare;
        }
        for (std::size_t p = 0; p < parts; ++p) {
          long share = (p + 1 == parts) ? v : rng.range(1, v - long(parts - p - 1));
          row.push_back({i, share});
          v -= share;
        }
      }
      while (row.size() < width) row.push_back({n, 0});
      for (std::size_t c = row.size(); c > 1; --c) std::swap(row[c - 1], row[rng.below(c)]);
      widths.push_back(row.size());
      cells.push_back(std::move(row));
    }
    GridShape shape(widths);
    std::vector<Vec> cols(n, Vec(shape.cells()));
    for (std::size_t r = 0; r < cells.size(); ++r)
      for (std::size_t c = 0; c < cells[r].size(); ++c)
        if (cells[r][c].first < n) cols[cells[r][c].first][shape.offset(r) + c] = Rational(cells[r][c].second, 12);
    return LatticeMap(e, FiniteLattice::grid(shape), std::move(cols));
  };
  LatticeMap f1 = make_leg();
  LatticeMap f2 = make_leg();
  return {e, f1, f2};
}

LatticeMap scale_columns(const LatticeMap& f, const Vec& factors) {
  if (factors.size() != f.columns().size()) throw StructuralError("one factor per column");
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < factors.size(); ++i) cols.push_back(scale(factors[i], f.columns()[i]));
  return LatticeMap(f.dom(), f.cod(), std::move(cols));
}

Vec random_factors(Rng& rng, std::size_t n, const Rational& c) {
  Vec out;
  const Rational lo = Rational(1) / c;
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng.below(4)) {
      case 0: out.push_back(c); break;
      case 1: out.push_back(lo); break;
      case 2: out.push_back(Rational(1)); break;
      default: out.push_back(lo + (c - lo) * Rational(rng.range(1, 5), 6)); break;
    }
  }
  return out;
}

LatticeMap random_homomorphism(Rng& rng, const FiniteLattice& dom, const FiniteLattice& cod) {
  const std::size_t n = dom.dim(), m = cod.dim();
  if (m < n) throw StructuralError("no injective homomorphism into a smaller lattice");
  std::vector<std::size_t> owner(m);
  for (std::size_t r = 0; r < m; ++r) owner[r] = r < n ? r : std::size_t(rng.below(n + 1));
  for (std::size_t r = m; r > 1; --r) std::swap(owner[r - 1], owner[rng.below(r)]);
  std::vector<Vec> cols(n, Vec(m));
  for (std::size_t r = 0; r < m; ++r)
    if (owner[r] < n) cols[owner[r]][r] = Rational(rng.range(1, 12), rng.range(1, 6));
  return LatticeMap(dom, cod, std::move(cols));
}

std::vector<Vec> random_tuple(Rng& rng, std::size_t dim, std::size_t length) {
  std::vector<Vec> t;
  for (std::size_t k = 0; k < length; ++k) {
    Vec v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = rng.rational(-2, 2, 4);
    t.push_back(std::move(v));
  }
  return t;
}

}  // namespace fbl
