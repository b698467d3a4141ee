#pragma once

// Seeded generators of random lattices, legs and tuples. Draws depend only on
// the raw 64-bit Mersenne Twister stream, so a seed fixes every output on
// every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "fbl/lattices.hpp"

namespace fbl {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  long range(long lo, long hi);          // uniform in [lo, hi]
  bool coin() { return below(2) == 1; }
  // p / q with p uniform in [lo * q, hi * q] and q uniform in [1, max_den].
  Rational rational(long lo, long hi, long max_den);

 private:
  std::mt19937_64 eng_;
};

// Random polytopal lattice of the given dimension; every coefficient has
// denominator at most 12.
FiniteLattice random_lattice(Rng& rng, std::size_t dim, bool ball_form);

struct LegPair {
  FiniteLattice e;
  LatticeMap f1, f2;  // isometric, into grids
};

// dim E <= max_dim, grids with at most max_rows rows of width at most max_width,
// all coefficients multiples of 1/12.
LegPair random_isometric_legs(Rng& rng, std::size_t max_dim, std::size_t max_rows, std::size_t max_width);

// f with column i multiplied by factors[i]; factors in [1/c, c] keep a
// c-embedding of an isometry.
LatticeMap scale_columns(const LatticeMap& f, const Vec& factors);
Vec random_factors(Rng& rng, std::size_t n, const Rational& c);

// Random lattice homomorphism with pairwise disjoint positive columns.
LatticeMap random_homomorphism(Rng& rng, const FiniteLattice& dom, const FiniteLattice& cod);

std::vector<Vec> random_tuple(Rng& rng, std::size_t dim, std::size_t length);

}  // namespace fbl
