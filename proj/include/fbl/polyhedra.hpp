#pragma once

// Exact polyhedral primitives: double-description vertex enumeration, polar
// duals, the gauge of a solid convex hull, and order extreme points of
// positive unit balls.

#include <cstddef>
#include <optional>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

// Result of enumerating {x : A x <= b}. Rays are extreme directions of the
// recession cone; `line` is set when the polyhedron contains a whole line.
struct Enumeration {
  std::vector<Vec> vertices;  // sorted lexicographically
  std::vector<Vec> rays;
  std::optional<Vec> line;
  bool bounded() const { return rays.empty() && !line; }
};

Enumeration enumerate_vertices(const std::vector<Vec>& a, const Vec& b, std::size_t dim);

// Vertices of a polytope; PreconditionError (with a ray witness) if unbounded.
std::vector<Vec> polytope_vertices(const std::vector<Vec>& a, const Vec& b, std::size_t dim);

// Vertices of {y : v . y <= 1 for every v}. Requires 0 in the interior of conv(V).
std::vector<Vec> polar_dual(const std::vector<Vec>& vertices, std::size_t dim);

// Gauge of SCH(gens) = conv of the solid hulls of +-gens at x:
//   min sum lambda  s.t.  sum lambda_g |g| >= |x|,  lambda >= 0.
// nullopt means +infinity (some coordinate of supp x is not covered).
// When `weights` is given it receives an optimal lambda indexed like gens.
std::optional<Rational> sch_gauge(const Vec& x, const std::vector<Vec>& gens, Vec* weights = nullptr);

// min over single generators g covering supp x of max_j |x_j| / |g_j|; an
// upper bound for sch_gauge that needs no LP. nullopt if no g covers x.
std::optional<Rational> gauge_upper_bound(const Vec& x, const std::vector<Vec>& gens);

// Irredundant positive generators of SCH(gens); these are exactly its order
// extreme points. Input order is preserved among survivors.
// PreconditionError if the supports miss a coordinate (ball not bounded).
std::vector<Vec> order_extreme_points(const std::vector<Vec>& gens, std::size_t dim);

// Order extreme points of {x >= 0 : f . x <= 1 for all f}: the vertices at
// which every coordinate is blocked by some tight functional.
std::vector<Vec> maximal_vertices(const std::vector<Vec>& functionals, std::size_t dim);

// Sorted copy, for set comparisons.
std::vector<Vec> sorted(std::vector<Vec> vs);

}  // namespace fbl
