#pragma once

// Finite-depth branching trees of positive elements, the dyadic approximants
// of C(Delta, L_1[0, 1]), two-element generation of the leaf span, and band
// projections onto subtrees.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fbl/lattices.hpp"
#include "fbl/terms.hpp"

namespace fbl {

using BranchPath = std::vector<std::size_t>;  // sigma = (b_1, ..., b_k), b_n < |A_n|

struct BranchNode {
  BranchPath path;
  Vec element;                        // x_sigma in the ambient lattice
  std::size_t parent = 0;             // index in the previous level
  std::vector<std::size_t> children;  // indices in the next level, ordered by last letter
};

// levels[n] holds S_n. spans[n] is span(S_n) in the basis x_sigma / ||x_sigma||
// (level order) and inclusions[n] : spans[n] -> spans[n+1].
struct BranchTree {
  FiniteLattice ambient;
  std::vector<std::size_t> branching;  // |A_1|, ..., |A_D|
  std::vector<std::vector<BranchNode>> levels;
  std::vector<FiniteLattice> spans;
  std::vector<LatticeMap> inclusions;

  std::size_t depth() const { return branching.size(); }
  std::optional<std::size_t> find(const BranchPath& path) const;  // index in levels[path.size()]
  LatticeMap level_inclusion(std::size_t n) const;                // spans[n] -> ambient
};

// Internal nodes are the sums of their children. Leaves come in
// lexicographic path order; PreconditionError unless they are positive,
// nonzero and pairwise disjoint.
BranchTree tree_from_leaves(const FiniteLattice& ambient, std::vector<std::size_t> branching,
                            const std::vector<Vec>& leaves);

// Rebuilds parent and child links and the inclusions from stored levels and
// spans. StructuralError when the paths do not form the full tree of
// `branching` or a span has the wrong dimension.
BranchTree assemble_tree(FiniteLattice ambient, std::vector<std::size_t> branching,
                         std::vector<std::vector<BranchNode>> levels, std::vector<FiniteLattice> spans);

// A_n = {branch bit} x {interval half}, letter 2 b + h. The ambient lattice is
// l_inf^{2^D}(l_1^{2^D}) on the normalised leaf atoms; level n lists its nodes
// in grid order (row = branch bits, column = interval halves) and spans[n] is
// the grid l_inf^{2^n}(l_1^{2^n}). PreconditionError when D > 3.
BranchTree build_dyadic_tree(std::size_t depth);

// Sibling disjointness, partition identities and isometric inclusions; empty
// when all hold.
std::string check_tree(const BranchTree& tree);

// u = x_root and v = sum_sigma a_sigma x_sigma over one level. Evaluating
// recoverers[i] at (u, v) gives multiples[i] times the i-th node exactly.
struct TwoGenerator {
  Vec u, v;
  std::vector<Rational> coefficients;  // a_sigma, leaf order
  std::vector<Term> recoverers;        // over x1 = u, x2 = v
  std::vector<Rational> multiples;     // positive
};

// Level-1 coefficients are 1, 2, ..., |A_1|; a child m of sigma gets
// a_sigma + m h_k with h_k = h_{k-1} / |A_k|.
std::vector<Rational> branch_coefficients(const BranchTree& tree, std::size_t level);

// The construction restricted to the nodes of `level` (1 <= level <= D):
// the largest coefficient is isolated by (v / s - u)_+, every other one by
// ((v - s u)_+ - C (v - r u)_+)_+ with s, r the midpoints to its neighbours
// (s = a / 2 for the smallest) and C the least constant that cancels the
// coefficients above r.
TwoGenerator two_generator(const BranchTree& tree, std::size_t level);
TwoGenerator two_generator(const BranchTree& tree);  // level = depth

// recoverers[i] evaluated at the tuple equals multiples[i] times the i-th node
// of `level`; empty when all hold.
std::string check_reconstruction(const BranchTree& tree, std::size_t level, const TwoGenerator& g);

// For the level-k recoverers: any v' with |v' - v_k| <= drift u moves every
// recoverer by at most lipschitz * drift * ||u|| <= eps.
struct LevelBudget {
  std::size_t level = 0;
  Rational lipschitz;  // max over recoverers of lipschitz_in(., v)
  std::optional<Rational> drift;  // eps / (lipschitz ||u||); nullopt when lipschitz = 0
};
// One entry per level 1..D; PreconditionError when eps < 0.
std::vector<LevelBudget> coefficient_budget(const BranchTree& tree, const Rational& eps);

struct BandReport {
  bool homomorphism = false;
  bool contractive = false;
  bool idempotent = false;
  bool identity_on_band = false;
  bool disjoint_decomposition = false;
  bool meet_compatible = false;
  std::string failure;  // empty iff every check passed
  bool passed() const { return failure.empty(); }
};

struct BandProjection {
  LatticeMap projection;  // on spans[D]
  std::vector<std::size_t> band;  // leaf indices below sigma
  BandReport report;
};

// Keeps the leaf atoms below sigma and zeroes the others. PreconditionError
// when sigma is not a node.
BandProjection band_project(const BranchTree& tree, const BranchPath& sigma);

}  // namespace fbl
