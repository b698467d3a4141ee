#pragma once

// Isometric and near-isometric embeddings: functionals into l_inf(l_1) grids,
// renorming a target so that a C-embedding becomes isometric, replacing a
// (1+eps)-embedding by an isometric pair, and snapping almost-disjoint
// elements onto a genuinely disjoint family.

#include <optional>
#include <vector>

#include "fbl/lattices.hpp"

namespace fbl {

enum class GridLayout {
  Full,     // every row has width dim X and cell (i, j) holds f_i(e_j)
  Compact,  // row i only keeps the cells j in supp f_i
};

// phi(e_j) = sum_i f_i(e_j) u(i, j). Isometric when the functionals describe
// the norm; contractive for any subset. Default functionals: the irredundant
// ones. PreconditionError if some atom is annihilated by every functional.
LatticeMap embed_into_grid(const FiniteLattice& lat, GridLayout layout = GridLayout::Full,
                           const std::optional<std::vector<Vec>>& functionals = std::nullopt);

// The span of pairwise disjoint positive atoms of `ambient`, with the
// induced norm, and its inclusion into `ambient`.
LatticeMap induced_inclusion(const FiniteLattice& ambient, const std::vector<Vec>& atoms, std::string label = {});

enum class RenormCase { Expansion, Contraction, General };

struct Renorming {
  FiniteLattice lattice;  // the target X with the new norm
  LatticeMap map;         // f into the renormed target; isometric
  RenormCase which;
  Rational scale;         // weight of the old ball in the new one
  EmbeddingCertificate before;
};

// New unit ball SCH(f(B_A) u scale * B_X). scale = 1 when f is already an
// expansion, otherwise 1 / max(c_upper, c_lower). The old and new norms stay
// within a factor c of each other on X.
Renorming renorm_for_isometry(const LatticeMap& f, const Rational& c);

struct IsometrizedPair {
  FiniteLattice z;
  LatticeMap g;  // X -> Z, isometric
  LatticeMap h;  // Y -> Z, isometric
  Rational defect;  // ||g - h f||, at most eps
};

// For a (1+eps)-embedding f : X -> Y. Uses X (+)_inf f(X) with
// j1(x) = x (+) f(x)/(1+eps) and j2(f x) = x/(1+eps) (+) f(x), amalgamated
// with Y over f(X) unless f is onto.
IsometrizedPair isometrize_pair(const LatticeMap& f, const Rational& eps);

struct Snap {
  LatticeMap map;                         // F -> ambient, a lattice homomorphism
  Rational distortion;                    // certified embedding constant
  std::optional<Rational> reference_error;  // max_i ||e_i - g(e_i)||
};

// g(e_i) = x_i - x_i ^ (sup_{k != i} x_k) for the almost-disjoint positive
// family x. F is the span of `reference` (exact disjoint atoms) with the
// induced norm when given, else the span of the snapped family itself.
// PreconditionError if some snapped element vanishes.
Snap snap_sublattice(const FiniteLattice& ambient, const std::vector<Vec>& approx,
                     const std::optional<std::vector<Vec>>& reference = std::nullopt);

}  // namespace fbl
