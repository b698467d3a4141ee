#pragma once

// Amalgamation of lattice embeddings over a common finite lattice E.

#include <optional>
#include <string>
#include <vector>

#include "fbl/embeddings.hpp"
#include "fbl/lattices.hpp"

namespace fbl {

struct NormalizedLeg {
  LatticeMap leg;            // E -> grid
  LatticeMap cod_embedding;  // F -> grid, isometric
};

// Composes f : E -> F with an isometric embedding of F into a grid. A grid
// codomain is kept as is. With pad_rows, rows are duplicated (always the row
// meeting the image of E in the fewest cells) until there are pad_rows rows.
NormalizedLeg normalize_to_full(const LatticeMap& f, GridLayout layout = GridLayout::Compact,
                                std::optional<std::size_t> pad_rows = std::nullopt);

// A(k, i) = sum_j f(e_i)(k, j) for a map into a grid.
std::vector<Vec> induced_matrix(const LatticeMap& f);

struct PushoutResult {
  FiniteLattice g;             // the amalgam G, in ball form
  LatticeMap g1, g2;           // F_j -> G, scaled by c
  LatticeMap raw_g1, raw_g2;   // contractive, c^2-embeddings
  EmbeddingCertificate cert1, cert2, raw_cert1, raw_cert2;
  std::vector<std::string> atom_legend;
  Rational c;
};

// The pushout square over E for c-embeddings f_j : E -> grid_j. Atoms of G are
// the tensor atoms u(p) (x) v(q) with p in supp f1(e_i), q in supp f2(e_i) for
// the same i, plus the cells outside both ideals; the ball is generated by the
// images of both grid balls. g1 f1 = g2 f2 exactly.
PushoutResult pushout(const LatticeMap& f1, const LatticeMap& f2, const Rational& c);

enum class AmalgamRoute {
  Grid,    // normalise both codomains into grids, then take the pushout
  Direct,  // the same construction on the atoms of the codomains themselves
  Auto,    // Grid when both codomains carry functionals, else Direct
};

// c-embeddings f_j : E -> F_j into an amalgam G with c-embeddings g_j,
// g1 f1 = g2 f2. For c = 1 every map is isometric.
PushoutResult amalgamate(const LatticeMap& f1, const LatticeMap& f2, const Rational& c,
                         AmalgamRoute route = AmalgamRoute::Auto);

enum class CEmbeddingMode {
  Balanced,      // g_j is a c_j-embedding
  OneIsometric,  // g1 isometric, g2 a c1 c2-embedding
};

PushoutResult amalgamate_c_embeddings(const LatticeMap& f1, const Rational& c1, const LatticeMap& f2,
                                      const Rational& c2, CEmbeddingMode mode);

struct NearAmalgam {
  FiniteLattice h;
  LatticeMap g1, g2;  // isometric
  Rational bound;     // ||g1 f1 - g2 f2||, at most 2 eps
};

// (1+eps)-embeddings f_j : E -> F_j into a common lattice by isometries with
// ||g1 f1 - g2 f2|| <= 2 eps.
NearAmalgam near_amalgamate(const LatticeMap& f1, const LatticeMap& f2, const Rational& eps);

struct RowDomination {
  bool ok = true;
  std::vector<std::optional<Rational>> forward;   // gauge of each row of A in SCH(rows of B)
  std::vector<std::optional<Rational>> backward;  // and of each row of B in SCH(rows of A)
  std::optional<bool> same_hull;                  // set in the isometric case
};

// Rows of A lie in c^2 SCH(rows of B) and vice versa; for isometric legs the
// two hulls coincide.
RowDomination check_row_domination(const std::vector<Vec>& a, const std::vector<Vec>& b, const Rational& c,
                                   bool isometric);

}  // namespace fbl
