#pragma once

// Finite-dimensional Banach lattices R^n with the coordinatewise order and a
// polyhedral lattice norm, and the positive maps between them.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbl/rational.hpp"
#include "fbl/vectorlattice.hpp"

namespace fbl {

// Immutable handle. A norm is described by positive functionals
// (||x|| = max_f f.|x|), by positive ball generators (unit ball = SCH(gens)),
// or both; at least one is present whenever dim > 0. Every atom has positive
// norm. A grid tag records that the lattice is l_inf^N(l_1^{M_k}) on its atoms.
class FiniteLattice {
 public:
  FiniteLattice();  // the zero lattice

  static FiniteLattice from_functionals(std::size_t dim, std::vector<Vec> functionals, std::string label = {});
  static FiniteLattice from_ball(std::size_t dim, std::vector<Vec> generators, std::string label = {});
  static FiniteLattice from_forms(std::size_t dim, std::optional<std::vector<Vec>> functionals,
                                  std::optional<std::vector<Vec>> generators, std::string label = {},
                                  std::optional<GridShape> grid = std::nullopt);
  static FiniteLattice grid(const GridShape& shape, std::string label = {});
  static FiniteLattice l1(std::size_t n);
  static FiniteLattice linf(std::size_t n);

  std::size_t dim() const;
  bool has_functionals() const;
  bool has_ball() const;
  const std::vector<Vec>& functionals() const;  // StructuralError if absent
  const std::vector<Vec>& ball_generators() const;
  const std::optional<GridShape>& grid_shape() const;
  const std::string& label() const;
  FiniteLattice with_label(std::string label) const;

  Rational norm(const Vec& x) const;
  Rational atom_norm(std::size_t j) const;

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

// Both forms present; a missing form is computed by vertex enumeration.
FiniteLattice complete_forms(const FiniteLattice& lat);

// Sorted order extreme points of the unit ball; equal iff the norms agree.
std::vector<Vec> canonical_oeps(const FiniteLattice& lat);
bool same_norm(const FiniteLattice& a, const FiniteLattice& b);

// The dual lattice: its functionals are the order extreme points of the
// primal ball and its ball generators the irredundant primal functionals.
FiniteLattice dualize(const FiniteLattice& lat);

// Linear map given by its columns: columns[j] is the image of the atom e_j.
class LatticeMap {
 public:
  LatticeMap(FiniteLattice dom, FiniteLattice cod, std::vector<Vec> columns);

  const FiniteLattice& dom() const { return dom_; }
  const FiniteLattice& cod() const { return cod_; }
  const std::vector<Vec>& columns() const { return columns_; }
  const Rational& entry(std::size_t row, std::size_t col) const { return columns_[col][row]; }

  Vec apply(const Vec& x) const;
  LatticeMap scaled(const Rational& r) const;
  LatticeMap with_dom(FiniteLattice dom) const;
  LatticeMap with_cod(FiniteLattice cod) const;

  friend bool operator==(const LatticeMap& a, const LatticeMap& b) { return a.columns_ == b.columns_; }

 private:
  FiniteLattice dom_, cod_;
  std::vector<Vec> columns_;
};

LatticeMap compose(const LatticeMap& g, const LatticeMap& f);  // g o f
LatticeMap identity_map(const FiniteLattice& lat);

struct HomomorphismReport {
  bool ok = true;
  std::string reason;  // names the negative entry or overlapping columns
};
// Nonnegative matrix with pairwise disjoint column supports.
HomomorphismReport check_homomorphism(const LatticeMap& f);

// c_upper = ||f||, c_lower = sup ||x|| / ||f x|| (nullopt: f has a kernel).
// f is a C-embedding iff both are <= C. Witnesses are domain vectors at which
// the extremes are attained.
struct EmbeddingCertificate {
  Rational c_upper;
  Vec upper_witness;
  std::optional<Rational> c_lower;
  Vec lower_witness;

  bool within(const Rational& c) const { return c_lower && c_upper <= c && *c_lower <= c; }
  bool isometric() const { return within(Rational(1)); }
  Rational constant() const;  // max(c_upper, c_lower); PreconditionError if not injective
};

// PreconditionError if f is not a lattice homomorphism.
EmbeddingCertificate certify_embedding(const LatticeMap& f);

// sup ||f x|| / ||x|| for an arbitrary linear map, by checking the extreme
// points of the domain ball.
Rational operator_norm(const LatticeMap& f);

// l_inf direct sum and its two isometric injections.
FiniteLattice direct_sum_infty(const FiniteLattice& a, const FiniteLattice& b);
std::pair<LatticeMap, LatticeMap> direct_sum_injections(const FiniteLattice& a, const FiniteLattice& b,
                                                        const FiniteLattice& sum);

// Cross-checks of the equivalent descriptions of a polyhedral lattice norm.
struct EquivalenceAudit {
  std::size_t oep_count = 0;
  bool oep_routes_agree = false;       // pruned generators vs maximal vertices
  std::size_t ep_count = 0;            // sum over OEPs p of 2^{|supp p|}
  std::optional<bool> ep_enumeration_agrees;  // full signed enumeration, small dims only
  std::size_t dual_oep_count = 0;
  bool dual_routes_agree = false;
  bool grid_isometric = false;         // embed_into_grid certifies (1, 1)
  std::string failure;                 // empty iff every check passed
  bool passed() const { return failure.empty(); }
};
EquivalenceAudit equivalences_audit(const FiniteLattice& lat, std::size_t full_enumeration_max_dim = 4);

}  // namespace fbl
