#pragma once

// Generated sublattices, certified bounds on the Fraisse distance between
// generating tuples, and a finite chain of amalgams that approximates the
// homogeneous lattice.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbl/amalgam.hpp"
#include "fbl/lattices.hpp"
#include "fbl/terms.hpp"

namespace fbl {

// A tuple of vectors in a lattice. When present, witness[t] is a term whose
// value on the tuple is the t-th atom of the lattice.
struct GeneratedTuple {
  FiniteLattice lattice;
  std::vector<Vec> tuple;
  std::optional<std::vector<Term>> witness;
};

// StructuralError on a length mismatch, InvariantError on a failing witness.
void validate(const GeneratedTuple& g);

// <a> inside `ambient`. Its atoms are the positive rays of the coordinate
// profiles (a_1[j], ..., a_n[j]), ordered by first coordinate; a_i =
// sum_t coords[i][t] atom_t, and witness[t] evaluated on a is atom_t.
struct GeneratedSublattice {
  LatticeMap inclusion;
  std::vector<Vec> coords;
  std::vector<Term> witness;

  GeneratedTuple as_tuple() const;  // <a> with its own generating tuple
};
GeneratedSublattice generated_sublattice(const FiniteLattice& ambient, const std::vector<Vec>& tuple);

// The lattice homomorphism T : <a> -> target with T(a_i) = b_i, when one
// exists and is isometric; otherwise a diagnosis.
struct Correspondence {
  GeneratedSublattice source;
  std::optional<LatticeMap> map;
  std::string diagnosis;
};
Correspondence tuple_correspondence(const FiniteLattice& a_lattice, const std::vector<Vec>& a,
                                    const FiniteLattice& b_lattice, const std::vector<Vec>& b);

// max_i ||phi1(a_i) - phi2(b_i)|| for isometric phi_j into a common lattice.
struct UpperWitness {
  FiniteLattice common;
  LatticeMap phi1, phi2;
  Rational value;
  std::string strategy;
};

// |(||t(a)|| - ||t(b)||)| / Lip(t).
struct LowerWitness {
  std::optional<Term> term;
  Rational norm_a, norm_b, lip, value;
};

struct DistanceBound {
  LowerWitness lower;
  UpperWitness upper;
};

struct SearchBudget {
  std::size_t permutations = 720;
  bool snap = true;
};

// Best certificate among the sup-sum placement, norm-preserving atom
// permutations (equal dimensions) and amalgamation over the snapped image of
// <a> in the other lattice, in both directions. Ties keep the earlier strategy.
UpperWitness dk_upper(const GeneratedTuple& a, const GeneratedTuple& b, const SearchBudget& budget = {});

// Largest normalised norm gap over enumerate_terms(|a|, depth, term_limit).
LowerWitness dk_lower(const GeneratedTuple& a, const GeneratedTuple& b, std::size_t depth = 2,
                      std::size_t term_limit = 5000);

DistanceBound distance(const GeneratedTuple& a, const GeneratedTuple& b, const SearchBudget& budget = {},
                       std::size_t depth = 2);

// Recomputes the value after certifying both maps; InvariantError if either
// map is not isometric or the stored value is wrong.
Rational verify_upper(const UpperWitness& w, const GeneratedTuple& a, const GeneratedTuple& b);

// Amalgamates the two common lattices over <b>; the value is at most
// w_ab.value + w_bc.value.
UpperWitness compose_witnesses(const GeneratedTuple& a, const UpperWitness& w_ab, const GeneratedTuple& b,
                               const UpperWitness& w_bc, const GeneratedTuple& c);

struct ChainTask {
  std::size_t stage = 0;          // stage holding `source`
  std::vector<Vec> source;
  FiniteLattice target;
  std::vector<Vec> target_tuple;
  long priority = 0;
  std::string origin;
  std::optional<std::size_t> catalogue_index;  // record the target as a copy
};

struct CatalogueCopy {
  std::size_t catalogue_index = 0;
  std::vector<Vec> atoms;  // images of the catalogue atoms in the last stage
};

struct StepRecord {
  std::string origin;
  bool accepted = false;
  std::string diagnosis;
  std::size_t dim = 0;                     // dimension of the last stage afterwards
  std::optional<LatticeMap> target_embedding;  // target -> new stage
};

// stages[0] <= stages[1] <= ... with connecting[n] : stages[n] -> stages[n+1]
// isometric and to_last[n] the composite into the last stage.
struct ChainState {
  std::vector<FiniteLattice> catalogue;
  std::vector<FiniteLattice> stages;
  std::vector<LatticeMap> connecting;
  std::vector<LatticeMap> to_last;
  std::vector<ChainTask> queue;
  std::vector<CatalogueCopy> copies;
  std::vector<StepRecord> records;
  std::uint64_t seed = 0;
  std::size_t max_dim = 0;
};

// A one-stage chain on `first`; catalogue copies are recorded for it.
ChainState start_chain(std::vector<FiniteLattice> catalogue, std::size_t first, std::uint64_t seed,
                       std::size_t max_dim);

// Runs the highest-priority task (earliest among equals). A rejected task
// leaves the stages unchanged and is recorded with its diagnosis.
ChainState chain_step(ChainState state);

// Starts on catalogue[0] and runs `steps` steps, generating one task per empty
// queue from Rng(seed, step): sup-sum placements of catalogue lattices,
// splittings of a sparse positive element along a catalogue element of the
// same norm, and automorphic re-embeddings of recorded copies. Only the
// last kind is generated once the last stage has dimension >= max_dim.
ChainState build_chain(std::vector<FiniteLattice> catalogue, std::size_t steps, std::uint64_t seed,
                       std::size_t max_dim = 24);

// Runs `steps` more steps the same way; the generator for a step is keyed by
// the number of steps already recorded, so build_chain(n + m) equals
// extend_chain(build_chain(n), m).
ChainState extend_chain(ChainState state, std::size_t steps);

// Checks connecting certificates, cached composites and equivalence audits;
// returns an empty string when all pass.
std::string audit_chain(const ChainState& state);

struct ProbeReport {
  bool refused = false;
  bool success = false;
  std::string reason;
  std::size_t steps = 0;
  std::optional<LatticeMap> realizing;  // stage of a -> last stage of `state`
  Rational distance;                    // max_i ||realizing(a_i) - b_i|| in the last stage
  std::optional<Rational> upper;
  std::optional<LowerWitness> lower;
  ChainState state;
};

// Extends the chain by one targeted task so that a copy of the stage of a
// lands within eps of b. Refuses when no upper certificate below eps is found.
ProbeReport homogeneity_probe(const ChainState& state, std::size_t stage_a, const std::vector<Vec>& a,
                              std::size_t stage_b, const std::vector<Vec>& b, const Rational& eps,
                              const SearchBudget& budget = {});

}  // namespace fbl
