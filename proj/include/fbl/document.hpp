#pragma once

// Versioned JSON documents for every object the tools exchange. Rationals are
// strings in lowest terms, keys are emitted in a fixed order, and readers
// reject unknown or missing fields with a ParseError naming the JSON path.

#include <string>
#include <vector>

#include <json.hpp>

#include "fbl/amalgam.hpp"
#include "fbl/branching.hpp"
#include "fbl/fraisse.hpp"
#include "fbl/lattices.hpp"
#include "fbl/terms.hpp"

namespace fbl {

using Json = nlohmann::ordered_json;

inline constexpr int kDocumentVersion = 1;

// Payload codecs; `at` is the JSON path used in error messages.
Json rational_json(const Rational& r);
Rational rational_from(const Json& j, const std::string& at);
Json vec_json(const Vec& v);
Vec vec_from(const Json& j, const std::string& at);
Json lattice_json(const FiniteLattice& lat);
FiniteLattice lattice_from(const Json& j, const std::string& at);
Json map_json(const LatticeMap& f);
LatticeMap map_from(const Json& j, const std::string& at);
Json term_json(const Term& t);
Term term_from(const Json& j, const std::string& at);
Json certificate_json(const EmbeddingCertificate& c);
EmbeddingCertificate certificate_from(const Json& j, const std::string& at);

// {"kind": kind, "version": 1} followed by the payload's fields.
Json make_document(const std::string& kind, const Json& payload);
// Two-space indented with a trailing newline.
std::string dump_document(const Json& doc);
// Checks kind and version and returns the payload without them.
Json read_document(const std::string& text, const std::string& kind);
std::string document_kind(const std::string& text);

std::string lattice_document(const FiniteLattice& lat);
FiniteLattice parse_lattice_document(const std::string& text);

std::string map_document(const LatticeMap& f);
LatticeMap parse_map_document(const std::string& text);

std::string tuple_document(const GeneratedTuple& g);
GeneratedTuple parse_tuple_document(const std::string& text);

// The legs f_j : E -> F_j travel with the result, together with the composites
// g1 f1 and g2 f2; a reader rejects composites that do not match.
struct AmalgamDocument {
  LatticeMap f1, f2;
  PushoutResult result;
};
std::string pushout_document(const LatticeMap& f1, const LatticeMap& f2, const PushoutResult& p);
AmalgamDocument parse_pushout_document(const std::string& text);

std::string chain_document(const ChainState& s);
ChainState parse_chain_document(const std::string& text);

std::string tree_document(const BranchTree& t);
BranchTree parse_tree_document(const std::string& text);

// Reports carry "report": name after the version.
std::string report_document(const std::string& name, const Json& payload);
Json read_report(const std::string& text, const std::string& name);

std::string two_generator_document(const TwoGenerator& g);
TwoGenerator parse_two_generator_document(const std::string& text);

}  // namespace fbl
