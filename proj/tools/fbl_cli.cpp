// Command-line front end. Documents go to standard output; diagnostics go to
// standard error. Exit codes: 2 malformed input, 3 failed precondition (with
// witness), 4 internal invariant violation.

#include <CLI11.hpp>

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fbl/amalgam.hpp"
#include "fbl/branching.hpp"
#include "fbl/document.hpp"
#include "fbl/embeddings.hpp"
#include "fbl/errors.hpp"
#include "fbl/fraisse.hpp"
#include "selftest.hpp"

using namespace fbl;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ParseError(path + ": cannot write file");
}

// Prefixes parse errors from a document with its file name.
template <class F>
auto from_file(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + what);
  }
}

// "[a, b, ...]" or "[[a, b], [c, d]]" with rational entries.
class ArgParser {
 public:
  ArgParser(std::string text, std::string name) : s_(std::move(text)), name_(std::move(name)) {}

  Vec vector() {
    Vec v;
    expect('[');
    skip();
    if (peek() == ']') {
      ++i_;
      return v;
    }
    for (;;) {
      skip();
      std::size_t start = i_;
      while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && !std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      try {
        v.push_back(Rational::parse(s_.substr(start, i_ - start)));
      } catch (const ParseError& e) {
        throw ParseError(name_ + " at offset " + std::to_string(start) + ": " + e.what());
      }
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      return v;
    }
  }

  std::vector<Vec> vectors() {
    std::vector<Vec> out;
    expect('[');
    skip();
    if (peek() == ']') {
      ++i_;
      return out;
    }
    for (;;) {
      skip();
      out.push_back(vector());
      skip();
      if (peek() == ',') {
        ++i_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  void end() {
    skip();
    if (i_ != s_.size()) throw ParseError(name_ + " at offset " + std::to_string(i_) + ": trailing characters");
  }

 private:
  char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (peek() != c) throw ParseError(name_ + " at offset " + std::to_string(i_) + ": expected '" + c + "'");
    ++i_;
  }
  std::string s_, name_;
  std::size_t i_ = 0;
};

Vec parse_vector_arg(const std::string& text, const std::string& name) {
  ArgParser p(text, name);
  Vec v = p.vector();
  p.end();
  return v;
}

std::vector<Vec> parse_vectors_arg(const std::string& text, const std::string& name) {
  ArgParser p(text, name);
  std::vector<Vec> v = p.vectors();
  p.end();
  return v;
}

Rational parse_rational_arg(const std::string& text, const std::string& name) {
  try {
    return Rational::parse(text);
  } catch (const ParseError& e) {
    throw ParseError(name + ": " + e.what());
  }
}

std::vector<std::size_t> parse_indices_arg(const std::string& text, const std::string& name) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(name + ": '" + item + "' is not an index");
    out.push_back(std::stoul(item));
  }
  return out;
}

Json cert_report(const LatticeMap& f) {
  Json j;
  HomomorphismReport h = check_homomorphism(f);
  j["homomorphism"] = h.ok;
  if (!h.ok) {
    j["reason"] = h.reason;
    return j;
  }
  EmbeddingCertificate c = certify_embedding(f);
  j["certificate"] = certificate_json(c);
  j["isometric"] = c.isometric();
  return j;
}

int cmd_norm(const std::string& lattice, const std::string& vector) {
  FiniteLattice l = from_file(lattice, parse_lattice_document);
  Vec x = parse_vector_arg(vector, "vector");
  if (x.size() != l.dim())
    throw ParseError("vector: expected " + std::to_string(l.dim()) + " entries, found " + std::to_string(x.size()));
  std::cout << l.norm(x).str() << "\n";
  return 0;
}

int cmd_check_map(const std::string& path) {
  const std::string text = read_file(path);
  const std::string kind = document_kind(text);
  if (kind == "map") {
    std::cout << report_document("check_map", cert_report(from_file(path, parse_map_document)));
    return 0;
  }
  if (kind != "pushout") throw ParseError(path + ": $.kind: expected 'map' or 'pushout', found '" + kind + "'");
  AmalgamDocument d = from_file(path, parse_pushout_document);
  const PushoutResult& p = d.result;
  Json maps = Json::array();
  std::string mismatch;
  auto entry = [&](const std::string& name, const LatticeMap& f, const EmbeddingCertificate& stored) {
    Json j{{"map", name}};
    j.update(cert_report(f));
    bool same = false;
    if (j["homomorphism"].get<bool>()) {
      EmbeddingCertificate c = certify_embedding(f);
      same = c.c_upper == stored.c_upper && c.c_lower == stored.c_lower;
    }
    j["matches_document"] = same;
    if (!same && mismatch.empty()) mismatch = name;
    maps.push_back(std::move(j));
  };
  entry("g1", p.g1, p.cert1);
  entry("g2", p.g2, p.cert2);
  entry("raw_g1", p.raw_g1, p.raw_cert1);
  entry("raw_g2", p.raw_g2, p.raw_cert2);
  Json out;
  out["commutes"] = compose(p.g1, d.f1) == compose(p.g2, d.f2);
  out["maps"] = std::move(maps);
  std::cout << report_document("check_pushout", out);
  if (!mismatch.empty()) throw PreconditionError("stored certificate does not re-verify", mismatch);
  return 0;
}

int cmd_embed(const std::string& path, const std::string& functionals, const std::string& layout) {
  FiniteLattice l = from_file(path, parse_lattice_document);
  GridLayout gl = layout == "compact" ? GridLayout::Compact : GridLayout::Full;
  std::optional<std::vector<Vec>> fs;
  if (!functionals.empty()) {
    FiniteLattice lc = l.has_functionals() ? l : complete_forms(l);
    fs.emplace();
    for (std::size_t i : parse_indices_arg(functionals, "--functionals")) {
      if (i >= lc.functionals().size())
        throw ParseError("--functionals: index " + std::to_string(i) + " exceeds " + std::to_string(lc.functionals().size()) + " functionals");
      fs->push_back(lc.functionals()[i]);
    }
  }
  std::cout << map_document(embed_into_grid(l, gl, fs));
  return 0;
}

int cmd_amalgamate(const std::string& p1, const std::string& p2, const std::string& c_text, const std::string& c2_text,
                   const std::string& mode) {
  LatticeMap f1 = from_file(p1, parse_map_document), f2 = from_file(p2, parse_map_document);
  const Rational c = parse_rational_arg(c_text, "--c");
  const Rational c2 = c2_text.empty() ? c : parse_rational_arg(c2_text, "--c2");
  PushoutResult p = [&] {
    if (mode.empty()) return amalgamate(f1, f2, c);
    return amalgamate_c_embeddings(f1, c, f2, c2, mode == "balanced" ? CEmbeddingMode::Balanced : CEmbeddingMode::OneIsometric);
  }();
  bool kept = compose(p.g1, f1) == compose(p.g2, f2);
  if (mode == "one_isometric") {
    kept = kept && p.cert1.isometric() && p.cert2.within(c * c2);
  } else {
    kept = kept && p.cert1.within(c) && p.cert2.within(c2);
  }
  if (!kept) throw InvariantError("amalgam certificates violate the promised constant");
  std::cout << pushout_document(f1, f2, p);
  return 0;
}

int cmd_renorm(const std::string& path, const std::string& c_text) {
  LatticeMap f = from_file(path, parse_map_document);
  Renorming r = renorm_for_isometry(f, parse_rational_arg(c_text, "--c"));
  std::cout << lattice_document(r.lattice);
  return 0;
}

GeneratedTuple load_tuple(const std::string& path) {
  GeneratedTuple g = from_file(path, parse_tuple_document);
  try {
    validate(g);
  } catch (const InvariantError& e) {
    throw PreconditionError("tuple witness does not evaluate to the atoms", path + ": " + e.what());
  }
  return g;
}

int cmd_distance(const std::string& pa, const std::string& pb, std::size_t budget, std::size_t depth, bool no_snap) {
  GeneratedTuple a = load_tuple(pa), b = load_tuple(pb);
  SearchBudget sb;
  sb.permutations = budget;
  sb.snap = !no_snap;
  DistanceBound d = distance(a, b, sb, depth);
  verify_upper(d.upper, a, b);
  Json lower;
  lower["value"] = rational_json(d.lower.value);
  if (d.lower.term) lower["term"] = term_json(*d.lower.term);
  lower["norm_a"] = rational_json(d.lower.norm_a);
  lower["norm_b"] = rational_json(d.lower.norm_b);
  lower["lipschitz"] = rational_json(d.lower.lip);
  Json upper;
  upper["value"] = rational_json(d.upper.value);
  upper["strategy"] = d.upper.strategy;
  upper["common"] = lattice_json(d.upper.common);
  upper["phi1"] = Json::array();
  for (const auto& col : d.upper.phi1.columns()) upper["phi1"].push_back(vec_json(col));
  upper["phi2"] = Json::array();
  for (const auto& col : d.upper.phi2.columns()) upper["phi2"].push_back(vec_json(col));
  Json out;
  out["lower"] = std::move(lower);
  out["upper"] = std::move(upper);
  std::cout << report_document("distance", out);
  return 0;
}

int cmd_chain_build(const std::vector<std::string>& catalogue, std::uint64_t seed, std::size_t steps, std::size_t max_dim) {
  std::vector<FiniteLattice> cat;
  for (const auto& p : catalogue) cat.push_back(from_file(p, parse_lattice_document));
  std::cout << chain_document(build_chain(std::move(cat), steps, seed, max_dim));
  return 0;
}

int cmd_chain_step(const std::string& path, std::size_t steps) {
  std::cout << chain_document(extend_chain(from_file(path, parse_chain_document), steps));
  return 0;
}

int cmd_chain_audit(const std::string& path) {
  const std::string failure = audit_chain(from_file(path, parse_chain_document));
  Json out;
  out["ok"] = failure.empty();
  if (!failure.empty()) out["failure"] = failure;
  std::cout << report_document("chain_audit", out);
  if (!failure.empty()) throw PreconditionError("chain audit failed", failure);
  return 0;
}

int cmd_chain_probe(const std::string& path, const std::string& copies, std::size_t stage_a, const std::string& a_text,
                    std::size_t stage_b, const std::string& b_text, const std::string& eps_text, std::size_t budget,
                    const std::string& out_path) {
  ChainState s = from_file(path, parse_chain_document);
  std::vector<Vec> a, b;
  if (!copies.empty()) {
    std::vector<std::size_t> ij = parse_indices_arg(copies, "--copies");
    if (ij.size() != 2) throw ParseError("--copies: expected two indices");
    for (std::size_t i : ij)
      if (i >= s.copies.size()) throw ParseError("--copies: no copy " + std::to_string(i));
    stage_a = stage_b = s.stages.size() - 1;
    a = s.copies[ij[0]].atoms;
    b = s.copies[ij[1]].atoms;
  } else {
    a = parse_vectors_arg(a_text, "--a");
    b = parse_vectors_arg(b_text, "--b");
  }
  SearchBudget sb;
  sb.permutations = budget;
  ProbeReport r = homogeneity_probe(s, stage_a, a, stage_b, b, parse_rational_arg(eps_text, "--eps"), sb);
  Json out;
  out["refused"] = r.refused;
  out["success"] = r.success;
  out["reason"] = r.reason;
  out["steps"] = r.steps;
  out["distance"] = rational_json(r.distance);
  if (r.upper) out["upper"] = rational_json(*r.upper);
  if (r.lower) out["lower"] = rational_json(r.lower->value);
  if (r.realizing) out["realizing"] = map_json(*r.realizing);
  std::cout << report_document("probe", out);
  if (!out_path.empty()) write_file(out_path, chain_document(r.state));
  return 0;
}

int cmd_two_gen(const std::string& path, std::size_t level, bool verify, const std::string& report) {
  BranchTree t = from_file(path, parse_tree_document);
  if (level == 0) level = t.depth();
  if (!verify) {
    std::cout << two_generator_document(two_generator(t, level));
    return 0;
  }
  TwoGenerator g = report.empty() ? two_generator(t, level) : from_file(report, parse_two_generator_document);
  const std::string failure = check_reconstruction(t, level, g);
  Json out;
  out["level"] = level;
  out["ok"] = failure.empty();
  if (!failure.empty()) out["failure"] = failure;
  std::cout << report_document("two_generator_check", out);
  if (!failure.empty()) throw PreconditionError("reconstruction failed", failure);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact finite-dimensional Banach lattice toolkit"};
  app.require_subcommand(1);
  int code = 0;

  std::string lattice, vector, map, functionals, layout = "full", f1, f2, c = "1", c2, mode, ta, tb, tree, report;
  std::size_t budget = 720, depth = 2, steps = 1, max_dim = 24, level = 0, stage_a = 0, stage_b = 0;
  std::uint64_t seed = 0;
  bool verify = false, no_snap = false;
  std::vector<std::string> catalogue;
  std::string chain, copies, a_text, b_text, eps = "1/10", out_path;

  auto* norm = app.add_subcommand("norm", "exact norm of a vector");
  norm->add_option("lattice", lattice, "lattice document")->required();
  norm->add_option("vector", vector, "vector such as \"[1/2, -1/2]\"")->required();
  norm->callback([&] { code = cmd_norm(lattice, vector); });

  auto* check = app.add_subcommand("check-map", "homomorphism verdict and embedding certificate");
  check->add_option("map", map, "map or pushout document")->required();
  check->callback([&] { code = cmd_check_map(map); });

  auto* embed = app.add_subcommand("embed", "isometric embedding into l_inf^m(l_1^M)");
  embed->add_option("lattice", lattice, "lattice document")->required();
  embed->add_option("--functionals", functionals, "comma-separated functional indices");
  embed->add_option("--layout", layout, "full or compact")->check(CLI::IsMember({"full", "compact"}));
  embed->callback([&] { code = cmd_embed(lattice, functionals, layout); });

  auto* amal = app.add_subcommand("amalgamate", "pushout of two embeddings of a common lattice");
  amal->add_option("f1", f1, "map document")->required();
  amal->add_option("f2", f2, "map document")->required();
  amal->add_option("--c", c, "distortion constant p/q");
  amal->add_option("--c2", c2, "distortion of f2 when --mode is given (default: --c)");
  amal->add_option("--mode", mode, "balanced or one_isometric")->check(CLI::IsMember({"balanced", "one_isometric"}));
  amal->callback([&] { code = cmd_amalgamate(f1, f2, c, c2, mode); });

  auto* renorm = app.add_subcommand("renorm", "renorm the codomain so that a c-embedding becomes isometric");
  renorm->add_option("map", map, "map document")->required();
  renorm->add_option("--c", c, "distortion constant p/q")->required();
  renorm->callback([&] { code = cmd_renorm(map, c); });

  auto* dist = app.add_subcommand("distance", "certified bounds on the distance between two tuples");
  dist->add_option("a", ta, "tuple document")->required();
  dist->add_option("b", tb, "tuple document")->required();
  dist->add_option("--budget", budget, "permutations tried by the upper bound");
  dist->add_option("--depth", depth, "term depth for the lower bound");
  dist->add_flag("--no-snap", no_snap, "skip the snapped-amalgam strategy");
  dist->callback([&] { code = cmd_distance(ta, tb, budget, depth, no_snap); });

  auto* ch = app.add_subcommand("chain", "finite chains of amalgams");
  ch->require_subcommand(1);
  auto* build = ch->add_subcommand("build", "build a chain from catalogue lattices");
  build->add_option("catalogue", catalogue, "lattice documents")->required();
  build->add_option("--seed", seed, "random seed")->required();
  build->add_option("--steps", steps, "number of steps");
  build->add_option("--max-dim", max_dim, "stage dimension after which only re-embeddings are generated");
  build->callback([&] { code = cmd_chain_build(catalogue, seed, steps, max_dim); });
  auto* step = ch->add_subcommand("step", "run more steps on a chain document");
  step->add_option("chain", chain, "chain document")->required();
  step->add_option("--steps", steps, "number of steps");
  step->callback([&] { code = cmd_chain_step(chain, steps); });
  auto* audit = ch->add_subcommand("audit", "re-verify every certificate of a chain");
  audit->add_option("chain", chain, "chain document")->required();
  audit->callback([&] { code = cmd_chain_audit(chain); });
  auto* probe = ch->add_subcommand("probe", "move a tuple onto another by one targeted step");
  probe->add_option("chain", chain, "chain document")->required();
  probe->add_option("--copies", copies, "two recorded catalogue copies i,j");
  probe->add_option("--a-stage", stage_a, "stage holding a");
  probe->add_option("--a", a_text, "tuple such as \"[[1, 0], [0, 1]]\"");
  probe->add_option("--b-stage", stage_b, "stage holding b");
  probe->add_option("--b", b_text, "tuple");
  probe->add_option("--eps", eps, "tolerance p/q");
  probe->add_option("--budget", budget, "permutations tried by the upper bound");
  probe->add_option("--out", out_path, "write the extended chain here");
  probe->callback([&] {
    if (copies.empty() && (a_text.empty() || b_text.empty())) throw ParseError("probe needs --copies or both --a and --b");
    code = cmd_chain_probe(chain, copies, stage_a, a_text, stage_b, b_text, eps, budget, out_path);
  });

  auto* tr = app.add_subcommand("tree", "branching trees");
  tr->require_subcommand(1);
  std::size_t tree_depth = 2;
  auto* dyadic = tr->add_subcommand("dyadic", "the dyadic tree of l_inf^{2^n}(l_1^{2^n}) spans");
  dyadic->add_option("depth", tree_depth, "depth, at most 3")->required();
  dyadic->callback([&] { std::cout << tree_document(build_dyadic_tree(tree_depth)); });

  auto* two = app.add_subcommand("two-gen", "two generators and recoverer terms for a tree");
  two->add_option("tree", tree, "tree document")->required();
  two->add_option("--level", level, "tree level (default: the leaves)");
  two->add_option("--verify", report, "re-evaluate the recoverers of this report (default: freshly computed)")
      ->expected(0, 1);
  two->callback([&] {
    verify = two->count("--verify") > 0;
    code = cmd_two_gen(tree, level, verify, report);
  });

  auto* self = app.add_subcommand("selftest", "run the invariant suite");
  self->callback([&] { code = run_selftest(std::cout) ? 0 : 4; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
