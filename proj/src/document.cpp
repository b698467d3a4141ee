#include "fbl/document.hpp"

#include <set>

#include "fbl/errors.hpp"

namespace fbl {
namespace {

// Field access on one JSON object; done() rejects fields that were never read.
class Reader {
 public:
  Reader(const Json& j, std::string at) : j_(j), at_(std::move(at)) {
    if (!j_.is_object()) throw ParseError(at_ + ": expected an object");
  }
  std::string path(const std::string& key) const { return at_ + "." + key; }
  const Json& need(const std::string& key) {
    const Json* p = maybe(key);
    if (!p) throw ParseError(at_ + ": missing field \"" + key + "\"");
    return *p;
  }
  const Json* maybe(const std::string& key) {
    auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }
  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ParseError(at_ + ": unknown field \"" + it.key() + "\"");
  }

 private:
  const Json& j_;
  std::string at_;
  std::set<std::string> used_;
};

const Json& array_at(const Json& j, const std::string& at) {
  if (!j.is_array()) throw ParseError(at + ": expected an array");
  return j;
}

std::string idx(const std::string& at, std::size_t i) { return at + "[" + std::to_string(i) + "]"; }

std::size_t size_from(const Json& j, const std::string& at) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError(at + ": expected a nonnegative integer");
  return j.get<std::size_t>();
}

long long integer_from(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) throw ParseError(at + ": expected an integer");
  return j.get<long long>();
}

std::string string_from(const Json& j, const std::string& at) {
  if (!j.is_string()) throw ParseError(at + ": expected a string");
  return j.get<std::string>();
}

bool bool_from(const Json& j, const std::string& at) {
  if (!j.is_boolean()) throw ParseError(at + ": expected a boolean");
  return j.get<bool>();
}

Json vecs_json(const std::vector<Vec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

std::vector<Vec> vecs_from(const Json& j, const std::string& at) {
  std::vector<Vec> out;
  const Json& a = array_at(j, at);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(vec_from(a[i], idx(at, i)));
  return out;
}

template <class F>
auto structural(const std::string& at, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StructuralError& e) {
    throw ParseError(at + ": " + e.what());
  }
}

LatticeMap columns_from(const Json& j, const std::string& at, const FiniteLattice& dom, const FiniteLattice& cod) {
  std::vector<Vec> cols = vecs_from(j, at);
  if (cols.size() != dom.dim()) throw ParseError(at + ": expected " + std::to_string(dom.dim()) + " columns");
  for (std::size_t i = 0; i < cols.size(); ++i)
    if (cols[i].size() != cod.dim()) throw ParseError(idx(at, i) + ": expected length " + std::to_string(cod.dim()));
  return LatticeMap(dom, cod, std::move(cols));
}

Json task_json(const ChainTask& t) {
  Json j;
  j["stage"] = t.stage;
  j["source"] = vecs_json(t.source);
  j["target"] = lattice_json(t.target);
  j["target_tuple"] = vecs_json(t.target_tuple);
  j["priority"] = t.priority;
  j["origin"] = t.origin;
  if (t.catalogue_index) j["catalogue_index"] = *t.catalogue_index;
  return j;
}

ChainTask task_from(const Json& j, const std::string& at) {
  Reader r(j, at);
  ChainTask t;
  t.stage = size_from(r.need("stage"), r.path("stage"));
  t.source = vecs_from(r.need("source"), r.path("source"));
  t.target = lattice_from(r.need("target"), r.path("target"));
  t.target_tuple = vecs_from(r.need("target_tuple"), r.path("target_tuple"));
  t.priority = static_cast<long>(integer_from(r.need("priority"), r.path("priority")));
  t.origin = string_from(r.need("origin"), r.path("origin"));
  if (const Json* c = r.maybe("catalogue_index")) t.catalogue_index = size_from(*c, r.path("catalogue_index"));
  r.done();
  return t;
}

}  // namespace

Json rational_json(const Rational& r) { return r.str(); }

Rational rational_from(const Json& j, const std::string& at) {
  const std::string s = string_from(j, at);
  Rational r;
  try {
    r = Rational::parse(s);
  } catch (const ParseError& e) {
    throw ParseError(at + ": " + e.what());
  }
  if (r.str() != s) throw ParseError(at + ": '" + s + "' is not in lowest terms (expected '" + r.str() + "')");
  return r;
}

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

Vec vec_from(const Json& j, const std::string& at) {
  const Json& a = array_at(j, at);
  Vec v;
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(rational_from(a[i], idx(at, i)));
  return v;
}

Json lattice_json(const FiniteLattice& lat) {
  Json j;
  j["label"] = lat.label();
  j["dim"] = lat.dim();
  if (lat.dim() > 0 && lat.has_functionals()) j["functionals"] = vecs_json(lat.functionals());
  if (lat.dim() > 0 && lat.has_ball()) j["ball"] = vecs_json(lat.ball_generators());
  if (lat.grid_shape()) j["grid"] = lat.grid_shape()->widths();
  return j;
}

FiniteLattice lattice_from(const Json& j, const std::string& at) {
  Reader r(j, at);
  const std::string label = string_from(r.need("label"), r.path("label"));
  const std::size_t dim = size_from(r.need("dim"), r.path("dim"));
  std::optional<std::vector<Vec>> fs, gs;
  std::optional<GridShape> grid;
  if (const Json* f = r.maybe("functionals")) fs = vecs_from(*f, r.path("functionals"));
  if (const Json* g = r.maybe("ball")) gs = vecs_from(*g, r.path("ball"));
  if (const Json* g = r.maybe("grid")) {
    std::vector<std::size_t> widths;
    const Json& a = array_at(*g, r.path("grid"));
    for (std::size_t i = 0; i < a.size(); ++i) widths.push_back(size_from(a[i], idx(r.path("grid"), i)));
    grid = structural(r.path("grid"), [&] { return GridShape(widths); });
  }
  r.done();
  if (dim == 0) {
    if (fs || gs || grid) throw ParseError(at + ": the zero lattice has no norm data");
    return FiniteLattice().with_label(label);
  }
  return structural(at, [&] { return FiniteLattice::from_forms(dim, fs, gs, label, grid); });
}

Json map_json(const LatticeMap& f) {
  Json j;
  j["dom"] = lattice_json(f.dom());
  j["cod"] = lattice_json(f.cod());
  j["columns"] = vecs_json(f.columns());
  return j;
}

LatticeMap map_from(const Json& j, const std::string& at) {
  Reader r(j, at);
  FiniteLattice dom = lattice_from(r.need("dom"), r.path("dom"));
  FiniteLattice cod = lattice_from(r.need("cod"), r.path("cod"));
  LatticeMap f = columns_from(r.need("columns"), r.path("columns"), dom, cod);
  r.done();
  return f;
}

Json term_json(const Term& t) {
  Json j;
  switch (t.op()) {
    case TermOp::Var:
      j["op"] = "var";
      j["index"] = t.index();
      break;
    case TermOp::Scale:
      j["op"] = "scale";
      j["coeff"] = rational_json(t.coeff());
      j["arg"] = term_json(t.lhs());
      break;
    case TermOp::Add:
    case TermOp::Meet:
    case TermOp::Join:
      j["op"] = t.op() == TermOp::Add ? "add" : t.op() == TermOp::Meet ? "meet" : "join";
      j["lhs"] = term_json(t.lhs());
      j["rhs"] = term_json(t.rhs());
      break;
    case TermOp::Pos:
    case TermOp::Abs:
      j["op"] = t.op() == TermOp::Pos ? "pos" : "abs";
      j["arg"] = term_json(t.lhs());
      break;
  }
  return j;
}

Term term_from(const Json& j, const std::string& at) {
  Reader r(j, at);
  const std::string op = string_from(r.need("op"), r.path("op"));
  Term out = Term::var(0);
  if (op == "var") {
    out = Term::var(size_from(r.need("index"), r.path("index")));
  } else if (op == "scale") {
    Rational c = rational_from(r.need("coeff"), r.path("coeff"));
    out = c * term_from(r.need("arg"), r.path("arg"));
  } else if (op == "add" || op == "meet" || op == "join") {
    Term a = term_from(r.need("lhs"), r.path("lhs"));
    Term b = term_from(r.need("rhs"), r.path("rhs"));
    out = op == "add" ? a + b : op == "meet" ? meet(a, b) : join(a, b);
  } else if (op == "pos" || op == "abs") {
    Term a = term_from(r.need("arg"), r.path("arg"));
    out = op == "pos" ? pos(a) : abs(a);
  } else {
    throw ParseError(r.path("op") + ": unknown term operation '" + op + "'");
  }
  r.done();
  return out;
}

Json certificate_json(const EmbeddingCertificate& c) {
  Json j;
  j["c_upper"] = rational_json(c.c_upper);
  j["upper_witness"] = vec_json(c.upper_witness);
  if (c.c_lower) j["c_lower"] = rational_json(*c.c_lower);
  j["lower_witness"] = vec_json(c.lower_witness);
  return j;
}

EmbeddingCertificate certificate_from(const Json& j, const std::string& at) {
  Reader r(j, at);
  EmbeddingCertificate c;
  c.c_upper = rational_from(r.need("c_upper"), r.path("c_upper"));
  c.upper_witness = vec_from(r.need("upper_witness"), r.path("upper_witness"));
  if (const Json* l = r.maybe("c_lower")) c.c_lower = rational_from(*l, r.path("c_lower"));
  c.lower_witness = vec_from(r.need("lower_witness"), r.path("lower_witness"));
  r.done();
  return c;
}

Json make_document(const std::string& kind, const Json& payload) {
  Json doc;
  doc["kind"] = kind;
  doc["version"] = kDocumentVersion;
  for (auto it = payload.begin(); it != payload.end(); ++it) doc[it.key()] = it.value();
  return doc;
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

namespace {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte) + ": malformed JSON");
  }
}

}  // namespace

std::string document_kind(const std::string& text) {
  Json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("kind")) throw ParseError("$: missing field \"kind\"");
  return string_from(doc["kind"], "$.kind");
}

Json read_document(const std::string& text, const std::string& kind) {
  Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("$: expected an object");
  if (!doc.contains("kind")) throw ParseError("$: missing field \"kind\"");
  if (!doc.contains("version")) throw ParseError("$: missing field \"version\"");
  const std::string k = string_from(doc["kind"], "$.kind");
  if (k != kind) throw ParseError("$.kind: expected '" + kind + "', found '" + k + "'");
  if (integer_from(doc["version"], "$.version") != kDocumentVersion)
    throw ParseError("$.version: unsupported version " + doc["version"].dump());
  doc.erase("kind");
  doc.erase("version");
  return doc;
}

std::string lattice_document(const FiniteLattice& lat) { return dump_document(make_document("lattice", lattice_json(lat))); }

FiniteLattice parse_lattice_document(const std::string& text) { return lattice_from(read_document(text, "lattice"), "$"); }

std::string map_document(const LatticeMap& f) { return dump_document(make_document("map", map_json(f))); }

LatticeMap parse_map_document(const std::string& text) { return map_from(read_document(text, "map"), "$"); }

std::string tuple_document(const GeneratedTuple& g) {
  Json j;
  j["lattice"] = lattice_json(g.lattice);
  j["tuple"] = vecs_json(g.tuple);
  if (g.witness) {
    Json w = Json::array();
    for (const auto& t : *g.witness) w.push_back(term_json(t));
    j["witness"] = std::move(w);
  }
  return dump_document(make_document("tuple", j));
}

GeneratedTuple parse_tuple_document(const std::string& text) {
  Json j = read_document(text, "tuple");
  Reader r(j, "$");
  GeneratedTuple g;
  g.lattice = lattice_from(r.need("lattice"), "$.lattice");
  g.tuple = vecs_from(r.need("tuple"), "$.tuple");
  for (std::size_t i = 0; i < g.tuple.size(); ++i)
    if (g.tuple[i].size() != g.lattice.dim())
      throw ParseError(idx("$.tuple", i) + ": expected length " + std::to_string(g.lattice.dim()));
  if (const Json* w = r.maybe("witness")) {
    const Json& a = array_at(*w, "$.witness");
    std::vector<Term> ts;
    for (std::size_t i = 0; i < a.size(); ++i) ts.push_back(term_from(a[i], idx("$.witness", i)));
    g.witness = std::move(ts);
  }
  r.done();
  return g;
}

std::string pushout_document(const LatticeMap& f1, const LatticeMap& f2, const PushoutResult& p) {
  if (f1.cod().dim() != p.g1.dom().dim() || f2.cod().dim() != p.g2.dom().dim() || f1.dom().dim() != f2.dom().dim())
    throw StructuralError("legs do not match the pushout");
  Json j;
  j["c"] = rational_json(p.c);
  j["e"] = lattice_json(f1.dom());
  j["f1_cod"] = lattice_json(f1.cod());
  j["f2_cod"] = lattice_json(f2.cod());
  j["f1"] = vecs_json(f1.columns());
  j["f2"] = vecs_json(f2.columns());
  j["g"] = lattice_json(p.g);
  j["atom_legend"] = p.atom_legend;
  j["g1"] = vecs_json(p.g1.columns());
  j["g2"] = vecs_json(p.g2.columns());
  j["raw_g1"] = vecs_json(p.raw_g1.columns());
  j["raw_g2"] = vecs_json(p.raw_g2.columns());
  Json certs;
  certs["g1"] = certificate_json(p.cert1);
  certs["g2"] = certificate_json(p.cert2);
  certs["raw_g1"] = certificate_json(p.raw_cert1);
  certs["raw_g2"] = certificate_json(p.raw_cert2);
  j["certificates"] = std::move(certs);
  j["composite1"] = vecs_json(compose(p.g1, f1).columns());
  j["composite2"] = vecs_json(compose(p.g2, f2).columns());
  return dump_document(make_document("pushout", j));
}

AmalgamDocument parse_pushout_document(const std::string& text) {
  Json j = read_document(text, "pushout");
  Reader r(j, "$");
  const Rational c = rational_from(r.need("c"), "$.c");
  FiniteLattice e = lattice_from(r.need("e"), "$.e");
  FiniteLattice f1c = lattice_from(r.need("f1_cod"), "$.f1_cod");
  FiniteLattice f2c = lattice_from(r.need("f2_cod"), "$.f2_cod");
  LatticeMap f1 = columns_from(r.need("f1"), "$.f1", e, f1c);
  LatticeMap f2 = columns_from(r.need("f2"), "$.f2", e, f2c);
  FiniteLattice g = lattice_from(r.need("g"), "$.g");
  std::vector<std::string> legend;
  const Json& la = array_at(r.need("atom_legend"), "$.atom_legend");
  for (std::size_t i = 0; i < la.size(); ++i) legend.push_back(string_from(la[i], idx("$.atom_legend", i)));
  if (legend.size() != g.dim()) throw ParseError("$.atom_legend: expected one entry per atom of g");
  LatticeMap g1 = columns_from(r.need("g1"), "$.g1", f1c, g);
  LatticeMap g2 = columns_from(r.need("g2"), "$.g2", f2c, g);
  LatticeMap raw1 = columns_from(r.need("raw_g1"), "$.raw_g1", f1c, g);
  LatticeMap raw2 = columns_from(r.need("raw_g2"), "$.raw_g2", f2c, g);
  Reader cr(r.need("certificates"), "$.certificates");
  EmbeddingCertificate c1 = certificate_from(cr.need("g1"), cr.path("g1"));
  EmbeddingCertificate c2 = certificate_from(cr.need("g2"), cr.path("g2"));
  EmbeddingCertificate rc1 = certificate_from(cr.need("raw_g1"), cr.path("raw_g1"));
  EmbeddingCertificate rc2 = certificate_from(cr.need("raw_g2"), cr.path("raw_g2"));
  cr.done();
  if (columns_from(r.need("composite1"), "$.composite1", e, g) != compose(g1, f1))
    throw ParseError("$.composite1: does not equal g1 f1");
  if (columns_from(r.need("composite2"), "$.composite2", e, g) != compose(g2, f2))
    throw ParseError("$.composite2: does not equal g2 f2");
  r.done();
  return {std::move(f1), std::move(f2),
          PushoutResult{std::move(g), std::move(g1), std::move(g2), std::move(raw1), std::move(raw2), std::move(c1),
                        std::move(c2), std::move(rc1), std::move(rc2), std::move(legend), c}};
}

std::string chain_document(const ChainState& s) {
  Json j;
  j["seed"] = s.seed;
  j["max_dim"] = s.max_dim;
  Json cat = Json::array(), stages = Json::array(), conn = Json::array(), last = Json::array();
  for (const auto& l : s.catalogue) cat.push_back(lattice_json(l));
  for (const auto& l : s.stages) stages.push_back(lattice_json(l));
  for (const auto& f : s.connecting) conn.push_back(vecs_json(f.columns()));
  for (const auto& f : s.to_last) last.push_back(vecs_json(f.columns()));
  j["catalogue"] = std::move(cat);
  j["stages"] = std::move(stages);
  j["connecting"] = std::move(conn);
  j["to_last"] = std::move(last);
  Json queue = Json::array(), copies = Json::array(), records = Json::array();
  for (const auto& t : s.queue) queue.push_back(task_json(t));
  for (const auto& c : s.copies) {
    Json cj;
    cj["catalogue_index"] = c.catalogue_index;
    cj["atoms"] = vecs_json(c.atoms);
    copies.push_back(std::move(cj));
  }
  for (const auto& rec : s.records) {
    Json rj;
    rj["origin"] = rec.origin;
    rj["accepted"] = rec.accepted;
    rj["diagnosis"] = rec.diagnosis;
    rj["dim"] = rec.dim;
    if (rec.target_embedding) rj["target_embedding"] = map_json(*rec.target_embedding);
    records.push_back(std::move(rj));
  }
  j["queue"] = std::move(queue);
  j["copies"] = std::move(copies);
  j["records"] = std::move(records);
  return dump_document(make_document("chain", j));
}

ChainState parse_chain_document(const std::string& text) {
  Json j = read_document(text, "chain");
  Reader r(j, "$");
  ChainState s;
  const Json& seed = r.need("seed");
  if (!seed.is_number_unsigned()) throw ParseError("$.seed: expected a nonnegative integer");
  s.seed = seed.get<std::uint64_t>();
  s.max_dim = size_from(r.need("max_dim"), "$.max_dim");
  const Json& cat = array_at(r.need("catalogue"), "$.catalogue");
  for (std::size_t i = 0; i < cat.size(); ++i) s.catalogue.push_back(lattice_from(cat[i], idx("$.catalogue", i)));
  const Json& stages = array_at(r.need("stages"), "$.stages");
  if (stages.empty()) throw ParseError("$.stages: a chain has at least one stage");
  for (std::size_t i = 0; i < stages.size(); ++i) s.stages.push_back(lattice_from(stages[i], idx("$.stages", i)));
  const Json& conn = array_at(r.need("connecting"), "$.connecting");
  if (conn.size() + 1 != s.stages.size()) throw ParseError("$.connecting: expected one map between consecutive stages");
  for (std::size_t i = 0; i < conn.size(); ++i)
    s.connecting.push_back(columns_from(conn[i], idx("$.connecting", i), s.stages[i], s.stages[i + 1]));
  const Json& last = array_at(r.need("to_last"), "$.to_last");
  if (last.size() != s.stages.size()) throw ParseError("$.to_last: expected one map per stage");
  for (std::size_t i = 0; i < last.size(); ++i)
    s.to_last.push_back(columns_from(last[i], idx("$.to_last", i), s.stages[i], s.stages.back()));
  const Json& queue = array_at(r.need("queue"), "$.queue");
  for (std::size_t i = 0; i < queue.size(); ++i) s.queue.push_back(task_from(queue[i], idx("$.queue", i)));
  const Json& copies = array_at(r.need("copies"), "$.copies");
  for (std::size_t i = 0; i < copies.size(); ++i) {
    Reader cr(copies[i], idx("$.copies", i));
    CatalogueCopy c;
    c.catalogue_index = size_from(cr.need("catalogue_index"), cr.path("catalogue_index"));
    c.atoms = vecs_from(cr.need("atoms"), cr.path("atoms"));
    cr.done();
    s.copies.push_back(std::move(c));
  }
  const Json& records = array_at(r.need("records"), "$.records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    Reader rr(records[i], idx("$.records", i));
    StepRecord rec;
    rec.origin = string_from(rr.need("origin"), rr.path("origin"));
    rec.accepted = bool_from(rr.need("accepted"), rr.path("accepted"));
    rec.diagnosis = string_from(rr.need("diagnosis"), rr.path("diagnosis"));
    rec.dim = size_from(rr.need("dim"), rr.path("dim"));
    if (const Json* m = rr.maybe("target_embedding")) rec.target_embedding = map_from(*m, rr.path("target_embedding"));
    rr.done();
    s.records.push_back(std::move(rec));
  }
  r.done();
  return s;
}

std::string tree_document(const BranchTree& t) {
  Json j;
  j["ambient"] = lattice_json(t.ambient);
  j["branching"] = t.branching;
  Json levels = Json::array(), spans = Json::array();
  for (const auto& level : t.levels) {
    Json lj = Json::array();
    for (const auto& node : level) {
      Json nj;
      nj["path"] = node.path;
      nj["element"] = vec_json(node.element);
      lj.push_back(std::move(nj));
    }
    levels.push_back(std::move(lj));
  }
  for (const auto& s : t.spans) spans.push_back(lattice_json(s));
  j["levels"] = std::move(levels);
  j["spans"] = std::move(spans);
  return dump_document(make_document("tree", j));
}

BranchTree parse_tree_document(const std::string& text) {
  Json j = read_document(text, "tree");
  Reader r(j, "$");
  FiniteLattice ambient = lattice_from(r.need("ambient"), "$.ambient");
  std::vector<std::size_t> branching;
  const Json& b = array_at(r.need("branching"), "$.branching");
  for (std::size_t i = 0; i < b.size(); ++i) branching.push_back(size_from(b[i], idx("$.branching", i)));
  std::vector<std::vector<BranchNode>> levels;
  const Json& lv = array_at(r.need("levels"), "$.levels");
  for (std::size_t n = 0; n < lv.size(); ++n) {
    const std::string at = idx("$.levels", n);
    const Json& nodes = array_at(lv[n], at);
    std::vector<BranchNode> level;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Reader nr(nodes[i], idx(at, i));
      BranchNode node;
      const Json& p = array_at(nr.need("path"), nr.path("path"));
      for (std::size_t k = 0; k < p.size(); ++k) node.path.push_back(size_from(p[k], idx(nr.path("path"), k)));
      node.element = vec_from(nr.need("element"), nr.path("element"));
      nr.done();
      level.push_back(std::move(node));
    }
    levels.push_back(std::move(level));
  }
  std::vector<FiniteLattice> spans;
  const Json& sp = array_at(r.need("spans"), "$.spans");
  for (std::size_t i = 0; i < sp.size(); ++i) spans.push_back(lattice_from(sp[i], idx("$.spans", i)));
  r.done();
  return structural("$", [&] {
    return assemble_tree(std::move(ambient), std::move(branching), std::move(levels), std::move(spans));
  });
}

std::string report_document(const std::string& name, const Json& payload) {
  Json j;
  j["report"] = name;
  for (auto it = payload.begin(); it != payload.end(); ++it) j[it.key()] = it.value();
  return dump_document(make_document("report", j));
}

Json read_report(const std::string& text, const std::string& name) {
  Json j = read_document(text, "report");
  if (!j.contains("report")) throw ParseError("$: missing field \"report\"");
  const std::string n = string_from(j["report"], "$.report");
  if (n != name) throw ParseError("$.report: expected '" + name + "', found '" + n + "'");
  j.erase("report");
  return j;
}

std::string two_generator_document(const TwoGenerator& g) {
  Json j;
  j["u"] = vec_json(g.u);
  j["v"] = vec_json(g.v);
  j["coefficients"] = vec_json(g.coefficients);
  Json rs = Json::array();
  for (const auto& t : g.recoverers) rs.push_back(term_json(t));
  j["recoverers"] = std::move(rs);
  j["multiples"] = vec_json(g.multiples);
  return report_document("two_generator", j);
}

TwoGenerator parse_two_generator_document(const std::string& text) {
  Json j = read_report(text, "two_generator");
  Reader r(j, "$");
  TwoGenerator g;
  g.u = vec_from(r.need("u"), "$.u");
  g.v = vec_from(r.need("v"), "$.v");
  g.coefficients = vec_from(r.need("coefficients"), "$.coefficients");
  const Json& rs = array_at(r.need("recoverers"), "$.recoverers");
  for (std::size_t i = 0; i < rs.size(); ++i) g.recoverers.push_back(term_from(rs[i], idx("$.recoverers", i)));
  g.multiples = vec_from(r.need("multiples"), "$.multiples");
  r.done();
  if (g.recoverers.size() != g.multiples.size()) throw ParseError("$.multiples: expected one per recoverer");
  return g;
}

}  // namespace fbl
