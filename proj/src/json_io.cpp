#include "ktopos/json_io.hpp"

#include <fstream>
#include <sstream>

#include "ktopos/errors.hpp"

namespace ktopos::json_io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(as_string(e, what));
  return out;
}

Mask members_mask(const FinPoset& p, const json& j) {
  Mask m = 0;
  for (const auto& l : string_list(j, "members")) m |= bit(p.index_of(l));
  return m;
}

}  // namespace

json to_json(const FinPoset& p) {
  json leq = json::array();
  for (const auto& [a, b] : p.covers()) leq.push_back({p.label(a), p.label(b)});
  return {{"elements", p.labels()}, {"leq", leq}};
}

FinPoset poset_from_json(const json& j) {
  auto labels = string_list(field(j, "elements"), "elements");
  std::vector<std::pair<std::string, std::string>> pairs;
  const json& leq = j.contains("leq") ? j.at("leq") : json::array();
  if (!leq.is_array()) throw FormatError("leq must be an array of pairs");
  for (const auto& pr : leq) {
    if (!pr.is_array() || pr.size() != 2) throw FormatError("each leq entry must be a pair");
    pairs.emplace_back(as_string(pr[0], "leq entry"), as_string(pr[1], "leq entry"));
  }
  return validate_poset(std::move(labels), pairs);
}

json to_json(const MonotoneMap& f) {
  json a = json::object();
  for (std::size_t i = 0; i < f.domain().size(); ++i) a[f.domain().label(i)] = f.codomain().label(f(i));
  return {{"domain", to_json(f.domain())}, {"codomain", to_json(f.codomain())}, {"assignment", a}};
}

MonotoneMap map_from_json(const json& j) {
  FinPoset dom = poset_from_json(field(j, "domain"));
  FinPoset cod = poset_from_json(field(j, "codomain"));
  const json& a = field(j, "assignment");
  std::vector<std::size_t> assignment(dom.size());
  if (a.is_array()) {
    if (a.size() != dom.size()) throw FormatError("assignment list needs one entry per domain element");
    for (std::size_t i = 0; i < dom.size(); ++i) assignment[i] = cod.index_of(as_string(a[i], "assignment value"));
  } else if (a.is_object()) {
    if (a.size() != dom.size()) throw FormatError("assignment needs one entry per domain element");
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (!a.contains(dom.label(i))) throw FormatError("assignment misses '" + dom.label(i) + "'");
      assignment[i] = cod.index_of(as_string(a.at(dom.label(i)), "assignment value"));
    }
  } else {
    throw FormatError("assignment must be an object or a list");
  }
  return MonotoneMap::create(std::move(dom), std::move(cod), std::move(assignment));
}

OpenMap open_map_from_json(const json& j) { return OpenMap::create(map_from_json(j)); }

json members_json(const FinPoset& p, Mask m) {
  json out = json::array();
  for (std::size_t i : members_of(m)) out.push_back(p.label(i));
  return out;
}

json upset_to_json(const FinPoset& p, Upset u) { return {{"poset", to_json(p)}, {"members", members_json(p, u.members)}}; }

std::pair<FinPoset, Upset> upset_from_json(const json& j) {
  FinPoset p = poset_from_json(field(j, "poset"));
  Upset u = make_upset(p, members_mask(p, field(j, "members")));
  return {std::move(p), u};
}

json to_json(const FinLattice& l) { return to_json(l.order()); }

FinLattice lattice_from_json(const json& j) { return FinLattice::from_order(poset_from_json(j)); }

json to_json(const Presentation& a) {
  json rel = json::array();
  for (const auto& r : a.relations()) rel.push_back(print(r));
  return {{"generators", a.generators()}, {"relations", rel}};
}

Presentation presentation_from_json(const json& j) {
  auto gens = string_list(field(j, "generators"), "generators");
  std::vector<Formula> rel;
  if (j.contains("relations")) {
    for (const auto& r : string_list(j.at("relations"), "relations")) rel.push_back(parse(r));
  }
  return Presentation(std::move(gens), std::move(rel));
}

json to_json(const RNElement& e) {
  if (e.is_top()) return {{"top", true}};
  json nodes = json::array();
  for (const auto& n : e.members()) nodes.push_back({std::string(1, n.column), n.depth});
  return {{"nodes", nodes}};
}

RNElement rn_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("ladder element must be an object");
  if (j.contains("top")) {
    if (!j.at("top").is_boolean()) throw FormatError("'top' must be a boolean");
    if (j.at("top").get<bool>()) return RNElement::top();
  }
  std::vector<LadderNode> nodes;
  const json& arr = j.contains("nodes") ? j.at("nodes") : json::array();
  if (!arr.is_array()) throw FormatError("'nodes' must be an array");
  for (const auto& n : arr) {
    if (!n.is_array() || n.size() != 2 || !n[0].is_string() || !n[1].is_number_unsigned()) {
      throw FormatError("each ladder node must look like [\"L\", 2]");
    }
    const std::string col = n[0].get<std::string>();
    if (col != "L" && col != "R") throw FormatError("ladder column must be \"L\" or \"R\"");
    nodes.push_back({col[0], n[1].get<std::size_t>()});
  }
  return RNElement::from_nodes(nodes);
}

json to_json(const ProductUpset& s) {
  json fibers = json::object();
  for (std::size_t p = 0; p < s.fibers().size(); ++p) fibers[s.base().label(p)] = to_json(s.fiber(p));
  return {{"base", to_json(s.base())}, {"fibers", fibers}};
}

ProductUpset product_upset_from_json(const json& j) {
  FinPoset base = poset_from_json(field(j, "base"));
  const json& fj = field(j, "fibers");
  if (!fj.is_object()) throw FormatError("'fibers' must be an object keyed by base labels");
  std::vector<RNElement> fibers;
  for (std::size_t p = 0; p < base.size(); ++p) {
    if (!fj.contains(base.label(p))) throw FormatError("no fiber for '" + base.label(p) + "'");
    fibers.push_back(rn_from_json(fj.at(base.label(p))));
  }
  if (fj.size() != base.size()) throw FormatError("fibers name points outside the base");
  return ProductUpset(std::move(base), std::move(fibers));
}

json valuation_json(const FinPoset& p, const Valuation& v) {
  json out = json::object();
  for (const auto& [name, u] : v) out[name] = members_json(p, u.members);
  return out;
}

json to_json(const KripkeModel& m) {
  return {{"frame", to_json(m.frame())}, {"valuation", valuation_json(m.frame(), m.valuation())}};
}

KripkeModel kripke_from_json(const json& j) {
  FinPoset p = poset_from_json(field(j, "frame"));
  const json& vj = field(j, "valuation");
  if (!vj.is_object()) throw FormatError("'valuation' must be an object");
  std::map<std::string, Upset> v;
  for (const auto& [name, members] : vj.items()) v.emplace(name, Upset{members_mask(p, members)});
  return KripkeModel(std::move(p), std::move(v));
}

json to_json(const Countermodel& c) {
  json out = to_json(c.model);
  out["point"] = c.model.frame().label(c.point);
  return out;
}

CoverFamily cover_from_json(const json& j) {
  FinPoset target = poset_from_json(field(j, "target"));
  const json& ms = field(j, "maps");
  if (!ms.is_array()) throw FormatError("'maps' must be an array");
  std::vector<OpenMap> maps;
  for (const auto& m : ms) maps.push_back(open_map_from_json(m));
  return CoverFamily(std::move(target), std::move(maps));
}

json to_json(const QuantVerdict& v) {
  json out = {{"holds", v.holds}, {"cells", v.cells}};
  if (!v.counterexample.empty()) out["counterexample"] = v.counterexample;
  return out;
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ktopos::json_io
