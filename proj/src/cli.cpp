#include "ktopos/cli.hpp"

#include <CLI11.hpp>
#include <sstream>

#include "ktopos/duality.hpp"
#include "ktopos/errors.hpp"
#include "ktopos/json_io.hpp"
#include "ktopos/kp.hpp"
#include "ktopos/ladder.hpp"
#include "ktopos/nerve.hpp"
#include "ktopos/prover.hpp"
#include "ktopos/quantifiers.hpp"
#include "ktopos/verify.hpp"

namespace ktopos::cli {

namespace {

using nlohmann::json;
using namespace json_io;

// Accepts a JSON file path or one of @point, @sigma, @vee, @chain:N,
// @antichain:N.
FinPoset load_poset(const std::string& spec) {
  if (!spec.empty() && spec[0] == '@') {
    const std::string name = spec.substr(1);
    auto number = [&](const std::string& prefix) -> std::optional<std::size_t> {
      if (name.rfind(prefix, 0) != 0) return std::nullopt;
      try {
        return static_cast<std::size_t>(std::stoul(name.substr(prefix.size())));
      } catch (const std::exception&) {
        throw FormatError("bad size in '" + spec + "'");
      }
    };
    if (name == "point" || name == "1") return point();
    if (name == "sigma") return sierpinski();
    if (name == "vee") return rooted_vee();
    if (auto n = number("chain:")) return chain(*n);
    if (auto n = number("antichain:")) return antichain(*n);
    throw FormatError("unknown built-in poset '" + spec + "'");
  }
  return poset_from_json(read_file(spec));
}

json quotient_json(const Quotient& q) {
  json classes = json::array();
  for (const auto& c : q.classes) {
    json members = json::array();
    for (std::size_t x : c) members.push_back(q.source.label(x));
    classes.push_back(members);
  }
  return {{"quotient", to_json(q.quotient)}, {"classes", classes}, {"projection", to_json(q.projection.map())}};
}

json zigzag_json(const Zigzag& z) {
  json nodes = json::array();
  for (const auto& n : z.nodes) nodes.push_back(upset_to_json(n.frame, n.element));
  json steps = json::array();
  for (const auto& s : z.steps) steps.push_back({{"map", to_json(s.map.map())}, {"restrict", s.restrict}});
  return {{"nodes", nodes}, {"steps", steps}, {"stage_bound", z.stage_bound}, {"explored", z.explored}};
}

json lattice_tables(const FinLattice& l) {
  json out = to_json(l);
  json imp = json::object();
  if (l.heyting()) {
    for (std::size_t a = 0; a < l.size(); ++a) {
      for (std::size_t b = 0; b < l.size(); ++b) imp[l.label(a) + " -> " + l.label(b)] = l.label(l.implies(a, b));
    }
    out["implication"] = imp;
  }
  out["distributive"] = l.distributive();
  return out;
}

std::string render_text(const json& j) {
  if (!j.is_object()) return j.dump(2) + "\n";
  std::string out;
  for (const auto& [k, v] : j.items()) {
    out += k + ": " + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  }
  return out;
}

struct Outcome {
  json result;
  bool ok = true;
  // verify prints its own human-readable summary
  std::string text;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Kripke frames, Heyting duality, the one-variable ladder and quantifier checks."};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  std::uint64_t seed = 1;
  std::string grid_name = "default";
  app.add_flag("--json", as_json, "Emit JSON on stdout");
  app.add_option("--seed", seed, "Seed for sampled suites")->capture_default_str();
  app.add_option("--grid", grid_name, "Enumeration grid: default or small")->capture_default_str();
  Outcome oc;

  // ---------------------------------------------------------------- poset
  auto* poset = app.add_subcommand("poset", "Finite posets and open maps")->require_subcommand(1);
  std::string poset_file, map_file, left_file, right_file;
  auto* ps_show = poset->add_subcommand("show", "Order summary of a poset");
  ps_show->add_option("poset", poset_file, "Poset JSON file or @name")->required();
  ps_show->callback([&] {
    FinPoset p = load_poset(poset_file);
    oc.result = to_json(p);
    oc.result["maximal"] = members_json(p, max_elements(p));
    oc.result["minimal"] = members_json(p, min_elements(p));
    oc.result["rooted"] = is_rooted(p);
  });
  auto* ps_upsets = poset->add_subcommand("upsets", "All upsets of a poset");
  ps_upsets->add_option("poset", poset_file, "Poset JSON file or @name")->required();
  ps_upsets->callback([&] {
    FinPoset p = load_poset(poset_file);
    json ups = json::array();
    for (const auto& u : all_upsets(p)) ups.push_back(members_json(p, u.members));
    oc.result = {{"count", ups.size()}, {"upsets", ups}, {"local", is_local(UpsetAlgebra(p))}};
  });
  auto* ps_open = poset->add_subcommand("open", "Check the open-map condition");
  ps_open->add_option("map", map_file, "Map JSON file")->required();
  ps_open->callback([&] {
    MonotoneMap f = map_from_json(read_file(map_file));
    OpenCheck c = is_open(f);
    oc.result = {{"open", c.open}};
    if (c.witness) {
      oc.result["witness"] = {{"p", f.domain().label(c.witness->first)}, {"q", f.codomain().label(c.witness->second)}};
    }
  });
  auto* ps_tensor = poset->add_subcommand("tensor", "Componentwise product");
  ps_tensor->add_option("left", left_file)->required();
  ps_tensor->add_option("right", right_file)->required();
  ps_tensor->callback([&] { oc.result = to_json(tensor(load_poset(left_file), load_poset(right_file)).product); });

  // ---------------------------------------------------------------- kp
  auto* kp = app.add_subcommand("kp", "Colimits and covers of finite frames")->require_subcommand(1);
  std::vector<std::string> files;
  std::string pair_file, cover_file, f_file, g_file;
  std::size_t bound = 4;
  auto* kp_coprod = kp->add_subcommand("coproduct", "Disjoint union");
  kp_coprod->add_option("posets", files)->required();
  kp_coprod->callback([&] {
    std::vector<FinPoset> parts;
    for (const auto& f : files) parts.push_back(load_poset(f));
    oc.result = to_json(coproduct(parts).sum);
  });
  auto* kp_coeq = kp->add_subcommand("coequalize", "Coequalizer of a parallel pair of open maps");
  kp_coeq->add_option("--pair", pair_file, "JSON {\"f\": map, \"g\": map}")->required();
  kp_coeq->add_option("--bound", bound, "Cocone bound for the universality check")->capture_default_str();
  kp_coeq->callback([&] {
    json j = read_file(pair_file);
    if (!j.contains("f") || !j.contains("g")) throw FormatError("pair file needs 'f' and 'g'");
    OpenMap f = open_map_from_json(j.at("f"));
    OpenMap g = open_map_from_json(j.at("g"));
    Quotient q = coequalizer(f, g);
    oc.result = quotient_json(q);
    oc.result["projection_open"] = static_cast<bool>(is_open(q.projection.map()));
    auto uv = check_coequalizer_universal(q, f, g, bound);
    oc.result["universal"] = {{"holds", uv.universal}, {"bound", bound}, {"targets", uv.targets}, {"cocones", uv.cocones}};
    oc.ok = uv.universal;
  });
  auto* kp_image = kp->add_subcommand("image", "Image factorization of an open map");
  kp_image->add_option("map", map_file)->required();
  kp_image->callback([&] {
    auto fac = image_factorize(open_map_from_json(read_file(map_file)));
    oc.result = {{"image", to_json(fac.image)},
                 {"surjection", to_json(fac.surjection.map())},
                 {"embedding", to_json(fac.embedding.map())}};
  });
  auto* kp_pull = kp->add_subcommand("pullback", "Monoidal pullback of an open f along g");
  kp_pull->add_option("--f", f_file)->required();
  kp_pull->add_option("--g", g_file)->required();
  kp_pull->callback([&] {
    auto mp = monoidal_pullback(open_map_from_json(read_file(f_file)), map_from_json(read_file(g_file)));
    oc.result = {{"carrier", to_json(mp.carrier)}, {"to_r", to_json(mp.to_r.map())}, {"to_p", to_json(mp.to_p)}};
  });
  auto* kp_cover = kp->add_subcommand("cover-check", "Joint surjectivity of a family");
  kp_cover->add_option("cover", cover_file, "JSON {\"target\": poset, \"maps\": [...]}")->required();
  kp_cover->callback([&] {
    oc.ok = is_cover(cover_from_json(read_file(cover_file)));
    oc.result = {{"cover", oc.ok}};
  });
  auto* kp_eff = kp->add_subcommand("effepi-check", "Bounded effective-epimorphism check");
  kp_eff->add_option("cover", cover_file)->required();
  kp_eff->add_option("--bound", bound, "Largest cocone target")->capture_default_str();
  kp_eff->callback([&] {
    auto v = check_effective_epi(cover_from_json(read_file(cover_file)), bound);
    oc.result = {{"effective", v.effective}, {"cover", v.cover},   {"agrees", v.agrees},
                 {"bound", v.bound},         {"targets", v.targets}, {"cocones", v.cocones}};
    if (v.separating_cocone) oc.result["separating_cocone"] = *v.separating_cocone;
    oc.ok = v.effective;
  });
  auto* kp_notexact = kp->add_subcommand("notexact", "The parallel pair whose coequalizer is the 3-chain");
  kp_notexact->callback([&] {
    NotExactReport w = notexact_witness();
    oc.result = quotient_json(w.coequalizer);
    oc.result["f"] = to_json(w.f.map());
    oc.result["g"] = to_json(w.g.map());
    oc.result["quotient_is_three_chain"] = w.quotient_is_three_chain;
    oc.result["universal"] = w.universal;
    oc.result["outside_joint_image"] = members_json(w.coequalizer.source, w.coequalizer.source.all() & ~w.joint_image);
    oc.result["swap_pair"] = {{"u", to_json(w.u.map())},
                              {"v", to_json(w.v.map())},
                              {"hu_equals_hv", w.hu_equals_hv},
                              {"u_factors", w.u_factors},
                              {"v_factors", w.v_factors}};
  });

  // ---------------------------------------------------------------- dual
  auto* dual = app.add_subcommand("dual", "Finite Heyting duality")->require_subcommand(1);
  std::string lattice_file, from_file, to_file;
  bool heyting = false;
  auto* du_spec = dual->add_subcommand("spec", "Poset of homs into 2");
  du_spec->add_option("lattice", lattice_file)->required();
  du_spec->callback([&] { oc.result = to_json(spec(lattice_from_json(read_file(lattice_file)))); });
  auto* du_upsets = dual->add_subcommand("upsets", "U(P) as an explicit Heyting algebra");
  du_upsets->add_option("poset", poset_file)->required();
  du_upsets->callback([&] { oc.result = lattice_tables(to_lattice(UpsetAlgebra(load_poset(poset_file)))); });
  auto* du_rt = dual->add_subcommand("roundtrip", "Check P ≅ Spec(U P)");
  du_rt->add_option("poset", poset_file)->required();
  du_rt->callback([&] {
    FinPoset p = load_poset(poset_file);
    RoundTrip rt = roundtrip_poset(p);
    oc.ok = rt.ok;
    oc.result = {{"ok", rt.ok}};
    if (rt.ok) {
      json iso = json::object();
      for (std::size_t x = 0; x < p.size(); ++x) iso[p.label(x)] = rt.iso[x];
      oc.result["iso"] = iso;
    } else {
      oc.result["reason"] = rt.reason;
    }
  });
  auto* du_homs = dual->add_subcommand("homs", "Enumerate lattice homs");
  du_homs->add_option("--from", from_file)->required();
  du_homs->add_option("--to", to_file)->required();
  du_homs->add_flag("--heyting", heyting, "Only Heyting homs");
  du_homs->callback([&] {
    FinLattice a = lattice_from_json(read_file(from_file));
    FinLattice b = lattice_from_json(read_file(to_file));
    json homs = json::array();
    for (const auto& h : enumerate_homs(a, b, heyting)) {
      json m = json::object();
      for (std::size_t x = 0; x < a.size(); ++x) m[a.label(x)] = b.label(h[x]);
      homs.push_back(m);
    }
    oc.result = {{"count", homs.size()}, {"homs", homs}};
  });

  // ---------------------------------------------------------------- logic
  auto* logic = app.add_subcommand("logic", "Intuitionistic propositional logic")->require_subcommand(1);
  std::string formula, formula2;
  bool canonical = false;
  auto* lo_decide = logic->add_subcommand("decide", "Prove, or return a countermodel");
  lo_decide->add_option("formula", formula)->required();
  lo_decide->callback([&] {
    Decision d = decide(parse(formula));
    oc.result = {{"formula", print(parse(formula))}, {"provable", d.provable}};
    if (d.countermodel) oc.result["countermodel"] = to_json(*d.countermodel);
  });
  auto* lo_cm = logic->add_subcommand("countermodel", "Countermodel only");
  lo_cm->add_option("formula", formula)->required();
  lo_cm->add_flag("--canonical", canonical, "Use the subformula canonical model instead of small frames");
  lo_cm->callback([&] {
    Prover p;
    Formula f = parse(formula);
    auto cm = canonical ? p.canonical_countermodel(f) : p.small_countermodel(f);
    if (!cm && !canonical && !p.provable(f)) cm = p.canonical_countermodel(f);
    oc.result = {{"formula", print(f)}, {"found", cm.has_value()}};
    if (cm) oc.result["countermodel"] = to_json(*cm);
  });
  auto* lo_eq = logic->add_subcommand("equiv", "Provable equivalence");
  lo_eq->add_option("left", formula)->required();
  lo_eq->add_option("right", formula2)->required();
  lo_eq->callback([&] { oc.result = {{"equivalent", equiv(parse(formula), parse(formula2))}}; });

  // ---------------------------------------------------------------- nerve
  auto* nerve = app.add_subcommand("nerve", "Model sets and sheaf checks")->require_subcommand(1);
  std::string pres_file, kind, target_file, a_file, b_file;
  std::vector<std::string> set_elems;
  std::size_t stage_bound = 4;
  auto* ne_models = nerve->add_subcommand("models", "All models of a presentation on a frame");
  ne_models->add_option("--presentation", pres_file)->required();
  ne_models->add_option("--poset", poset_file)->required();
  ne_models->callback([&] {
    FinPoset p = load_poset(poset_file);
    NerveStage st = models(presentation_from_json(read_file(pres_file)), p);
    json ms = json::array();
    for (const auto& v : st.models) ms.push_back(valuation_json(p, v));
    oc.result = {{"count", ms.size()}, {"models", ms}};
  });
  auto* ne_restrict = nerve->add_subcommand("restrict", "Restriction along an open map Q -> P");
  ne_restrict->add_option("--presentation", pres_file)->required();
  ne_restrict->add_option("--map", map_file)->required();
  ne_restrict->callback([&] {
    Presentation a = presentation_from_json(read_file(pres_file));
    MonotoneMap f = map_from_json(read_file(map_file));
    NerveStage sp = models(a, f.codomain());
    NerveStage sq = models(a, f.domain());
    auto r = restrict_models(sp, sq, f);
    json rows = json::array();
    for (std::size_t i = 0; i < r.size(); ++i) {
      rows.push_back({{"from", valuation_json(f.codomain(), sp.models[i])},
                      {"to", valuation_json(f.domain(), sq.models[r[i]])}});
    }
    oc.result = {{"restriction", rows}};
  });
  auto* ne_sheaf = nerve->add_subcommand("sheaf-check", "Gluing for a cover (rooted cover of --poset by default)");
  ne_sheaf->add_option("--presentation", pres_file)->required();
  ne_sheaf->add_option("--cover", cover_file);
  ne_sheaf->add_option("--poset", poset_file);
  ne_sheaf->callback([&] {
    Presentation a = presentation_from_json(read_file(pres_file));
    if (cover_file.empty() && poset_file.empty()) throw CLI::ValidationError("sheaf-check needs --cover or --poset");
    CoverFamily c = cover_file.empty() ? rooted_cover(load_poset(poset_file)) : cover_from_json(read_file(cover_file));
    SheafVerdict v = sheaf_check(a, c);
    oc.ok = v.holds;
    oc.result = {{"holds", v.holds}, {"models", v.models}, {"compatible_families", v.compatible_families}};
    if (!v.holds) oc.result["failure"] = v.failure;
  });
  auto* ne_pn = nerve->add_subcommand("poset-nerve", "Monotone maps P -> L");
  ne_pn->add_option("--target", target_file)->required();
  ne_pn->add_option("--poset", poset_file)->required();
  ne_pn->callback([&] {
    auto maps = poset_nerve(load_poset(target_file), load_poset(poset_file));
    json ms = json::array();
    for (const auto& m : maps) ms.push_back(to_json(m)["assignment"]);
    oc.result = {{"count", ms.size()}, {"maps", ms}};
  });
  auto* ne_coh = nerve->add_subcommand("cohesion", "Γ, Δ or ∇ at a stage");
  ne_coh->add_option("kind", kind, "gamma, delta or nabla")->required()->check(CLI::IsMember({"gamma", "delta", "nabla"}));
  ne_coh->add_option("--presentation", pres_file, "For gamma");
  ne_coh->add_option("--set", set_elems, "For delta and nabla");
  ne_coh->add_option("--poset", poset_file, "For delta and nabla");
  ne_coh->callback([&] {
    if (kind == "gamma") {
      if (pres_file.empty()) throw CLI::ValidationError("gamma needs --presentation");
      json ms = json::array();
      for (const auto& v : cohesion_gamma(presentation_from_json(read_file(pres_file)))) ms.push_back(valuation_json(point(), v));
      oc.result = {{"count", ms.size()}, {"models", ms}};
      return;
    }
    if (poset_file.empty()) throw CLI::ValidationError(kind + " needs --poset");
    FinPoset p = load_poset(poset_file);
    if (kind == "delta") {
      auto s = cohesion_delta(set_elems, p);
      oc.result = {{"count", s.size()}, {"elements", s}};
    } else {
      auto fs = cohesion_nabla(set_elems, p);
      oc.result = {{"count", fs.size()}, {"functions", fs}};
    }
  });
  auto* ne_pi = nerve->add_subcommand("pi-connect", "Zigzag joining two elements of Ω");
  ne_pi->add_option("--a", a_file, "Upset JSON on a rooted frame")->required();
  ne_pi->add_option("--b", b_file, "Upset JSON on a rooted frame")->required();
  ne_pi->add_option("--stage-bound", stage_bound)->capture_default_str();
  ne_pi->callback([&] {
    auto [p, a] = upset_from_json(read_file(a_file));
    auto [q, b] = upset_from_json(read_file(b_file));
    oc.result = zigzag_json(pi_connect(p, a, q, b, stage_bound));
  });

  // ---------------------------------------------------------------- ladder
  auto* ladder = app.add_subcommand("ladder", "The one-variable ladder")->require_subcommand(1);
  std::size_t depth = 3;
  std::size_t raw = 0;
  auto* la_show = ladder->add_subcommand("show", "Truncated ladder");
  la_show->add_option("--depth", depth)->capture_default_str();
  la_show->callback([&] { oc.result = to_json(ladder_trunc(depth)); });
  auto* la_eval = ladder->add_subcommand("eval", "Evaluate a formula in x with x = {R1}");
  la_eval->add_option("formula", formula)->required();
  la_eval->callback([&] {
    Formula f = parse(formula);
    RNElement e = eval_one_var(f);
    oc.result = {{"formula", print(f)}, {"element", to_json(e)}, {"text", to_string(e)}};
  });
  auto* la_utop = ladder->add_subcommand("utop-search", "Classify uniform topological operators");
  la_utop->add_option("--depth", depth)->capture_default_str();
  la_utop->add_option("--raw", raw, "Also test every formula up to this size (0 = skip)")->capture_default_str();
  la_utop->callback([&] {
    Prover prover;
    UtopSearch s = utop_search(depth, prover);
    json passing = json::array();
    for (const auto& c : s.passing) passing.push_back({{"element", to_string(c.element)}, {"formula", print(c.representative)}});
    json failing = json::array();
    for (const auto& c : s.classes) {
      if (!c.verdict.passes) {
        failing.push_back(
            {{"element", to_string(c.element)}, {"formula", print(c.representative)}, {"condition", c.verdict.failed}});
      }
    }
    oc.result = {{"depth", depth}, {"classes", s.classes.size()}, {"exhaustive", s.exhaustive},
                 {"passing", passing}, {"failing", failing}};
    if (raw > 0) {
      RawSweep rs = utop_raw_sweep(raw, prover);
      json rp = json::array();
      for (const auto& c : rs.passing) rp.push_back({{"element", to_string(c.element)}, {"formula", print(c.representative)}});
      oc.result["raw"] = {{"max_size", raw}, {"formulas", rs.formulas}, {"classes", rs.classes}, {"passing", rp}};
    }
  });

  // ---------------------------------------------------------------- quant
  auto* quant = app.add_subcommand("quant", "Quantifiers along Ω×P -> P")->require_subcommand(1);
  std::string s_file, t_file, hom_file;
  std::size_t qdepth = 2;
  bool control = false;
  auto* qu_exists = quant->add_subcommand("exists", "∃ of a product upset");
  qu_exists->add_option("upset", s_file)->required();
  qu_exists->callback([&] {
    ProductUpset s = product_upset_from_json(read_file(s_file));
    oc.result = {{"members", members_json(s.base(), exists_pi(s).members)}};
  });
  auto* qu_forall = quant->add_subcommand("forall", "∀ of a product upset");
  qu_forall->add_option("upset", s_file)->required();
  qu_forall->callback([&] {
    ProductUpset s = product_upset_from_json(read_file(s_file));
    oc.result = {{"members", members_json(s.base(), forall_pi(s).members)}};
  });
  auto* qu_impl = quant->add_subcommand("impl", "Fiberwise implication");
  qu_impl->add_option("left", s_file)->required();
  qu_impl->add_option("right", t_file)->required();
  qu_impl->callback([&] {
    oc.result = to_json(prod_implies(product_upset_from_json(read_file(s_file)), product_upset_from_json(read_file(t_file))));
  });
  auto* qu_frob = quant->add_subcommand("frobenius", "Dual Frobenius check on a grid");
  qu_frob->add_option("--poset", poset_file)->required();
  qu_frob->add_option("--depth", qdepth)->capture_default_str();
  qu_frob->callback([&] {
    QuantVerdict v = frobenius_check(load_poset(poset_file), qdepth);
    oc.result = to_json(v);
    oc.ok = v.holds;
  });
  auto* qu_joins = quant->add_subcommand("joins", "∀ preserves finite joins");
  qu_joins->add_option("--poset", poset_file)->required();
  qu_joins->add_option("--depth", qdepth)->capture_default_str();
  qu_joins->add_flag("--control", control, "Quantify along the 2-antichain instead; expects a counterexample");
  qu_joins->callback([&] {
    FinPoset p = load_poset(poset_file);
    QuantVerdict v = control ? control_fiber_check(antichain(2), p) : join_preservation_check(p, qdepth);
    oc.result = to_json(v);
    oc.ok = control ? !v.holds : v.holds;
  });
  auto* qu_local = quant->add_subcommand("local", "Locality of U(Ω×P) for rooted P");
  qu_local->add_option("--poset", poset_file)->required();
  qu_local->add_option("--depth", qdepth)->capture_default_str();
  qu_local->callback([&] {
    QuantVerdict v = locality_check(load_poset(poset_file), qdepth);
    oc.result = to_json(v);
    oc.ok = v.holds;
  });
  auto* qu_glue = quant->add_subcommand("glue", "Artin glueing along a meet-preserving map");
  qu_glue->add_option("--hom", hom_file, "JSON {\"B\": lattice, \"A\": lattice, \"f\": {b: a}}")->required();
  qu_glue->callback([&] {
    json j = read_file(hom_file);
    if (!j.contains("A") || !j.contains("B") || !j.contains("f")) throw FormatError("hom file needs 'A', 'B' and 'f'");
    FinLattice b = lattice_from_json(j.at("B"));
    FinLattice a = lattice_from_json(j.at("A"));
    std::vector<std::size_t> f(b.size());
    for (std::size_t x = 0; x < b.size(); ++x) {
      if (!j.at("f").contains(b.label(x))) throw FormatError("'f' misses '" + b.label(x) + "'");
      f[x] = a.order().index_of(j.at("f").at(b.label(x)).get<std::string>());
    }
    GluedAlgebra g = glue(b, a, f);
    oc.result = lattice_tables(g.lattice);
    oc.result["heyting"] = !g.heyting_violation.has_value();
    if (g.heyting_violation) oc.result["violation"] = *g.heyting_violation;
    oc.result["r_is_heyting"] = g.r_is_heyting;
    oc.result["local"] = is_local(g.lattice);
    oc.ok = !g.heyting_violation && g.r_is_heyting;
  });

  // ---------------------------------------------------------------- verify
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::string suite = "all";
  bool timing = false;
  std::string suites_help = "Suite name or all:";
  for (const auto& s : suite_names()) suites_help += " " + s;
  verify->add_option("suite", suite, suites_help)->capture_default_str();
  verify->add_flag("--timing", timing, "Include wall time in the JSON report");
  verify->footer(
      "Grids (--grid):\n"
      "  default  posets<=4 (Ω, sheaves), roundtrip<=5, hom counts<=4, fiber depth 2,\n"
      "           utop depth 4 + raw size 8, oracle size 7, pi frames<=3 stage 4,\n"
      "           cocone bound 4, 500 soundness models\n"
      "  small    a faster slice of each of the above");
  verify->callback([&] {
    Grid grid = grid_named(grid_name);
    std::vector<std::string> names;
    if (suite == "all") {
      names = suite_names();
    } else {
      names.push_back(suite);
    }
    json reports = json::array();
    for (const auto& n : names) {
      Report r = run_suite(n, grid, seed);
      reports.push_back(r.to_json(timing));
      oc.ok = oc.ok && r.ok();
      std::ostringstream line;
      line << (r.ok() ? "PASS " : "FAIL ") << n << " (" << r.cases << " cases";
      if (timing) line << ", " << r.wall_seconds << " s";
      line << ")\n";
      for (const auto& f : r.failures) line << "  " << f.key << ": " << f.payload.dump() << "\n";
      oc.text += line.str();
    }
    oc.result = {{"grid", grid.to_json()}, {"seed", seed}, {"reports", reports}, {"passed", oc.ok}};
  });

  std::vector<std::string> argv_store;
  argv_store.push_back("ktopos");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  if (as_json) {
    out << oc.result.dump(2) << "\n";
  } else if (!oc.text.empty()) {
    out << oc.text;
  } else {
    out << render_text(oc.result);
  }
  return oc.ok ? kExitOk : kExitVerificationFailed;
}

}  // namespace ktopos::cli
