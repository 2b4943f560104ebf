#include "ktopos/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>

#include "ktopos/duality.hpp"
#include "ktopos/errors.hpp"
#include "ktopos/json_io.hpp"
#include "ktopos/kp.hpp"
#include "ktopos/ladder.hpp"
#include "ktopos/nerve.hpp"
#include "ktopos/prover.hpp"
#include "ktopos/quantifiers.hpp"

namespace ktopos {

using nlohmann::json;
using json_io::to_json;

json Grid::to_json() const {
  return {{"name", name},
          {"poset_max", poset_max},
          {"roundtrip_max", roundtrip_max},
          {"hom_count_max", hom_count_max},
          {"fiber_depth", fiber_depth},
          {"utop_depth", utop_depth},
          {"raw_size", raw_size},
          {"oracle_size", oracle_size},
          {"pi_frame_max", pi_frame_max},
          {"pi_stage_bound", pi_stage_bound},
          {"cocone_bound", cocone_bound},
          {"soundness_models", soundness_models}};
}

Grid grid_named(const std::string& name) {
  Grid g;
  if (name == "default") return g;
  if (name == "small") {
    g.name = "small";
    g.poset_max = 3;
    g.roundtrip_max = 4;
    g.hom_count_max = 3;
    g.fiber_depth = 1;
    g.utop_depth = 3;
    g.raw_size = 6;
    g.oracle_size = 5;
    g.pi_frame_max = 2;
    g.pi_stage_bound = 3;
    g.cocone_bound = 3;
    g.soundness_models = 50;
    return g;
  }
  throw std::invalid_argument("unknown grid '" + name + "' (expected default or small)");
}

json Report::to_json(bool timing) const {
  json fails = json::array();
  std::vector<Failure> sorted = failures;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Failure& a, const Failure& b) { return a.key < b.key; });
  for (const auto& f : sorted) fails.push_back({{"case", f.key}, {"payload", f.payload}});
  json out = {{"suite", suite}, {"cases", cases}, {"failures", fails}, {"grid", grid}, {"seed", seed}, {"passed", ok()}};
  if (timing) out["wall_seconds"] = wall_seconds;
  return out;
}

namespace {

std::string poset_key(const FinPoset& p) { return json_io::to_json(p).dump(); }

// Quantifier test frames: 1, Σ, the 3-chain and the rooted V.
std::vector<std::pair<std::string, FinPoset>> quant_frames() {
  return {{"1", point()}, {"sigma", sierpinski()}, {"chain3", chain(3)}, {"vee", rooted_vee()}};
}

void check_quant(Report& r, const std::string& prefix, const QuantVerdict& v, bool expected) {
  r.cases += v.cells;
  if (v.holds != expected) r.failures.push_back({prefix, to_json(v)});
}

void suite_coequalizer(Report& r, const Grid& g) {
  const NotExactReport w = notexact_witness();
  ++r.cases;
  if (!w.quotient_is_three_chain) {
    r.failures.push_back({"quotient", {{"quotient", to_json(w.coequalizer.quotient)}}});
  }
  ++r.cases;
  if (!is_open(w.coequalizer.projection.map())) r.failures.push_back({"projection-open", json::object()});
  const auto uv = check_coequalizer_universal(w.coequalizer, w.f, w.g, g.cocone_bound);
  r.cases += uv.cocones;
  if (!uv.universal) r.failures.push_back({"universal", {{"failure", uv.failure}}});
  ++r.cases;
  if (w.missing.size() != 1 || w.coequalizer.source.label(w.missing[0]) != "(0,0)") {
    r.failures.push_back({"joint-image", {{"missing", json_io::members_json(w.coequalizer.source, ~w.joint_image &
                                                                               w.coequalizer.source.all())}}});
  }
  ++r.cases;
  if (!w.hu_equals_hv || w.u_factors || w.v_factors) {
    r.failures.push_back({"swap-pair", {{"hu_equals_hv", w.hu_equals_hv}, {"u_factors", w.u_factors}, {"v_factors", w.v_factors}}});
  }
}

void suite_two_valued(Report& r, const Grid&) {
  const Presentation free1({"x"}, {});
  const std::map<std::string, std::size_t> counts = {
      {"models", models(free1, point()).models.size()},
      {"upsets", UpsetAlgebra(point()).size()},
      {"poset-nerve", poset_nerve(sierpinski(), point()).size()},
      {"gamma", cohesion_gamma(free1).size()},
  };
  for (const auto& [k, n] : counts) {
    ++r.cases;
    if (n != 2) r.failures.push_back({k, {{"count", n}}});
  }
}

void suite_omega(Report& r, const Grid& g) {
  const Presentation free1({"x"}, {});
  for (const auto& p : posets_up_to(g.poset_max)) {
    ++r.cases;
    const auto st = models(free1, p);
    const auto nerve = poset_nerve(sierpinski(), p);
    const auto ups = all_upsets(p);
    // Explicit bijections: model ↦ v(x); monotone χ ↦ χ⁻¹(1).
    std::vector<Upset> from_models, from_maps;
    for (const auto& v : st.models) from_models.push_back(v.at("x"));
    for (const auto& m : nerve) from_maps.push_back(Upset{m.preimage(bit(1))});
    std::sort(from_models.begin(), from_models.end());
    std::sort(from_maps.begin(), from_maps.end());
    if (from_models != ups || from_maps != ups) {
      r.failures.push_back({poset_key(p),
                            {{"models", st.models.size()}, {"monotone_maps", nerve.size()}, {"upsets", ups.size()}}});
    }
  }
}

json class_list(const std::vector<UtopClass>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back({{"element", to_string(c.element)}, {"formula", print(c.representative)}});
  return out;
}

void suite_utop(Report& r, const Grid& g) {
  Prover prover;
  const std::vector<RNElement> expected = {generic_x(), eval_one_var(parse("~~x")), RNElement::top()};
  auto elems = [](const std::vector<UtopClass>& cs) {
    std::vector<RNElement> out;
    for (const auto& c : cs) out.push_back(c.element);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<RNElement> want = expected;
  std::sort(want.begin(), want.end());
  const UtopSearch s = utop_search(g.utop_depth, prover);
  r.cases += s.classes.size();
  if (!s.exhaustive) r.failures.push_back({"class-search-coverage", {{"depth", g.utop_depth}}});
  if (elems(s.passing) != want) r.failures.push_back({"class-search", {{"passing", class_list(s.passing)}}});
  const RawSweep raw = utop_raw_sweep(g.raw_size, prover);
  r.cases += raw.formulas;
  if (elems(raw.passing) != want) r.failures.push_back({"raw-sweep", {{"passing", class_list(raw.passing)}}});
}

void suite_frobenius(Report& r, const Grid& g) {
  for (const auto& [name, p] : quant_frames()) check_quant(r, name, frobenius_check(p, g.fiber_depth), true);
}

void suite_joins(Report& r, const Grid& g) {
  for (const auto& [name, p] : quant_frames()) check_quant(r, name, join_preservation_check(p, g.fiber_depth), true);
  check_quant(r, "control-antichain", control_fiber_check(antichain(2), point()), false);
}

void suite_locality(Report& r, const Grid& g) {
  for (const auto& [name, p] : quant_frames()) check_quant(r, name, locality_check(p, g.fiber_depth), true);
  check_quant(r, "control-antichain", product_locality_check(antichain(2), g.fiber_depth), false);
  ++r.cases;
  if (is_local(UpsetAlgebra(antichain(2)))) r.failures.push_back({"control-antichain-U", json::object()});
}

void suite_duality(Report& r, const Grid& g) {
  for (const auto& p : posets_up_to(g.roundtrip_max)) {
    ++r.cases;
    const RoundTrip rt = roundtrip_poset(p);
    if (!rt.ok) r.failures.push_back({"roundtrip " + poset_key(p), {{"reason", rt.reason}}});
  }
  std::vector<FinPoset> small;
  for (const auto& p : posets_up_to(g.hom_count_max)) small.push_back(p);
  std::vector<FinLattice> lat;
  for (const auto& p : small) lat.push_back(to_lattice(UpsetAlgebra(p)));
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = 0; j < small.size(); ++j) {
      ++r.cases;
      const std::size_t opens = open_assignments(small[i], small[j]).size();
      const std::size_t homs = enumerate_homs(lat[j], lat[i], true).size();
      if (opens != homs) {
        r.failures.push_back({"homs " + poset_key(small[i]) + " " + poset_key(small[j]),
                              {{"open_maps", opens}, {"heyting_homs", homs}}});
      }
    }
  }
}

void suite_galois(Report& r, const Grid& g) {
  for (const auto& [name, p] : quant_frames()) check_quant(r, name, galois_check(p, g.fiber_depth), true);
}

void suite_cross_oracle(Report& r, const Grid& g) {
  Prover prover;
  for (const auto& f : formulas_up_to({"x"}, g.oracle_size)) {
    ++r.cases;
    const bool a = prover.provable(f);
    const bool b = eval_one_var(f).is_top();
    if (a != b) r.failures.push_back({print(f), {{"provable", a}, {"ladder_top", b}}});
  }
}

std::vector<Presentation> sheaf_pool() {
  std::vector<Presentation> out;
  const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> raw = {
      {{"x"}, {}},
      {{"x"}, {"x"}},
      {{"x"}, {"~x"}},
      {{"x"}, {"~~x"}},
      {{"x"}, {"x | ~x"}},
      {{"x"}, {"~~x -> x"}},
      {{"x", "y"}, {}},
      {{"x", "y"}, {"x -> y"}},
      {{"x", "y"}, {"x | y"}},
      {{"x", "y"}, {"~(x & y)"}},
      {{"x", "y"}, {"(x -> y) | y"}},
      {{"x", "y"}, {"x | ~x", "y -> x"}},
  };
  for (const auto& [gens, rels] : raw) {
    std::vector<Formula> fs;
    for (const auto& s : rels) fs.push_back(parse(s));
    out.emplace_back(gens, fs);
  }
  return out;
}

void suite_sheaf(Report& r, const Grid& g) {
  const auto pool = sheaf_pool();
  for (const auto& p : posets_up_to(g.poset_max)) {
    if (p.empty()) continue;
    const CoverFamily covers[] = {rooted_cover(p), CoverFamily(p, {OpenMap::identity(p)})};
    for (const auto& a : pool) {
      for (std::size_t c = 0; c < 2; ++c) {
        ++r.cases;
        const SheafVerdict v = sheaf_check(a, covers[c]);
        if (!v.holds) {
          r.failures.push_back({poset_key(p) + (c == 0 ? " rooted " : " identity ") + to_json(a).dump(),
                                {{"failure", v.failure},
                                 {"models", v.models},
                                 {"compatible_families", v.compatible_families}}});
        }
      }
    }
  }
}

void suite_pi_connect(Report& r, const Grid& g) {
  const auto frames = rooted_posets_up_to(g.pi_frame_max);
  for (const auto& p : frames) {
    for (const auto& q : frames) {
      for (const auto& a : all_upsets(p)) {
        for (const auto& b : all_upsets(q)) {
          ++r.cases;
          try {
            const Zigzag z = pi_connect(p, a, q, b, g.pi_stage_bound);
            if (z.nodes.empty() || z.nodes.size() != z.steps.size() + 1) {
              r.failures.push_back({poset_key(p) + poset_key(q), {{"reason", "malformed zigzag"}}});
            }
          } catch (const SearchExhaustedError& e) {
            r.failures.push_back({poset_key(p) + json_io::members_json(p, a.members).dump() + " " + poset_key(q) +
                                      json_io::members_json(q, b.members).dump(),
                                  {{"reason", e.what()}}});
          }
        }
      }
    }
  }
}

void suite_soundness(Report& r, const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Prover prover;
  const std::vector<std::string> vars = {"x", "y"};
  std::vector<Formula> valid, invalid;
  for (const auto& f : formulas_up_to(vars, 6)) (prover.provable(f) ? valid : invalid).push_back(f);
  std::vector<FinPoset> frames;
  for (const auto& p : posets_up_to(4)) {
    if (!p.empty()) frames.push_back(p);
  }
  for (std::size_t k = 0; k < g.soundness_models; ++k) {
    const FinPoset& p = frames[rng() % frames.size()];
    const auto ups = all_upsets(p);
    std::map<std::string, Upset> v;
    for (const auto& x : vars) v.emplace(x, ups[rng() % ups.size()]);
    const KripkeModel m(p, v);
    for (const auto& f : valid) {
      ++r.cases;
      if (truth_set(m, f) != p.all()) {
        r.failures.push_back({"model " + std::to_string(k) + " " + print(f), {{"model", to_json(m)}}});
      }
    }
  }
  // Countermodels for a seeded sample of unprovable formulas.
  for (std::size_t k = 0; k < std::min<std::size_t>(g.soundness_models, invalid.size()); ++k) {
    const Formula& f = invalid[rng() % invalid.size()];
    ++r.cases;
    const auto cm = prover.canonical_countermodel(f);
    if (!cm || force(cm->model, cm->point, f)) r.failures.push_back({"countermodel " + print(f), json::object()});
  }
}

using SuiteFn = std::function<void(Report&, const Grid&, std::uint64_t)>;

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> m = {
      {"coequalizer", [](Report& r, const Grid& g, std::uint64_t) { suite_coequalizer(r, g); }},
      {"two-valued", [](Report& r, const Grid& g, std::uint64_t) { suite_two_valued(r, g); }},
      {"omega", [](Report& r, const Grid& g, std::uint64_t) { suite_omega(r, g); }},
      {"utop", [](Report& r, const Grid& g, std::uint64_t) { suite_utop(r, g); }},
      {"frobenius", [](Report& r, const Grid& g, std::uint64_t) { suite_frobenius(r, g); }},
      {"joins", [](Report& r, const Grid& g, std::uint64_t) { suite_joins(r, g); }},
      {"locality", [](Report& r, const Grid& g, std::uint64_t) { suite_locality(r, g); }},
      {"duality", [](Report& r, const Grid& g, std::uint64_t) { suite_duality(r, g); }},
      {"galois", [](Report& r, const Grid& g, std::uint64_t) { suite_galois(r, g); }},
      {"cross-oracle", [](Report& r, const Grid& g, std::uint64_t) { suite_cross_oracle(r, g); }},
      {"sheaf", [](Report& r, const Grid& g, std::uint64_t) { suite_sheaf(r, g); }},
      {"pi-connect", [](Report& r, const Grid& g, std::uint64_t) { suite_pi_connect(r, g); }},
      {"soundness", suite_soundness},
  };
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"coequalizer", "two-valued", "omega",        "utop",
                                                 "frobenius",   "joins",      "locality",     "duality",
                                                 "galois",      "cross-oracle", "sheaf",      "pi-connect",
                                                 "soundness"};
  return names;
}

Report run_suite(const std::string& name, const Grid& grid, std::uint64_t seed) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + name + "'");
  Report r;
  r.suite = name;
  r.grid = grid.to_json();
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  it->second(r, grid, seed);
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace ktopos
