#include "ktopos/nerve.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "ktopos/errors.hpp"

namespace ktopos {

Presentation::Presentation(std::vector<std::string> generators, std::vector<Formula> relations)
    : generators_(std::move(generators)), relations_(std::move(relations)) {
  std::set<std::string> gens;
  for (const auto& g : generators_) {
    if (!gens.insert(g).second) throw DuplicateLabelError("generator '" + g + "' listed twice");
  }
  for (const auto& r : relations_) {
    for (const auto& v : variables(r)) {
      if (!gens.count(v)) throw UnboundVariableError("relation mentions '" + v + "', which is not a generator");
    }
  }
}

std::optional<std::size_t> NerveStage::find(const Valuation& v) const {
  auto it = std::find(models.begin(), models.end(), v);
  if (it == models.end()) return std::nullopt;
  return static_cast<std::size_t>(it - models.begin());
}

NerveStage models(const Presentation& a, const FinPoset& p) {
  const auto ups = all_upsets(p);
  const auto& gens = a.generators();
  double count = 1;
  for (std::size_t k = 0; k < gens.size(); ++k) count *= static_cast<double>(ups.size());
  if (count > static_cast<double>(kMaxValuations)) {
    throw SizeError("model enumeration would visit " + std::to_string(static_cast<long long>(count)) + " valuations");
  }
  NerveStage stage{a, p, {}};
  std::vector<std::size_t> idx(gens.size(), 0);
  std::map<std::string, Mask> v;
  while (true) {
    for (std::size_t k = 0; k < gens.size(); ++k) v[gens[k]] = ups[idx[k]].members;
    bool ok = true;
    for (const auto& r : a.relations()) {
      if (evaluate_upsets(p, r, v) != p.all()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      Valuation m;
      for (const auto& [name, mask] : v) m.emplace(name, Upset{mask});
      stage.models.push_back(std::move(m));
    }
    std::size_t k = gens.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < ups.size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  return stage;
}

Valuation pull_back(const Valuation& v, const MonotoneMap& f) {
  Valuation out;
  for (const auto& [name, u] : v) out.emplace(name, Upset{f.preimage(u.members)});
  return out;
}

std::vector<std::size_t> restrict_models(const NerveStage& over_p, const NerveStage& over_q, const MonotoneMap& f) {
  if (!(f.codomain() == over_p.frame) || !(f.domain() == over_q.frame)) {
    throw CodomainMismatchError("restriction map does not run between the two stages' frames");
  }
  if (!is_open(f)) throw NotOpenError("restriction needs an open map");
  std::vector<std::size_t> out;
  for (const auto& v : over_p.models) {
    auto i = over_q.find(pull_back(v, f));
    if (!i) throw std::logic_error("restriction of a model is not a model");
    out.push_back(*i);
  }
  return out;
}

std::vector<MonotoneMap> poset_nerve(const FinPoset& l, const FinPoset& p) {
  double count = 1;
  for (std::size_t k = 0; k < p.size(); ++k) count *= static_cast<double>(l.size());
  if (count > static_cast<double>(kMaxValuations)) throw SizeError("too many candidate maps for the poset nerve");
  std::vector<MonotoneMap> out;
  for (auto& a : monotone_assignments(p, l)) out.push_back(MonotoneMap::create(p, l, std::move(a)));
  return out;
}

namespace {

std::string gen_name(std::size_t i) { return "d" + std::to_string(i); }

Formula iff(const Formula& a, const Formula& b) {
  return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
}

}  // namespace

Presentation table_presentation(const FinLattice& d) {
  std::vector<std::string> gens;
  for (std::size_t i = 0; i < d.size(); ++i) gens.push_back(gen_name(i));
  auto g = [](std::size_t i) { return Formula::var(gen_name(i)); };
  std::vector<Formula> rel;
  rel.push_back(Formula::negation(g(d.bottom())));
  rel.push_back(g(d.top()));
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      rel.push_back(iff(g(d.meet(a, b)), Formula::conj(g(a), g(b))));
      rel.push_back(iff(g(d.join(a, b)), Formula::disj(g(a), g(b))));
    }
  }
  return Presentation(std::move(gens), std::move(rel));
}

FreeNerveVerdict free_nerve_check(const FinLattice& d, const FinPoset& p) {
  FreeNerveVerdict out;
  const Spectrum sp = spectrum(d);
  const NerveStage stage = models(table_presentation(d), p);
  const auto maps = poset_nerve(sp.points, p);
  out.models = stage.models.size();
  out.monotone_maps = maps.size();
  std::set<std::size_t> hit;
  for (const auto& v : stage.models) {
    std::vector<std::size_t> assignment;
    for (std::size_t x = 0; x < p.size(); ++x) {
      std::vector<bool> row(d.size());
      for (std::size_t e = 0; e < d.size(); ++e) row[e] = v.at(gen_name(e)).contains(x);
      auto it = std::find(sp.models.begin(), sp.models.end(), row);
      if (it == sp.models.end()) {
        out.failure = "model at point '" + p.label(x) + "' is not a lattice hom to 2";
        return out;
      }
      assignment.push_back(static_cast<std::size_t>(it - sp.models.begin()));
    }
    auto it = std::find_if(maps.begin(), maps.end(), [&](const MonotoneMap& m) { return m.assignment() == assignment; });
    if (it == maps.end()) {
      out.failure = "model does not give a monotone map into the spectrum";
      return out;
    }
    const auto k = static_cast<std::size_t>(it - maps.begin());
    if (!hit.insert(k).second) {
      out.failure = "two models give the same monotone map";
      return out;
    }
    out.bijection.push_back(k);
  }
  if (out.models != out.monotone_maps) {
    out.failure = "counts differ: " + std::to_string(out.models) + " models, " + std::to_string(out.monotone_maps) +
                  " monotone maps";
    return out;
  }
  out.holds = true;
  return out;
}

SheafVerdict sheaf_check(const Presentation& a, const CoverFamily& cover) {
  if (!is_cover(cover)) throw NotCoverError("family is not jointly surjective");
  SheafVerdict out;
  const auto& maps = cover.maps();
  const std::size_t n = maps.size();
  const NerveStage whole = models(a, cover.target());
  std::vector<NerveStage> parts;
  for (const auto& m : maps) parts.push_back(models(a, m.domain()));

  // For each pair i <= j, the restrictions of each model of Q_i and of Q_j
  // to the monoidal pullback Q_i ⊗_P Q_j.
  struct PairData {
    std::vector<Valuation> left;   // from Q_i along the Q_i leg
    std::vector<Valuation> right;  // from Q_j along the Q_j leg
  };
  std::vector<std::vector<PairData>> pair(n, std::vector<PairData>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const MonoidalPullback mp = monoidal_pullback(maps[i], maps[j].map());
      for (const auto& v : parts[i].models) pair[i][j].left.push_back(pull_back(v, mp.to_p));
      for (const auto& v : parts[j].models) pair[i][j].right.push_back(pull_back(v, mp.to_r.map()));
    }
  }
  std::set<std::vector<std::size_t>> families;
  std::vector<std::size_t> pick(n);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == n) {
      families.insert(pick);
      return;
    }
    for (std::size_t c = 0; c < parts[j].models.size(); ++c) {
      pick[j] = c;
      bool ok = true;
      for (std::size_t i = 0; i <= j && ok; ++i) ok = pair[i][j].left[pick[i]] == pair[i][j].right[c];
      if (ok) self(self, j + 1);
    }
  };
  rec(rec, 0);
  out.models = whole.models.size();
  out.compatible_families = families.size();

  std::set<std::vector<std::size_t>> glued;
  for (const auto& v : whole.models) {
    std::vector<std::size_t> fam;
    for (std::size_t i = 0; i < n; ++i) {
      auto k = parts[i].find(pull_back(v, maps[i]));
      if (!k) {
        out.failure = "restriction of a model to a cover member is not a model";
        return out;
      }
      fam.push_back(*k);
    }
    if (!families.count(fam)) {
      out.failure = "restriction of a model is not a compatible family";
      return out;
    }
    if (!glued.insert(fam).second) {
      out.failure = "two models restrict to the same family";
      return out;
    }
  }
  if (glued.size() != families.size()) {
    out.failure = std::to_string(families.size() - glued.size()) + " compatible families do not glue";
    return out;
  }
  out.holds = true;
  return out;
}

std::vector<Valuation> cohesion_gamma(const Presentation& a) { return models(a, point()).models; }

std::vector<std::string> cohesion_delta(const std::vector<std::string>& s, const FinPoset&) { return s; }

std::vector<std::map<std::string, std::string>> cohesion_nabla(const std::vector<std::string>& s, const FinPoset& p) {
  const auto maxes = members_of(max_elements(p));
  std::vector<std::map<std::string, std::string>> out;
  if (s.empty() && !maxes.empty()) return out;
  std::vector<std::size_t> idx(maxes.size(), 0);
  while (true) {
    std::map<std::string, std::string> f;
    for (std::size_t k = 0; k < maxes.size(); ++k) f.emplace(p.label(maxes[k]), s[idx[k]]);
    out.push_back(std::move(f));
    std::size_t k = maxes.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (++idx[k] < s.size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) return out;
  }
}

Zigzag pi_connect(const FinPoset& p, Upset a, const FinPoset& q, Upset b, std::size_t stage_bound) {
  if (!is_rooted(p) || !is_rooted(q)) throw NotRootedError("pi_connect needs rooted frames");
  if (stage_bound < std::max(p.size(), q.size()) || stage_bound > 5) {
    throw SizeError("stage bound must cover both frames and be at most 5");
  }
  if (!p.is_upset(a.members) || !q.is_upset(b.members)) throw NotUpsetError("pi_connect needs upsets");
  const auto frames = rooted_posets_up_to(stage_bound);

  auto canonical = [&](const FinPoset& f, Upset u) {
    for (std::size_t k = 0; k < frames.size(); ++k) {
      if (auto iso = find_isomorphism(f, frames[k])) {
        Mask m = 0;
        for (std::size_t x : members_of(u.members)) m |= bit((*iso)[x]);
        return std::make_pair(k, m);
      }
    }
    throw std::logic_error("rooted frame missing from the enumeration");
  };

  std::vector<std::pair<std::size_t, Mask>> nodes;
  std::map<std::pair<std::size_t, Mask>, std::size_t> node_id;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    for (const auto& u : all_upsets(frames[k])) {
      node_id.emplace(std::make_pair(k, u.members), nodes.size());
      nodes.emplace_back(k, u.members);
    }
  }
  struct Edge {
    std::size_t to;
    std::size_t map;
    bool restrict;
  };
  std::vector<OpenMap> all_maps;
  std::vector<std::vector<Edge>> adj(nodes.size());
  for (std::size_t k1 = 0; k1 < frames.size(); ++k1) {
    for (std::size_t k2 = 0; k2 < frames.size(); ++k2) {
      for (auto& f : open_maps(frames[k1], frames[k2])) {
        const std::size_t mi = all_maps.size();
        for (const auto& u : all_upsets(frames[k2])) {
          const std::size_t from = node_id.at({k2, u.members});
          const std::size_t to = node_id.at({k1, f.map().preimage(u.members)});
          adj[from].push_back({to, mi, true});
          adj[to].push_back({from, mi, false});
        }
        all_maps.push_back(std::move(f));
      }
    }
  }

  const std::size_t start = node_id.at(canonical(p, a));
  const std::size_t goal = node_id.at(canonical(q, b));
  std::vector<std::optional<std::pair<std::size_t, Edge>>> parent(nodes.size());
  std::vector<bool> seen(nodes.size(), false);
  std::deque<std::size_t> queue{start};
  seen[start] = true;
  Zigzag z;
  z.stage_bound = stage_bound;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    ++z.explored;
    if (cur == goal) break;
    for (const auto& e : adj[cur]) {
      if (seen[e.to]) continue;
      seen[e.to] = true;
      parent[e.to] = std::make_pair(cur, e);
      queue.push_back(e.to);
    }
  }
  if (!seen[goal]) {
    throw SearchExhaustedError("no zigzag within " + std::to_string(stage_bound) + "-element rooted frames");
  }
  std::vector<std::size_t> path{goal};
  std::vector<Edge> edges;
  for (std::size_t cur = goal; cur != start;) {
    const auto& [prev, e] = *parent[cur];
    edges.push_back(e);
    path.push_back(prev);
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  std::reverse(edges.begin(), edges.end());
  for (std::size_t id : path) z.nodes.push_back({frames[nodes[id].first], Upset{nodes[id].second}});
  for (const auto& e : edges) z.steps.push_back({all_maps[e.map], e.restrict});
  return z;
}

}  // namespace ktopos
