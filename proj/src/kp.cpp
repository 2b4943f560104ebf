#include "ktopos/kp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ktopos {

Coproduct coproduct(std::span<const FinPoset> parts) {
  std::vector<std::string> labels;
  std::vector<FinPoset::Pair> pairs;
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    offsets.push_back(offset);
    const auto& p = parts[i];
    for (std::size_t k = 0; k < p.size(); ++k) labels.push_back(std::to_string(i) + ":" + p.label(k));
    for (std::size_t a = 0; a < p.size(); ++a) {
      for (std::size_t b : members_of(p.up(a))) pairs.emplace_back(offset + a, offset + b);
    }
    offset += p.size();
  }
  if (offset > kMaxElements) throw SizeError("coproduct too large");
  FinPoset sum = FinPoset::from_pairs(std::move(labels), pairs);
  std::vector<OpenMap> inj;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::vector<std::size_t> a(parts[i].size());
    std::iota(a.begin(), a.end(), offsets[i]);
    inj.push_back(OpenMap::create(parts[i], sum, std::move(a)));
  }
  return Coproduct{sum, std::move(inj)};
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::string class_label(const FinPoset& p, const std::vector<std::size_t>& members) {
  if (members.size() == 1) return p.label(members[0]);
  std::string out = "[";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out += "|";
    out += p.label(members[i]);
  }
  return out + "]";
}

}  // namespace

Quotient coequalizer(const OpenMap& f, const OpenMap& g) {
  if (!(f.domain() == g.domain()) || !(f.codomain() == g.codomain())) {
    throw ParallelPairError("coequalizer needs a parallel pair with equal domain and codomain");
  }
  const FinPoset& p = f.codomain();
  UnionFind uf(p.size());
  for (std::size_t r = 0; r < f.domain().size(); ++r) uf.unite(f(r), g(r));

  std::vector<std::size_t> class_of(p.size());
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> root_to_class(p.size(), p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::size_t root = uf.find(x);
    if (root_to_class[root] == p.size()) {
      root_to_class[root] = classes.size();
      classes.emplace_back();
    }
    class_of[x] = root_to_class[root];
    classes[class_of[x]].push_back(x);
  }
  std::vector<Mask> class_mask(classes.size(), 0);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t x : classes[c]) class_mask[c] |= bit(x);
  }

  // [a] <= [b] iff ∃ p' >= p (p ∈ a) with p' ∈ b. Representative
  // independence is part of the construction's correctness; re-check it.
  const std::size_t k = classes.size();
  std::vector<FinPoset::Pair> rel;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      bool first = (p.up(classes[a][0]) & class_mask[b]) != 0;
      for (std::size_t x : classes[a]) {
        if (((p.up(x) & class_mask[b]) != 0) != first) {
          throw std::logic_error("coequalizer class order depends on the representative");
        }
      }
      if (first) rel.emplace_back(a, b);
    }
  }
  std::vector<std::string> labels;
  for (const auto& c : classes) labels.push_back(class_label(p, c));
  // The relation is reflexive by construction. from_pairs closes it
  // transitively and rejects antisymmetry failures with CycleError; a
  // correct θ never triggers either, so verify closure added nothing.
  FinPoset quotient = FinPoset::from_pairs(std::move(labels), rel);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      bool direct = std::find(rel.begin(), rel.end(), FinPoset::Pair{a, b}) != rel.end();
      if (direct != quotient.leq(a, b)) throw std::logic_error("coequalizer class order is not transitive");
    }
  }
  auto projection = OpenMap::create(p, quotient, class_of);
  return Quotient{p, std::move(classes), std::move(class_of), quotient, projection};
}

std::vector<std::size_t> antisymmetry_chain(const Quotient& q, std::size_t p, std::size_t other) {
  const FinPoset& src = q.source;
  Mask cls[2] = {0, 0};
  for (std::size_t x : q.classes[q.class_of[p]]) cls[0] |= bit(x);
  for (std::size_t x : q.classes[q.class_of[other]]) cls[1] |= bit(x);
  std::vector<std::size_t> chain{p};
  std::size_t current = p;
  // Alternate targets: class of `other`, then class of p, ...
  for (std::size_t step = 0; step <= 2 * src.size() + 2; ++step) {
    Mask target = cls[(step + 1) % 2];
    Mask candidates = src.up(current) & target;
    if (candidates == 0) break;  // the two classes are not mutually below each other
    std::size_t next = (candidates & bit(current)) ? current
                                                  : static_cast<std::size_t>(std::countr_zero(candidates));
    chain.push_back(next);
    if (next == current) break;
    current = next;
  }
  return chain;
}

UniversalityVerdict check_coequalizer_universal(const Quotient& q, const OpenMap& f, const OpenMap& g,
                                                std::size_t bound) {
  UniversalityVerdict v;
  const FinPoset& p = q.source;
  for (const auto& r : posets_up_to(bound)) {
    ++v.targets;
    for (const auto& k : open_assignments(p, r)) {
      bool cocone = true;
      for (std::size_t x = 0; x < f.domain().size() && cocone; ++x) cocone = k[f(x)] == k[g(x)];
      if (!cocone) continue;
      ++v.cocones;
      std::size_t factorizations = 0;
      for (const auto& u : open_assignments(q.quotient, r)) {
        bool commutes = true;
        for (std::size_t x = 0; x < p.size() && commutes; ++x) commutes = u[q.class_of[x]] == k[x];
        if (commutes) ++factorizations;
      }
      if (factorizations != 1) {
        v.universal = false;
        std::ostringstream os;
        os << "cocone into a " << r.size() << "-element poset has " << factorizations << " factorizations";
        v.failure = os.str();
        return v;
      }
    }
  }
  return v;
}

ImageFactorization image_factorize(const OpenMap& f) {
  Mask img = f.map().image();
  FinPoset image = induced_subposet(f.codomain(), img);
  auto idx = members_of(img);
  std::vector<std::size_t> pos(f.codomain().size(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = i;
  std::vector<std::size_t> onto(f.domain().size());
  for (std::size_t x = 0; x < onto.size(); ++x) onto[x] = pos[f(x)];
  auto surjection = OpenMap::create(f.domain(), image, std::move(onto));
  auto embedding = OpenMap::create(image, f.codomain(), idx);
  return ImageFactorization{surjection, embedding, image};
}

CoverFamily::CoverFamily(FinPoset target, std::vector<OpenMap> maps)
    : target_(std::move(target)), maps_(std::move(maps)) {
  for (const auto& m : maps_) {
    if (!(m.codomain() == target_)) throw CodomainMismatchError("cover member does not land in the target");
  }
}

CoverFamily rooted_cover(const FinPoset& p) {
  std::vector<OpenMap> maps;
  for (std::size_t i = 0; i < p.size(); ++i) maps.push_back(upset_inclusion(p, p.up(i)));
  return CoverFamily(p, std::move(maps));
}

bool is_cover(const CoverFamily& family) {
  Mask covered = 0;
  for (const auto& m : family.maps()) covered |= m.map().image();
  return covered == family.target().all();
}

EffectiveEpiVerdict check_effective_epi(const CoverFamily& family, std::size_t bound) {
  if (bound < 1) throw SizeError("cocone bound must be at least 1");
  if (bound > kMaxCoconeBound) {
    throw SizeError("cocone bound " + std::to_string(bound) + " exceeds limit " + std::to_string(kMaxCoconeBound));
  }
  EffectiveEpiVerdict v;
  v.bound = bound;
  v.cover = is_cover(family);
  const auto& maps = family.maps();
  const FinPoset& target = family.target();
  const std::size_t m = maps.size();

  // Agreement loci: pairs (x, y) in Q_i × Q_j with f_i x = f_j y.
  struct Locus {
    std::size_t i, j;
    std::vector<FinPoset::Pair> pairs;
  };
  std::vector<Locus> loci;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      auto pb = monoidal_pullback(maps[i], maps[j].map());
      Locus l{i, j, {}};
      for (std::size_t c = 0; c < pb.carrier.size(); ++c) l.pairs.emplace_back(pb.to_p(c), pb.to_r(c));
      loci.push_back(std::move(l));
    }
  }

  for (const auto& r : posets_up_to(bound)) {
    ++v.targets;
    std::vector<std::vector<std::vector<std::size_t>>> candidates(m);
    for (std::size_t i = 0; i < m; ++i) candidates[i] = open_assignments(maps[i].domain(), r);
    auto targets_to_p = open_assignments(target, r);
    std::vector<const std::vector<std::size_t>*> chosen(m, nullptr);

    auto compatible_upto = [&](std::size_t i) {
      for (const auto& l : loci) {
        if (l.i != i) continue;
        const auto& gi = *chosen[l.i];
        const auto& gj = *chosen[l.j];
        for (const auto& [x, y] : l.pairs) {
          if (gi[x] != gj[y]) return false;
        }
      }
      return true;
    };

    bool failed = false;
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (failed) return;
      if (i == m) {
        ++v.cocones;
        std::size_t count = 0;
        for (const auto& h : targets_to_p) {
          bool commutes = true;
          for (std::size_t k = 0; k < m && commutes; ++k) {
            const auto& gk = *chosen[k];
            for (std::size_t x = 0; x < gk.size() && commutes; ++x) commutes = h[maps[k](x)] == gk[x];
          }
          if (commutes) ++count;
        }
        if (count != 1) {
          failed = true;
          v.effective = false;
          std::ostringstream os;
          os << "compatible cocone into a " << r.size() << "-element poset factors " << count << " times";
          v.separating_cocone = os.str();
        }
        return;
      }
      for (const auto& cand : candidates[i]) {
        chosen[i] = &cand;
        if (compatible_upto(i)) self(self, i + 1);
        if (failed) return;
      }
    };
    rec(rec, 0);
    if (failed) break;
  }
  v.agrees = v.effective == v.cover;
  return v;
}

NotExactReport notexact_witness() {
  const FinPoset sigma = sierpinski();
  const Tensor sq = tensor(sigma, sigma);
  const FinPoset& s2 = sq.product;
  const std::size_t i01 = s2.index_of("(0,1)");
  const std::size_t i10 = s2.index_of("(1,0)");
  const std::size_t i11 = s2.index_of("(1,1)");
  auto f = OpenMap::create(sigma, s2, {i01, i11});
  auto g = OpenMap::create(sigma, s2, {i10, i11});
  auto q = coequalizer(f, g);
  std::vector<std::size_t> swap_assign(s2.size());
  std::iota(swap_assign.begin(), swap_assign.end(), std::size_t{0});
  std::swap(swap_assign[i01], swap_assign[i10]);
  auto u = OpenMap::identity(s2);
  auto v = OpenMap::create(s2, s2, swap_assign);

  NotExactReport rep{f, g, q, false, false, 0, {}, u, v, false, false, false};
  rep.quotient_is_three_chain = isomorphic(q.quotient, chain(3));
  rep.universal = check_coequalizer_universal(q, f, g, 4).universal;
  rep.joint_image = f.map().image() | g.map().image();
  rep.missing = members_of(s2.all() & ~rep.joint_image);
  bool eq = true;
  for (std::size_t x = 0; x < s2.size(); ++x) eq = eq && q.projection(u(x)) == q.projection(v(x));
  rep.hu_equals_hv = eq;
  rep.u_factors = (u.map().image() & ~rep.joint_image) == 0;
  rep.v_factors = (v.map().image() & ~rep.joint_image) == 0;
  return rep;
}

}  // namespace ktopos
