#include "ktopos/poset.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_set>

namespace ktopos {

std::vector<std::size_t> members_of(Mask m) {
  std::vector<std::size_t> out;
  out.reserve(popcount(m));
  while (m != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

FinPoset::FinPoset() : d_(std::make_shared<const Data>()) {}

FinPoset FinPoset::from_pairs(std::vector<std::string> labels, std::span<const Pair> pairs) {
  const std::size_t n = labels.size();
  if (n > kMaxElements) {
    throw SizeError("poset has " + std::to_string(n) + " elements; limit is " +
                    std::to_string(kMaxElements));
  }
  {
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) throw DuplicateLabelError("duplicate label '" + l + "'");
    }
  }
  std::vector<Mask> up(n);
  for (std::size_t i = 0; i < n; ++i) up[i] = bit(i);
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) throw UnknownElementError("relation pair refers to a missing element");
    up[a] |= bit(b);
  }
  // Warshall on bitsets.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (up[i] & bit(k)) up[i] |= up[k];
    }
  }
  std::vector<Mask> down(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : members_of(up[i])) down[j] |= bit(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Mask both = up[i] & down[i] & ~bit(i);
    if (both != 0) {
      std::size_t j = static_cast<std::size_t>(std::countr_zero(both));
      throw CycleError("order closure identifies '" + labels[i] + "' and '" + labels[j] + "'");
    }
  }
  auto d = std::make_shared<Data>();
  d->labels = std::move(labels);
  d->up = std::move(up);
  d->down = std::move(down);
  return FinPoset(std::move(d));
}

FinPoset FinPoset::from_label_pairs(std::vector<std::string> labels,
                                    std::span<const std::pair<std::string, std::string>> pairs) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  std::vector<Pair> idx;
  idx.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end()) throw UnknownElementError("unknown element '" + a + "'");
    if (ib == index.end()) throw UnknownElementError("unknown element '" + b + "'");
    idx.emplace_back(ia->second, ib->second);
  }
  return from_pairs(std::move(labels), idx);
}

FinPoset validate_poset(std::vector<std::string> labels,
                        std::span<const std::pair<std::string, std::string>> pairs) {
  return FinPoset::from_label_pairs(std::move(labels), pairs);
}

std::optional<std::size_t> FinPoset::find(std::string_view label) const {
  for (std::size_t i = 0; i < size(); ++i) {
    if (d_->labels[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t FinPoset::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw UnknownElementError("unknown element '" + std::string(label) + "'");
}

Mask FinPoset::up_closure(Mask m) const {
  Mask out = 0;
  for (std::size_t i : members_of(m)) out |= d_->up[i];
  return out;
}

Mask FinPoset::down_closure(Mask m) const {
  Mask out = 0;
  for (std::size_t i : members_of(m)) out |= d_->down[i];
  return out;
}

std::vector<FinPoset::Pair> FinPoset::covers() const {
  std::vector<Pair> out;
  for (std::size_t a = 0; a < size(); ++a) {
    Mask strict = up(a) & ~bit(a);
    for (std::size_t b : members_of(strict)) {
      // b covers a iff no c strictly between.
      Mask between = strict & down(b) & ~bit(b);
      if (between == 0) out.emplace_back(a, b);
    }
  }
  return out;
}

bool operator==(const FinPoset& a, const FinPoset& b) {
  if (a.d_ == b.d_) return true;
  return a.d_->labels == b.d_->labels && a.d_->up == b.d_->up;
}

namespace {

std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

FinPoset point() { return FinPoset::from_pairs({"*"}, {}); }

FinPoset sierpinski() { return chain(2); }

FinPoset chain(std::size_t n) {
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return FinPoset::from_pairs(index_labels(n), pairs);
}

FinPoset antichain(std::size_t n) { return FinPoset::from_pairs(index_labels(n), {}); }

FinPoset rooted_vee() {
  const std::vector<FinPoset::Pair> pairs{{0, 1}, {0, 2}};
  return FinPoset::from_pairs({"r", "a", "b"}, pairs);
}

Upset make_upset(const FinPoset& p, Mask members) {
  if ((members & ~p.all()) != 0) throw UnknownElementError("upset mentions elements outside the poset");
  if (!p.is_upset(members)) throw NotUpsetError("subset is not upward closed");
  return Upset{members};
}

Upset up_cone(const FinPoset& p, std::size_t element) {
  if (element >= p.size()) throw UnknownElementError("element index out of range");
  return Upset{p.up(element)};
}

Mask max_elements(const FinPoset& p) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.up(i) == bit(i)) out |= bit(i);
  }
  return out;
}

Mask min_elements(const FinPoset& p) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.down(i) == bit(i)) out |= bit(i);
  }
  return out;
}

std::optional<std::size_t> root_of(const FinPoset& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.up(i) == p.all()) return i;
  }
  return std::nullopt;
}

bool is_rooted(const FinPoset& p) { return root_of(p).has_value(); }

// ---------------------------------------------------------------------------
// Maps

MonotoneMap MonotoneMap::create(FinPoset domain, FinPoset codomain, std::vector<std::size_t> assignment) {
  if (assignment.size() != domain.size()) {
    throw UnknownElementError("assignment size does not match the domain");
  }
  for (std::size_t a : assignment) {
    if (a >= codomain.size()) throw UnknownElementError("assignment leaves the codomain");
  }
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j : members_of(domain.up(i))) {
      if (!codomain.leq(assignment[i], assignment[j])) {
        throw NotMonotoneError("map is not monotone: " + domain.label(i) + " <= " + domain.label(j) +
                               " but images are not ordered");
      }
    }
  }
  return MonotoneMap(std::move(domain), std::move(codomain), std::move(assignment));
}

MonotoneMap MonotoneMap::identity(const FinPoset& p) {
  std::vector<std::size_t> a(p.size());
  std::iota(a.begin(), a.end(), std::size_t{0});
  return MonotoneMap(p, p, std::move(a));
}

Mask MonotoneMap::image() const { return image_of(domain_.all()); }

Mask MonotoneMap::image_of(Mask m) const {
  Mask out = 0;
  for (std::size_t i : members_of(m)) out |= bit(assignment_[i]);
  return out;
}

Mask MonotoneMap::preimage(Mask m) const {
  Mask out = 0;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (m & bit(assignment_[i])) out |= bit(i);
  }
  return out;
}

bool MonotoneMap::is_injective() const { return popcount(image()) == domain_.size(); }

bool operator==(const MonotoneMap& a, const MonotoneMap& b) {
  return a.assignment_ == b.assignment_ && a.domain_ == b.domain_ && a.codomain_ == b.codomain_;
}

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  if (!(f.codomain() == g.domain())) throw CodomainMismatchError("cannot compose: codomain differs from domain");
  std::vector<std::size_t> a(f.domain().size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = g(f(i));
  return MonotoneMap::create(f.domain(), g.codomain(), std::move(a));
}

bool lifts(const FinPoset& dom, const FinPoset& cod, std::span<const std::size_t> assignment) {
  for (std::size_t p = 0; p < dom.size(); ++p) {
    Mask reachable = 0;
    for (std::size_t p2 : members_of(dom.up(p))) reachable |= bit(assignment[p2]);
    if ((cod.up(assignment[p]) & ~reachable) != 0) return false;
  }
  return true;
}

OpenCheck is_open(const MonotoneMap& f) {
  const auto& dom = f.domain();
  const auto& cod = f.codomain();
  for (std::size_t p = 0; p < dom.size(); ++p) {
    Mask reachable = f.image_of(dom.up(p));
    Mask missing = cod.up(f(p)) & ~reachable;
    if (missing != 0) {
      return OpenCheck{false, FinPoset::Pair{p, static_cast<std::size_t>(std::countr_zero(missing))}};
    }
  }
  return OpenCheck{};
}

OpenMap OpenMap::create(MonotoneMap m) {
  auto check = is_open(m);
  if (!check) {
    const auto [p, q] = *check.witness;
    throw NotOpenError("map is not open: no lift above '" + m.domain().label(p) + "' onto '" +
                       m.codomain().label(q) + "'");
  }
  return OpenMap(std::move(m));
}

OpenMap OpenMap::create(FinPoset domain, FinPoset codomain, std::vector<std::size_t> assignment) {
  return create(MonotoneMap::create(std::move(domain), std::move(codomain), std::move(assignment)));
}

OpenMap compose(const OpenMap& g, const OpenMap& f) { return OpenMap::create(compose(g.map(), f.map())); }

// ---------------------------------------------------------------------------
// Products and pullbacks

Tensor tensor(const FinPoset& p, const FinPoset& q) {
  const std::size_t n = p.size() * q.size();
  if (n > kMaxElements) throw SizeError("tensor product exceeds " + std::to_string(kMaxElements) + " elements");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) labels.push_back("(" + p.label(i) + "," + q.label(j) + ")");
  }
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      for (std::size_t i2 : members_of(p.up(i))) {
        for (std::size_t j2 : members_of(q.up(j))) pairs.emplace_back(i * q.size() + j, i2 * q.size() + j2);
      }
    }
  }
  FinPoset prod = FinPoset::from_pairs(std::move(labels), pairs);
  std::vector<std::size_t> first(n), second(n);
  for (std::size_t k = 0; k < n; ++k) {
    first[k] = k / q.size();
    second[k] = k % q.size();
  }
  auto pi1 = OpenMap::create(prod, p, std::move(first));
  auto pi2 = OpenMap::create(prod, q, std::move(second));
  return Tensor{prod, pi1, pi2};
}

MonoidalPullback monoidal_pullback(const OpenMap& f, const MonotoneMap& g) {
  if (!(f.codomain() == g.codomain())) {
    throw CodomainMismatchError("monoidal pullback needs maps into the same poset");
  }
  const FinPoset& p = f.domain();
  const FinPoset& r = g.domain();
  std::vector<std::pair<std::size_t, std::size_t>> carrier;
  for (std::size_t ri = 0; ri < r.size(); ++ri) {
    for (std::size_t pi = 0; pi < p.size(); ++pi) {
      if (g(ri) == f(pi)) carrier.emplace_back(ri, pi);
    }
  }
  if (carrier.size() > kMaxElements) throw SizeError("monoidal pullback too large");
  std::vector<std::string> labels;
  for (const auto& [ri, pi] : carrier) labels.push_back("(" + r.label(ri) + "," + p.label(pi) + ")");
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t a = 0; a < carrier.size(); ++a) {
    for (std::size_t b = 0; b < carrier.size(); ++b) {
      if (r.leq(carrier[a].first, carrier[b].first) && p.leq(carrier[a].second, carrier[b].second)) {
        pairs.emplace_back(a, b);
      }
    }
  }
  FinPoset c = FinPoset::from_pairs(std::move(labels), pairs);
  std::vector<std::size_t> to_r(carrier.size()), to_p(carrier.size());
  for (std::size_t k = 0; k < carrier.size(); ++k) {
    to_r[k] = carrier[k].first;
    to_p[k] = carrier[k].second;
  }
  auto h = OpenMap::create(c, r, std::move(to_r));
  auto u = MonotoneMap::create(c, p, std::move(to_p));
  return MonoidalPullback{c, h, u};
}

FinPoset induced_subposet(const FinPoset& p, Mask members) {
  auto idx = members_of(members);
  std::vector<std::string> labels;
  for (std::size_t i : idx) labels.push_back(p.label(i));
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if (p.leq(idx[a], idx[b])) pairs.emplace_back(a, b);
    }
  }
  return FinPoset::from_pairs(std::move(labels), pairs);
}

OpenMap upset_inclusion(const FinPoset& p, Mask members) {
  make_upset(p, members);
  FinPoset sub = induced_subposet(p, members);
  return OpenMap::create(sub, p, members_of(members));
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Relation code for a labelled poset on n <= 6 points: bit (i*n+j) set iff i<j strictly.
std::uint64_t relation_code(const std::vector<Mask>& up, std::span<const std::size_t> perm) {
  const std::size_t n = up.size();
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && (up[i] & bit(j))) code |= std::uint64_t{1} << (perm[i] * n + perm[j]);
    }
  }
  return code;
}

std::vector<FinPoset> generate_posets(std::size_t n) {
  // Naturally labelled candidates: strict pairs only go from i to j > i.
  std::vector<FinPoset::Pair> slots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  }
  std::vector<std::size_t> perm(n);
  std::set<std::uint64_t> seen;
  std::vector<FinPoset> out;
  const std::uint64_t combos = std::uint64_t{1} << slots.size();
  for (std::uint64_t c = 0; c < combos; ++c) {
    std::vector<Mask> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = bit(i);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (c & (std::uint64_t{1} << s)) up[slots[s].first] |= bit(slots[s].second);
    }
    bool transitive = true;
    for (std::size_t i = 0; i < n && transitive; ++i) {
      for (std::size_t j : members_of(up[i])) {
        if ((up[j] & ~up[i]) != 0) {
          transitive = false;
          break;
        }
      }
    }
    if (!transitive) continue;
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::uint64_t canon = ~std::uint64_t{0};
    do {
      canon = std::min(canon, relation_code(up, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!seen.insert(canon).second) continue;
    std::vector<FinPoset::Pair> pairs;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (c & (std::uint64_t{1} << s)) pairs.push_back(slots[s]);
    }
    out.push_back(FinPoset::from_pairs(index_labels(n), pairs));
  }
  return out;
}

}  // namespace

std::vector<FinPoset> posets_of_size(std::size_t n) {
  if (n > 6) throw SizeError("poset enumeration is limited to 6 elements");
  static std::mutex mu;
  static std::map<std::size_t, std::vector<FinPoset>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, generate_posets(n)).first;
  return it->second;
}

std::vector<FinPoset> posets_up_to(std::size_t max_n) {
  std::vector<FinPoset> out;
  for (std::size_t n = 0; n <= max_n; ++n) {
    auto ps = posets_of_size(n);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

std::vector<FinPoset> rooted_posets_up_to(std::size_t max_n) {
  std::vector<FinPoset> out;
  for (std::size_t n = 1; n <= max_n; ++n) {
    for (auto& p : posets_of_size(n)) {
      if (is_rooted(p)) out.push_back(p);
    }
  }
  return out;
}

std::optional<std::vector<std::size_t>> find_isomorphism(const FinPoset& a, const FinPoset& b) {
  const std::size_t n = a.size();
  if (n != b.size()) return std::nullopt;
  std::vector<std::size_t> assign(n);
  Mask used = 0;
  // Backtracking with degree pruning.
  auto degree_ok = [&](std::size_t i, std::size_t j) {
    return popcount(a.up(i)) == popcount(b.up(j)) && popcount(a.down(i)) == popcount(b.down(j));
  };
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if ((used & bit(j)) || !degree_ok(i, j)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = a.leq(k, i) == b.leq(assign[k], j) && a.leq(i, k) == b.leq(j, assign[k]);
      }
      if (!ok) continue;
      assign[i] = j;
      used |= bit(j);
      if (self(self, i + 1)) return true;
      used &= ~bit(j);
    }
    return false;
  };
  if (rec(rec, 0)) return assign;
  return std::nullopt;
}

bool isomorphic(const FinPoset& a, const FinPoset& b) { return find_isomorphism(a, b).has_value(); }

namespace {

template <typename Accept>
std::vector<std::vector<std::size_t>> backtrack_maps(const FinPoset& dom, const FinPoset& cod, Accept accept) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = dom.size();
  if (n > 0 && cod.size() == 0) return out;
  std::vector<std::size_t> a(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      if (accept(a)) out.push_back(a);
      return;
    }
    for (std::size_t y = 0; y < cod.size(); ++y) {
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        if (dom.leq(k, i) && !cod.leq(a[k], y)) ok = false;
        if (dom.leq(i, k) && !cod.leq(y, a[k])) ok = false;
      }
      if (!ok) continue;
      a[i] = y;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> monotone_assignments(const FinPoset& dom, const FinPoset& cod) {
  return backtrack_maps(dom, cod, [](const std::vector<std::size_t>&) { return true; });
}

std::vector<std::vector<std::size_t>> open_assignments(const FinPoset& dom, const FinPoset& cod) {
  return backtrack_maps(dom, cod, [&](const std::vector<std::size_t>& a) { return lifts(dom, cod, a); });
}

std::vector<OpenMap> open_maps(const FinPoset& dom, const FinPoset& cod) {
  std::vector<OpenMap> out;
  for (auto& a : open_assignments(dom, cod)) out.push_back(OpenMap::create(dom, cod, std::move(a)));
  return out;
}

// ---------------------------------------------------------------------------
// Upset algebra

std::vector<Upset> all_upsets(const FinPoset& p, std::size_t bound) {
  if (p.size() > bound) {
    throw SizeError("upset enumeration bound is " + std::to_string(bound) + " elements, poset has " +
                    std::to_string(p.size()));
  }
  std::set<Mask> found;
  const Mask limit = Mask{1} << p.size();
  for (Mask s = 0; s < limit; ++s) {
    if (p.is_upset(s)) found.insert(s);
  }
  std::vector<Upset> out;
  out.reserve(found.size());
  for (Mask m : found) out.push_back(Upset{m});
  return out;
}

Upset heyting_implies(const FinPoset& p, Mask a, Mask b) {
  Mask out = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if ((p.up(i) & a & ~b) == 0) out |= bit(i);
  }
  return Upset{out};
}

UpsetAlgebra::UpsetAlgebra(FinPoset p, std::size_t bound) : carrier_(std::move(p)) {
  elements_ = all_upsets(carrier_, bound);
}

std::size_t UpsetAlgebra::index_of(Upset u) const {
  auto it = std::lower_bound(elements_.begin(), elements_.end(), u);
  if (it == elements_.end() || *it != u) throw NotUpsetError("not an element of this upset algebra");
  return static_cast<std::size_t>(it - elements_.begin());
}

Upset UpsetAlgebra::implies(Upset a, Upset b) const { return heyting_implies(carrier_, a.members, b.members); }

bool is_local(const UpsetAlgebra& alg) {
  if (alg.size() < 2) return false;
  for (const auto& a : alg.elements()) {
    for (const auto& b : alg.elements()) {
      if (alg.join(a, b) == alg.top() && a != alg.top() && b != alg.top()) return false;
    }
  }
  return true;
}

}  // namespace ktopos
