#include "ktopos/quantifiers.hpp"

#include <algorithm>
#include <numeric>

#include "ktopos/errors.hpp"

namespace ktopos {

ProductUpset::ProductUpset(FinPoset base, std::vector<RNElement> fibers)
    : base_(std::move(base)), fibers_(std::move(fibers)) {
  if (fibers_.size() != base_.size()) throw SizeError("one fiber per base point is required");
  for (std::size_t p = 0; p < base_.size(); ++p) {
    for (std::size_t q : members_of(base_.up(p))) {
      if (!fibers_[p].leq(fibers_[q])) {
        throw NotMonotoneError("fiber at '" + base_.label(p) + "' is not contained in the fiber at '" +
                               base_.label(q) + "'");
      }
    }
  }
}

ProductUpset ProductUpset::constant(FinPoset base, const RNElement& e) {
  std::vector<RNElement> f(base.size(), e);
  return ProductUpset(std::move(base), std::move(f));
}

bool ProductUpset::leq(const ProductUpset& o) const {
  for (std::size_t p = 0; p < fibers_.size(); ++p) {
    if (!fibers_[p].leq(o.fibers_[p])) return false;
  }
  return true;
}

bool ProductUpset::is_top() const {
  return std::all_of(fibers_.begin(), fibers_.end(), [](const RNElement& e) { return e.is_top(); });
}

std::string to_string(const ProductUpset& s) {
  std::string out = "{";
  for (std::size_t p = 0; p < s.fibers().size(); ++p) {
    if (p) out += ", ";
    out += s.base().label(p) + ": " + to_string(s.fiber(p));
  }
  return out + "}";
}

ProductUpset pi_inverse(const FinPoset& p, Upset t) {
  std::vector<RNElement> f;
  for (std::size_t x = 0; x < p.size(); ++x) f.push_back(t.contains(x) ? RNElement::top() : RNElement::empty());
  return ProductUpset(p, std::move(f));
}

Upset exists_pi(const ProductUpset& s) {
  Mask m = 0;
  for (std::size_t p = 0; p < s.fibers().size(); ++p) {
    if (!s.fiber(p).is_empty()) m |= bit(p);
  }
  return {m};
}

Upset forall_pi(const ProductUpset& s) {
  Mask m = 0;
  for (std::size_t p = 0; p < s.fibers().size(); ++p) {
    if (s.fiber(p).is_top()) m |= bit(p);
  }
  return {m};
}

namespace {

void same_base(const ProductUpset& s, const ProductUpset& t) {
  if (!(s.base() == t.base())) throw BaseMismatchError("product upsets live over different posets");
}

}  // namespace

ProductUpset prod_meet(const ProductUpset& s, const ProductUpset& t) {
  same_base(s, t);
  std::vector<RNElement> f;
  for (std::size_t p = 0; p < s.fibers().size(); ++p) f.push_back(rn_meet(s.fiber(p), t.fiber(p)));
  return ProductUpset(s.base(), std::move(f));
}

ProductUpset prod_join(const ProductUpset& s, const ProductUpset& t) {
  same_base(s, t);
  std::vector<RNElement> f;
  for (std::size_t p = 0; p < s.fibers().size(); ++p) f.push_back(rn_join(s.fiber(p), t.fiber(p)));
  return ProductUpset(s.base(), std::move(f));
}

ProductUpset prod_implies(const ProductUpset& s, const ProductUpset& t) {
  same_base(s, t);
  const FinPoset& b = s.base();
  std::vector<RNElement> local;
  for (std::size_t p = 0; p < b.size(); ++p) local.push_back(rn_implies(s.fiber(p), t.fiber(p)));
  std::vector<RNElement> f;
  for (std::size_t p = 0; p < b.size(); ++p) {
    RNElement acc = RNElement::top();
    for (std::size_t q : members_of(b.up(p))) acc = rn_meet(acc, local[q]);
    f.push_back(acc);
  }
  return ProductUpset(b, std::move(f));
}

std::vector<RNElement> fiber_pool(std::size_t depth) {
  std::vector<RNElement> out = rn_elements_up_to(depth);
  out.push_back(RNElement::top());
  return out;
}

std::vector<ProductUpset> product_grid(const FinPoset& p, std::size_t depth, std::size_t limit) {
  const auto pool = fiber_pool(depth);
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return popcount(p.down(a)) < popcount(p.down(b)); });
  std::vector<ProductUpset> out;
  std::vector<RNElement> cur(p.size(), RNElement::empty());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == order.size()) {
      if (out.size() >= limit) throw SizeError("product grid exceeds " + std::to_string(limit) + " elements");
      out.emplace_back(p, cur);
      return;
    }
    const std::size_t x = order[k];
    for (const auto& e : pool) {
      bool ok = true;
      for (std::size_t y : members_of(p.down(x) & ~bit(x))) {
        if (!cur[y].leq(e)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      cur[x] = e;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

QuantVerdict frobenius_check(const FinPoset& p, std::size_t fiber_depth) {
  QuantVerdict v;
  const auto grid = product_grid(p, fiber_depth);
  for (const auto& phi : all_upsets(p)) {
    const ProductUpset iphi = pi_inverse(p, phi);
    for (const auto& psi : grid) {
      ++v.cells;
      const Upset lhs = exists_pi(prod_implies(iphi, psi));
      const Upset rhs = heyting_implies(p, phi.members, exists_pi(psi).members);
      if (lhs != rhs && v.holds) {
        v.holds = false;
        v.counterexample = {{"phi", upset_label(p, phi.members)},
                            {"psi", to_string(psi)},
                            {"lhs", upset_label(p, lhs.members)},
                            {"rhs", upset_label(p, rhs.members)}};
      }
    }
  }
  return v;
}

QuantVerdict join_preservation_check(const FinPoset& p, std::size_t fiber_depth) {
  QuantVerdict v;
  const auto grid = product_grid(p, fiber_depth);
  const ProductUpset bottom = ProductUpset::constant(p, RNElement::empty());
  ++v.cells;
  if (forall_pi(bottom).members != 0) {
    v.holds = false;
    v.counterexample = {{"case", "bottom"}, {"forall", upset_label(p, forall_pi(bottom).members)}};
  }
  for (const auto& s : grid) {
    const Mask fs = forall_pi(s).members;
    for (const auto& t : grid) {
      ++v.cells;
      const Mask lhs = forall_pi(prod_join(s, t)).members;
      const Mask rhs = fs | forall_pi(t).members;
      if (lhs != rhs && v.holds) {
        v.holds = false;
        v.counterexample = {{"S", to_string(s)},
                            {"T", to_string(t)},
                            {"forall_join", upset_label(p, lhs)},
                            {"join_forall", upset_label(p, rhs)}};
      }
    }
  }
  return v;
}

std::vector<std::size_t> forall_along(const OpenMap& f) {
  UpsetAlgebra dom(f.domain());
  UpsetAlgebra cod(f.codomain());
  std::vector<std::size_t> out;
  for (const auto& s : dom.elements()) {
    Mask m = 0;
    for (std::size_t q = 0; q < f.codomain().size(); ++q) {
      const Mask pre = f.map().preimage(f.codomain().up(q));
      if ((pre & ~s.members) == 0) m |= bit(q);
    }
    out.push_back(cod.index_of(Upset{m}));
  }
  return out;
}

QuantVerdict control_fiber_check(const FinPoset& q, const FinPoset& p) {
  QuantVerdict v;
  const Tensor t = tensor(q, p);
  UpsetAlgebra total(t.product);
  UpsetAlgebra base(p);
  const auto all = forall_along(t.second);
  const auto& els = total.elements();
  ++v.cells;
  if (base.elements()[all[total.index_of(total.bottom())]].members != 0) {
    v.holds = false;
    v.counterexample = {{"case", "bottom"}};
  }
  for (std::size_t i = 0; i < els.size(); ++i) {
    for (std::size_t j = 0; j < els.size(); ++j) {
      ++v.cells;
      const Mask lhs = base.elements()[all[total.index_of(total.join(els[i], els[j]))]].members;
      const Mask rhs = base.elements()[all[i]].members | base.elements()[all[j]].members;
      if (lhs != rhs && v.holds) {
        v.holds = false;
        v.counterexample = {{"S", upset_label(t.product, els[i].members)},
                            {"T", upset_label(t.product, els[j].members)},
                            {"forall_join", upset_label(p, lhs)},
                            {"join_forall", upset_label(p, rhs)}};
      }
    }
  }
  return v;
}

QuantVerdict galois_check(const FinPoset& p, std::size_t fiber_depth) {
  QuantVerdict v;
  const auto grid = product_grid(p, fiber_depth);
  const auto ups = all_upsets(p);
  auto fail = [&](const std::string& law, const std::string& s, const Upset& t) {
    if (!v.holds) return;
    v.holds = false;
    v.counterexample = {{"law", law}, {"S", s}, {"T", upset_label(p, t.members)}};
  };
  for (const auto& t : ups) {
    const ProductUpset pt = pi_inverse(p, t);
    ++v.cells;
    if (exists_pi(pt) != t) fail("exists retraction", to_string(pt), t);
    if (forall_pi(pt) != t) fail("forall retraction", to_string(pt), t);
    for (const auto& s : grid) {
      ++v.cells;
      const bool a = s.leq(pt);
      const bool b = (exists_pi(s).members & ~t.members) == 0;
      if (a != b) fail("exists -| inverse image", to_string(s), t);
      const bool c = pt.leq(s);
      const bool d = (t.members & ~forall_pi(s).members) == 0;
      if (c != d) fail("inverse image -| forall", to_string(s), t);
    }
  }
  return v;
}

QuantVerdict residuation_check(const FinPoset& p, std::size_t fiber_depth) {
  QuantVerdict v;
  const auto grid = product_grid(p, fiber_depth);
  for (const auto& s : grid) {
    for (const auto& t : grid) {
      const ProductUpset imp = prod_implies(s, t);
      for (const auto& w : grid) {
        ++v.cells;
        if (w.leq(imp) != prod_meet(w, s).leq(t) && v.holds) {
          v.holds = false;
          v.counterexample = {{"V", to_string(w)}, {"S", to_string(s)}, {"T", to_string(t)}};
        }
      }
    }
  }
  return v;
}

QuantVerdict product_locality_check(const FinPoset& p, std::size_t fiber_depth) {
  QuantVerdict v;
  ++v.cells;
  if (!is_local(UpsetAlgebra(p))) {
    v.holds = false;
    v.counterexample = {{"case", "U(P) is not local"}};
  }
  const auto grid = product_grid(p, fiber_depth);
  for (const auto& s : grid) {
    for (const auto& t : grid) {
      ++v.cells;
      if (prod_join(s, t).is_top() && !s.is_top() && !t.is_top() && v.holds) {
        v.holds = false;
        v.counterexample = {{"S", to_string(s)}, {"T", to_string(t)}};
      }
    }
  }
  return v;
}

QuantVerdict locality_check(const FinPoset& p, std::size_t fiber_depth) {
  if (!is_rooted(p)) throw NotRootedError("locality needs a rooted poset");
  return product_locality_check(p, fiber_depth);
}

GluedAlgebra glue(const FinLattice& b, const FinLattice& a, const std::vector<std::size_t>& f) {
  if (!a.heyting() || !b.heyting()) throw NotDistributiveError("glueing needs Heyting algebras");
  if (f.size() != b.size()) throw SizeError("glueing map needs one value per element of B");
  for (std::size_t v : f) {
    if (v >= a.size()) throw UnknownElementError("glueing map value out of range");
  }
  if (f[b.top()] != a.top()) throw NotMeetPreservingError("map does not preserve top");
  for (std::size_t x = 0; x < b.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      if (f[b.meet(x, y)] != a.meet(f[x], f[y])) {
        throw NotMeetPreservingError("map does not preserve the meet of '" + b.label(x) + "' and '" + b.label(y) + "'");
      }
    }
  }
  GluedAlgebra g{{}, FinLattice::from_order(point()), {}, {}, false, std::nullopt};
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < b.size(); ++x) {
    for (std::size_t y = 0; y < a.size(); ++y) {
      if (a.leq(y, f[x])) {
        g.pairs.emplace_back(x, y);
        labels.push_back("(" + b.label(x) + "," + a.label(y) + ")");
      }
    }
  }
  const std::size_t n = g.pairs.size();
  std::vector<FinPoset::Pair> order;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (b.leq(g.pairs[i].first, g.pairs[j].first) && a.leq(g.pairs[i].second, g.pairs[j].second)) {
        order.emplace_back(i, j);
      }
    }
  }
  FinLattice base = FinLattice::from_order(FinPoset::from_pairs(std::move(labels), order));
  auto index = [&](std::size_t x, std::size_t y) {
    auto it = std::find(g.pairs.begin(), g.pairs.end(), std::make_pair(x, y));
    if (it == g.pairs.end()) throw std::logic_error("glued operation left the carrier");
    return static_cast<std::size_t>(it - g.pairs.begin());
  };
  std::vector<std::size_t> imp(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [b1, a1] = g.pairs[i];
    for (std::size_t j = 0; j < n; ++j) {
      const auto [b2, a2] = g.pairs[j];
      const std::size_t bb = b.implies(b1, b2);
      imp[i * n + j] = index(bb, a.meet(a.implies(a1, a2), f[bb]));
    }
  }
  g.lattice = FinLattice::with_implication(std::move(base), std::move(imp));
  g.heyting_violation = heyting_violation(g.lattice);
  for (const auto& [x, y] : g.pairs) {
    g.r.push_back(x);
    g.t.push_back(y);
  }
  g.r_is_heyting = !hom_violation(g.lattice, b, g.r, true).has_value();
  return g;
}

}  // namespace ktopos
