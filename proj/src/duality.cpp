#include "ktopos/duality.hpp"

#include <algorithm>
#include <sstream>

namespace ktopos {

namespace {

std::optional<std::size_t> greatest_in(const FinPoset& p, Mask set) {
  for (std::size_t m : members_of(set)) {
    if ((set & ~p.down(m)) == 0) return m;
  }
  return std::nullopt;
}

std::optional<std::size_t> least_in(const FinPoset& p, Mask set) {
  for (std::size_t m : members_of(set)) {
    if ((set & ~p.up(m)) == 0) return m;
  }
  return std::nullopt;
}

}  // namespace

FinLattice FinLattice::from_order(FinPoset order) {
  const std::size_t n = order.size();
  if (n == 0) throw NotLatticeError("a bounded lattice needs at least one element");
  FinLattice l;
  l.meet_.resize(n * n);
  l.join_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      auto m = greatest_in(order, order.down(a) & order.down(b));
      auto j = least_in(order, order.up(a) & order.up(b));
      if (!m || !j) {
        throw NotLatticeError("elements '" + order.label(a) + "' and '" + order.label(b) +
                              "' lack a " + (!m ? "meet" : "join"));
      }
      l.meet_[a * n + b] = *m;
      l.join_[a * n + b] = *j;
    }
  }
  l.bottom_ = *least_in(order, order.all());
  l.top_ = *greatest_in(order, order.all());
  l.order_ = std::move(order);

  bool dist = true;
  for (std::size_t a = 0; a < n && dist; ++a) {
    for (std::size_t b = 0; b < n && dist; ++b) {
      for (std::size_t c = 0; c < n && dist; ++c) {
        dist = l.meet(a, l.join(b, c)) == l.join(l.meet(a, b), l.meet(a, c));
      }
    }
  }
  l.distributive_ = dist;
  if (dist) {
    l.implies_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t acc = l.bottom_;
        for (std::size_t c = 0; c < n; ++c) {
          if (l.leq(l.meet(c, a), b)) acc = l.join(acc, c);
        }
        l.implies_[a * n + b] = acc;
      }
    }
  }
  return l;
}

FinLattice FinLattice::with_implication(FinLattice base, std::vector<std::size_t> table) {
  if (table.size() != base.size() * base.size()) throw SizeError("implication table has the wrong size");
  base.implies_ = std::move(table);
  return base;
}

std::size_t FinLattice::implies(std::size_t a, std::size_t b) const {
  if (implies_.empty()) throw NotDistributiveError("lattice carries no implication");
  return implies_[a * size() + b];
}

std::vector<std::size_t> FinLattice::join_irreducibles() const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < size(); ++a) {
    if (a == bottom_) continue;
    std::size_t acc = bottom_;
    for (std::size_t b : members_of(order_.down(a) & ~bit(a))) acc = join(acc, b);
    if (acc != a) out.push_back(a);
  }
  // Linear extension: fewer elements below first.
  std::stable_sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) {
    return popcount(order_.down(x)) < popcount(order_.down(y));
  });
  return out;
}

bool is_local(const FinLattice& l) {
  if (l.size() < 2) return false;
  for (std::size_t a = 0; a < l.size(); ++a) {
    for (std::size_t b = 0; b < l.size(); ++b) {
      if (l.join(a, b) == l.top() && a != l.top() && b != l.top()) return false;
    }
  }
  return true;
}

std::optional<std::string> heyting_violation(const FinLattice& l) {
  const std::size_t n = l.size();
  auto name = [&](std::size_t i) { return "'" + l.label(i) + "'"; };
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (l.meet(a, b) != l.meet(b, a) || l.join(a, b) != l.join(b, a)) return "commutativity at " + name(a);
      if (l.meet(a, l.join(a, b)) != a || l.join(a, l.meet(a, b)) != a) return "absorption at " + name(a);
      for (std::size_t c = 0; c < n; ++c) {
        if (l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c))) {
          return "distributivity at " + name(a) + "," + name(b) + "," + name(c);
        }
      }
    }
  }
  if (!l.heyting()) return std::string("no implication");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t imp = l.implies(a, b);
      for (std::size_t x = 0; x < n; ++x) {
        if (l.leq(x, imp) != l.leq(l.meet(x, a), b)) {
          return "residuation fails for x=" + name(x) + ", a=" + name(a) + ", b=" + name(b);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> hom_violation(const FinLattice& dom, const FinLattice& cod,
                                         const std::vector<std::size_t>& h, bool heyting) {
  if (h.size() != dom.size()) return std::string("assignment size");
  for (std::size_t v : h) {
    if (v >= cod.size()) return std::string("assignment range");
  }
  if (h[dom.bottom()] != cod.bottom()) return std::string("bottom");
  if (h[dom.top()] != cod.top()) return std::string("top");
  for (std::size_t a = 0; a < dom.size(); ++a) {
    for (std::size_t b = 0; b < dom.size(); ++b) {
      if (h[dom.meet(a, b)] != cod.meet(h[a], h[b])) return std::string("meet");
      if (h[dom.join(a, b)] != cod.join(h[a], h[b])) return std::string("join");
    }
  }
  if (heyting) {
    for (std::size_t a = 0; a < dom.size(); ++a) {
      for (std::size_t b = 0; b < dom.size(); ++b) {
        if (h[dom.implies(a, b)] != cod.implies(h[a], h[b])) return std::string("implication");
      }
    }
  }
  return std::nullopt;
}

LatticeHom LatticeHom::create(FinLattice domain, FinLattice codomain, std::vector<std::size_t> assignment,
                              bool heyting) {
  if (auto bad = hom_violation(domain, codomain, assignment, heyting)) {
    throw NotHomomorphismError("map does not preserve " + *bad);
  }
  return LatticeHom(std::move(domain), std::move(codomain), std::move(assignment), heyting);
}

Spectrum spectrum(const FinLattice& d) {
  if (!d.distributive()) throw NotDistributiveError("spectrum needs a distributive lattice");
  const FinLattice two = FinLattice::from_order(chain(2));
  std::vector<std::size_t> generators;
  std::vector<std::vector<bool>> models;
  for (std::size_t a = 0; a < d.size(); ++a) {
    if (a == d.bottom()) continue;
    // Every filter of a finite lattice is principal; keep the prime ones,
    // i.e. those whose characteristic map is a hom into 2.
    std::vector<std::size_t> h(d.size());
    for (std::size_t x = 0; x < d.size(); ++x) h[x] = d.leq(a, x) ? 1 : 0;
    if (hom_violation(d, two, h, false)) continue;
    generators.push_back(a);
    std::vector<bool> m(d.size());
    for (std::size_t x = 0; x < d.size(); ++x) m[x] = h[x] == 1;
    models.push_back(std::move(m));
  }
  std::vector<std::string> labels;
  for (std::size_t a : generators) labels.push_back(d.label(a));
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = 0; j < models.size(); ++j) {
      bool le = true;
      for (std::size_t x = 0; x < d.size() && le; ++x) le = !models[i][x] || models[j][x];
      if (le) pairs.emplace_back(i, j);
    }
  }
  return Spectrum{FinPoset::from_pairs(std::move(labels), pairs), std::move(models)};
}

FinPoset spec(const FinLattice& d) { return spectrum(d).points; }

std::string upset_label(const FinPoset& p, Mask m) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : members_of(m)) {
    if (!first) out += ",";
    out += p.label(i);
    first = false;
  }
  return out + "}";
}

FinLattice to_lattice(const UpsetAlgebra& a) {
  const auto& els = a.elements();
  std::vector<std::string> labels;
  for (const auto& u : els) labels.push_back(upset_label(a.carrier(), u.members));
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t i = 0; i < els.size(); ++i) {
    for (std::size_t j = 0; j < els.size(); ++j) {
      if (a.leq(els[i], els[j])) pairs.emplace_back(i, j);
    }
  }
  FinLattice l = FinLattice::from_order(FinPoset::from_pairs(std::move(labels), pairs));
  // Copy the residual table straight from the upset algebra.
  std::vector<std::size_t> imp(els.size() * els.size());
  for (std::size_t i = 0; i < els.size(); ++i) {
    for (std::size_t j = 0; j < els.size(); ++j) {
      imp[i * els.size() + j] = a.index_of(a.implies(els[i], els[j]));
      if (l.meet(i, j) != a.index_of(a.meet(els[i], els[j])) || l.join(i, j) != a.index_of(a.join(els[i], els[j]))) {
        throw std::logic_error("upset lattice tables disagree with set operations");
      }
    }
  }
  return FinLattice::with_implication(std::move(l), std::move(imp));
}

RoundTrip roundtrip_poset(const FinPoset& p) {
  RoundTrip rt;
  UpsetAlgebra alg(p);
  FinLattice l = to_lattice(alg);
  Spectrum sp = spectrum(l);
  if (sp.points.size() != p.size()) {
    rt.reason = "spectrum has " + std::to_string(sp.points.size()) + " points, poset has " + std::to_string(p.size());
    return rt;
  }
  rt.iso.assign(p.size(), 0);
  for (std::size_t x = 0; x < p.size(); ++x) {
    std::vector<bool> eval(alg.size());
    for (std::size_t s = 0; s < alg.size(); ++s) eval[s] = alg.elements()[s].contains(x);
    auto it = std::find(sp.models.begin(), sp.models.end(), eval);
    if (it == sp.models.end()) {
      rt.reason = "evaluation at '" + p.label(x) + "' is not a point of the spectrum";
      return rt;
    }
    rt.iso[x] = static_cast<std::size_t>(it - sp.models.begin());
  }
  std::vector<std::size_t> sorted = rt.iso;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    rt.reason = "evaluation map is not injective";
    return rt;
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (p.leq(x, y) != sp.points.leq(rt.iso[x], rt.iso[y])) {
        rt.reason = "evaluation map does not preserve and reflect order";
        return rt;
      }
    }
  }
  rt.ok = true;
  return rt;
}

std::optional<std::vector<std::size_t>> dual_counit(const FinLattice& d) {
  Spectrum sp = spectrum(d);
  UpsetAlgebra alg(sp.points);
  if (alg.size() != d.size()) return std::nullopt;
  std::vector<std::size_t> a(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    Mask m = 0;
    for (std::size_t k = 0; k < sp.models.size(); ++k) {
      if (sp.models[k][x]) m |= bit(k);
    }
    a[x] = alg.index_of(Upset{m});
  }
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (d.leq(x, y) != alg.leq(alg.elements()[a[x]], alg.elements()[a[y]])) return std::nullopt;
    }
  }
  return a;
}

std::vector<std::size_t> inverse_image_assignment(const MonotoneMap& f, const FinLattice& uq,
                                                  const FinLattice& up) {
  (void)uq;
  UpsetAlgebra aq(f.codomain());
  UpsetAlgebra ap(f.domain());
  if (aq.size() != uq.size() || ap.size() != up.size()) throw SizeError("lattices do not match the map's posets");
  std::vector<std::size_t> out(aq.size());
  for (std::size_t i = 0; i < aq.size(); ++i) out[i] = ap.index_of(Upset{f.preimage(aq.elements()[i].members)});
  return out;
}

LatticeHom dual_open_map(const MonotoneMap& f) {
  auto check = is_open(f);
  if (!check) throw NotOpenError("dual_open_map needs an open map");
  FinLattice uq = to_lattice(UpsetAlgebra(f.codomain()));
  FinLattice up = to_lattice(UpsetAlgebra(f.domain()));
  auto a = inverse_image_assignment(f, uq, up);
  return LatticeHom::create(uq, up, std::move(a), true);
}

std::vector<std::vector<std::size_t>> enumerate_homs(const FinLattice& a, const FinLattice& b, bool heyting) {
  std::vector<std::vector<std::size_t>> out;
  const auto ji = a.join_irreducibles();
  std::vector<std::size_t> value(a.size(), b.size());
  // Extend from join-irreducibles: h(x) = join of h(j) over j <= x.
  auto extend_at = [&](std::size_t x) {
    std::size_t acc = b.bottom();
    for (std::size_t j : ji) {
      if (a.leq(j, x)) acc = b.join(acc, value[j]);
    }
    return acc;
  };
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == ji.size()) {
      std::vector<std::size_t> h(a.size());
      for (std::size_t x = 0; x < a.size(); ++x) h[x] = extend_at(x);
      if (!hom_violation(a, b, h, heyting)) out.push_back(std::move(h));
      return;
    }
    const std::size_t j = ji[k];
    for (std::size_t y = 0; y < b.size(); ++y) {
      value[j] = y;
      bool ok = true;
      for (std::size_t t = 0; t < k && ok; ++t) {
        const std::size_t j2 = ji[t];
        if (a.leq(j2, j) && !b.leq(value[j2], y)) ok = false;
        // Meets of already-assigned join-irreducibles lie below j, so their
        // images are determined; they must match.
        if (ok) ok = extend_at(a.meet(j, j2)) == b.meet(y, value[j2]);
      }
      if (ok) self(self, k + 1);
    }
    value[j] = b.size();
  };
  rec(rec, 0);
  return out;
}

std::optional<std::vector<std::size_t>> lattice_isomorphism(const FinLattice& a, const FinLattice& b) {
  return find_isomorphism(a.order(), b.order());
}

}  // namespace ktopos
