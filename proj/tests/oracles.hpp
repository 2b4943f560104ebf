#pragma once

// Brute-force reference implementations used to cross-check the library.
// They work from the order relation alone and never call into the
// algorithms under test.

#include <cstdint>
#include <random>
#include <vector>

#include "ktopos/poset.hpp"

namespace oracle {

using ktopos::FinPoset;
using ktopos::Mask;

inline bool is_upset(const FinPoset& p, Mask m) {
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (!(m >> a & 1)) continue;
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (p.leq(a, b) && !(m >> b & 1)) return false;
    }
  }
  return true;
}

inline std::vector<Mask> upsets(const FinPoset& p) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask{1} << p.size()); ++m) {
    if (is_upset(p, m)) out.push_back(m);
  }
  return out;
}

// {w : every u >= w in a is in b}.
inline Mask implies(const FinPoset& p, Mask a, Mask b) {
  Mask out = 0;
  for (std::size_t w = 0; w < p.size(); ++w) {
    bool ok = true;
    for (std::size_t u = 0; u < p.size() && ok; ++u) ok = !p.leq(w, u) || !(a >> u & 1) || (b >> u & 1);
    if (ok) out |= Mask{1} << w;
  }
  return out;
}

inline bool monotone(const FinPoset& d, const FinPoset& c, const std::vector<std::size_t>& f) {
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = 0; b < d.size(); ++b) {
      if (d.leq(a, b) && !c.leq(f[a], f[b])) return false;
    }
  }
  return true;
}

// f monotone and: f(p) <= q implies some p' >= p with f(p') = q.
inline bool open(const FinPoset& d, const FinPoset& c, const std::vector<std::size_t>& f) {
  if (!monotone(d, c, f)) return false;
  for (std::size_t p = 0; p < d.size(); ++p) {
    for (std::size_t q = 0; q < c.size(); ++q) {
      if (!c.leq(f[p], q)) continue;
      bool lifted = false;
      for (std::size_t p2 = 0; p2 < d.size() && !lifted; ++p2) lifted = d.leq(p, p2) && f[p2] == q;
      if (!lifted) return false;
    }
  }
  return true;
}

inline std::size_t count_open_maps(const FinPoset& d, const FinPoset& c) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < d.size(); ++i) total *= c.size();
  if (c.size() == 0) total = d.size() == 0 ? 1 : 0;
  std::size_t n = 0;
  std::vector<std::size_t> f(d.size());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    for (auto& v : f) {
      v = x % c.size();
      x /= c.size();
    }
    if (open(d, c, f)) ++n;
  }
  return n;
}

// Random partial order on n points: a random DAG respecting index order,
// transitively closed by from_pairs.
inline FinPoset random_poset(std::mt19937_64& rng, std::size_t n, double density = 0.35) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
  std::vector<FinPoset::Pair> pairs;
  std::bernoulli_distribution coin(density);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (coin(rng)) pairs.emplace_back(a, b);
    }
  }
  return FinPoset::from_pairs(labels, pairs);
}

}  // namespace oracle

#include <map>
#include <string>

#include "ktopos/formula.hpp"

namespace oracle {

// Kripke forcing, point by point, from the order relation.
inline bool forces(const FinPoset& p, const std::map<std::string, Mask>& v, std::size_t w, const ktopos::Formula& f) {
  using ktopos::Kind;
  switch (f.kind()) {
    case Kind::Bottom:
      return false;
    case Kind::Top:
      return true;
    case Kind::Var:
      return v.at(f.name()) >> w & 1;
    case Kind::And:
      return forces(p, v, w, f.left()) && forces(p, v, w, f.right());
    case Kind::Or:
      return forces(p, v, w, f.left()) || forces(p, v, w, f.right());
    case Kind::Implies:
      for (std::size_t u = 0; u < p.size(); ++u) {
        if (p.leq(w, u) && forces(p, v, u, f.left()) && !forces(p, v, u, f.right())) return false;
      }
      return true;
  }
  return false;
}

inline Mask truth(const FinPoset& p, const std::map<std::string, Mask>& v, const ktopos::Formula& f) {
  Mask m = 0;
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (forces(p, v, w, f)) m |= Mask{1} << w;
  }
  return m;
}

// Valid on every frame with at most n points under every valuation.
inline bool valid_up_to(const ktopos::Formula& f, std::size_t n) {
  const auto vs = ktopos::variables(f);
  const std::vector<std::string> vars(vs.begin(), vs.end());
  for (const auto& p : ktopos::posets_up_to(n)) {
    const auto ups = upsets(p);
    std::vector<std::size_t> pick(vars.size(), 0);
    while (true) {
      std::map<std::string, Mask> v;
      for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = ups[pick[i]];
      if (truth(p, v, f) != p.all()) return false;
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == ups.size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return true;
}

}  // namespace oracle
