#include <doctest.h>

#include "ktopos/duality.hpp"
#include "ktopos/errors.hpp"
#include "oracles.hpp"

using namespace ktopos;

namespace {

FinLattice lattice(std::vector<std::string> labels, std::vector<std::pair<std::string, std::string>> leq) {
  return FinLattice::from_order(FinPoset::from_label_pairs(std::move(labels), leq));
}

FinLattice pentagon() { return lattice({"0", "a", "b", "c", "1"}, {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "c"}, {"c", "1"}}); }
FinLattice diamond() {
  return lattice({"0", "a", "b", "c", "1"}, {{"0", "a"}, {"0", "b"}, {"0", "c"}, {"a", "1"}, {"b", "1"}, {"c", "1"}});
}

// Greatest lower bound straight from the order.
std::size_t glb(const FinPoset& p, std::size_t a, std::size_t b) {
  std::size_t best = p.size();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.leq(x, a) && p.leq(x, b) && (best == p.size() || p.leq(best, x))) best = x;
  }
  return best;
}

// Counts lattice (or Heyting) homs by trying every map.
std::size_t brute_homs(const FinLattice& a, const FinLattice& b, bool heyting) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < a.size(); ++i) total *= b.size();
  std::size_t n = 0;
  std::vector<std::size_t> h(a.size());
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& v : h) {
      v = c % b.size();
      c /= b.size();
    }
    bool ok = h[a.bottom()] == b.bottom() && h[a.top()] == b.top();
    for (std::size_t x = 0; x < a.size() && ok; ++x) {
      for (std::size_t y = 0; y < a.size() && ok; ++y) {
        ok = h[a.meet(x, y)] == b.meet(h[x], h[y]) && h[a.join(x, y)] == b.join(h[x], h[y]);
        if (ok && heyting) ok = h[a.implies(x, y)] == b.implies(h[x], h[y]);
      }
    }
    n += ok ? 1 : 0;
  }
  return n;
}

}  // namespace

TEST_CASE("lattice tables follow the order") {
  for (const auto& p : posets_up_to(4)) {
    if (p.empty()) continue;
    FinLattice l = to_lattice(UpsetAlgebra(p));
    for (std::size_t a = 0; a < l.size(); ++a) {
      for (std::size_t b = 0; b < l.size(); ++b) CHECK(l.meet(a, b) == glb(l.order(), a, b));
    }
    CHECK(l.distributive());
    CHECK_FALSE(heyting_violation(l));
  }
}

TEST_CASE("non-distributive lattices") {
  CHECK_FALSE(pentagon().distributive());
  CHECK_FALSE(diamond().distributive());
  CHECK_THROWS_AS(pentagon().implies(1, 2), NotDistributiveError);
  CHECK_THROWS_AS(spectrum(diamond()), NotDistributiveError);
  CHECK_THROWS_AS(lattice({"a", "b"}, {}), NotLatticeError);
}

TEST_CASE("spectrum of a Boolean algebra is discrete") {
  FinLattice b8 = to_lattice(UpsetAlgebra(antichain(3)));
  FinPoset s = spec(b8);
  CHECK(s.size() == 3);
  CHECK(s.covers().empty());
  CHECK(b8.join_irreducibles().size() == 3);
}

TEST_CASE("P is recovered from its upsets") {
  for (const auto& p : posets_up_to(5)) {
    if (p.empty()) continue;
    RoundTrip rt = roundtrip_poset(p);
    CHECK_MESSAGE(rt.ok, rt.reason);
    CHECK(isomorphic(spec(to_lattice(UpsetAlgebra(p))), p));
  }
}

TEST_CASE("the counit is an isomorphism") {
  for (const auto& p : posets_up_to(3)) {
    if (!p.empty()) CHECK(dual_counit(to_lattice(UpsetAlgebra(p))));
  }
  FinLattice c4 = lattice({"0", "1", "2", "3"}, {{"0", "1"}, {"1", "2"}, {"2", "3"}});
  CHECK(dual_counit(c4));
  CHECK(spec(c4).size() == 3);
}

TEST_CASE("hom enumeration agrees with exhaustive search") {
  std::vector<FinLattice> pool;
  for (const auto& p : posets_up_to(3)) {
    if (!p.empty()) pool.push_back(to_lattice(UpsetAlgebra(p)));
  }
  pool.push_back(lattice({"0", "1", "2", "3"}, {{"0", "1"}, {"1", "2"}, {"2", "3"}}));
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      CHECK(enumerate_homs(a, b, false).size() == brute_homs(a, b, false));
      CHECK(enumerate_homs(a, b, true).size() == brute_homs(a, b, true));
    }
  }
}

TEST_CASE("open maps correspond to Heyting homs of upset algebras") {
  auto small = posets_up_to(3);
  for (const auto& p : small) {
    for (const auto& q : small) {
      if (p.empty() || q.empty()) continue;
      FinLattice up = to_lattice(UpsetAlgebra(p));
      FinLattice uq = to_lattice(UpsetAlgebra(q));
      CHECK(oracle::count_open_maps(p, q) == enumerate_homs(uq, up, true).size());
      for (const auto& f : open_maps(p, q)) CHECK(dual_open_map(f.map()).heyting());
    }
  }
  MonotoneMap collapse = MonotoneMap::create(sierpinski(), sierpinski(), {0, 0});
  CHECK_THROWS_AS(dual_open_map(collapse), NotOpenError);
  // The inverse image along a non-open map is a lattice hom that breaks implication.
  FinLattice us = to_lattice(UpsetAlgebra(sierpinski()));
  CHECK(hom_violation(us, us, inverse_image_assignment(collapse, us, us), true) == std::optional<std::string>("implication"));
}

TEST_CASE("locality of explicit lattices") {
  CHECK(is_local(to_lattice(UpsetAlgebra(rooted_vee()))));
  CHECK_FALSE(is_local(to_lattice(UpsetAlgebra(antichain(2)))));
  CHECK_FALSE(is_local(lattice({"0"}, {})));
  CHECK_THROWS_AS(LatticeHom::create(pentagon(), pentagon(), {0, 0, 0, 0, 0}, false), NotHomomorphismError);
}
