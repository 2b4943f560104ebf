#include <doctest.h>

#include <random>

#include "ktopos/errors.hpp"
#include "ktopos/poset.hpp"
#include "oracles.hpp"

using namespace ktopos;

TEST_CASE("order closure and validation") {
  const FinPoset::Pair pairs[] = {{0, 1}, {1, 2}};
  FinPoset p = FinPoset::from_pairs({"a", "b", "c"}, pairs);
  CHECK(p.leq(0, 2));
  CHECK_FALSE(p.leq(2, 0));
  CHECK(p.covers().size() == 2);

  const FinPoset::Pair cyc[] = {{0, 1}, {1, 0}};
  CHECK_THROWS_AS(FinPoset::from_pairs({"a", "b"}, cyc), CycleError);
  CHECK_THROWS_AS(FinPoset::from_pairs({"a", "a"}, {}), DuplicateLabelError);
  const FinPoset::Pair bad[] = {{0, 5}};
  CHECK_THROWS_AS(FinPoset::from_pairs({"a"}, bad), UnknownElementError);
  CHECK_THROWS_AS(p.index_of("zz"), UnknownElementError);
}

TEST_CASE("isomorphism classes of small posets") {
  // Number of unlabelled posets on n points.
  const std::size_t expected[] = {1, 1, 2, 5, 16, 63};
  for (std::size_t n = 0; n <= 5; ++n) CHECK(posets_of_size(n).size() == expected[n]);
  // Rooted posets on n+1 points are in bijection with posets on n points.
  std::size_t rooted4 = 0;
  for (const auto& p : posets_of_size(4)) rooted4 += is_rooted(p) ? 1 : 0;
  CHECK(rooted4 == expected[3]);
}

TEST_CASE("upsets agree with subset enumeration") {
  for (const auto& p : posets_up_to(4)) {
    auto ups = all_upsets(p);
    auto ref = oracle::upsets(p);
    REQUIRE(ups.size() == ref.size());
    for (std::size_t i = 0; i < ups.size(); ++i) CHECK(ups[i].members == ref[i]);
  }
  CHECK(all_upsets(chain(3)).size() == 4);
  CHECK(all_upsets(antichain(3)).size() == 8);
  CHECK_THROWS_AS(make_upset(sierpinski(), 0b01), NotUpsetError);
}

TEST_CASE("Heyting implication on random posets") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    FinPoset p = oracle::random_poset(rng, 2 + trial % 5);
    UpsetAlgebra u(p);
    auto ref = oracle::upsets(p);
    for (Mask a : ref) {
      for (Mask b : ref) CHECK(u.implies({a}, {b}).members == oracle::implies(p, a, b));
    }
  }
}

TEST_CASE("open maps match the lifting definition") {
  auto small = posets_up_to(3);
  for (const auto& d : small) {
    for (const auto& c : small) {
      const auto got = open_assignments(d, c);
      CHECK(got.size() == oracle::count_open_maps(d, c));
      for (const auto& f : got) CHECK(oracle::open(d, c, f));
    }
  }
}

TEST_CASE("non-open maps report a lifting witness") {
  // Σ -> Σ collapsing to the bottom: f(0) = 0 <= 1 but nothing above 0 maps to 1.
  MonotoneMap f = MonotoneMap::create(sierpinski(), sierpinski(), {0, 0});
  OpenCheck c = is_open(f);
  CHECK_FALSE(c.open);
  REQUIRE(c.witness);
  CHECK(c.witness->second == 1);
  CHECK_THROWS_AS(OpenMap::create(f), NotOpenError);
  CHECK_THROWS_AS(MonotoneMap::create(sierpinski(), sierpinski(), {1, 0}), NotMonotoneError);
}

TEST_CASE("tensor projections are open") {
  for (const auto& p : posets_up_to(3)) {
    for (const auto& q : posets_up_to(3)) {
      Tensor t = tensor(p, q);
      CHECK(t.product.size() == p.size() * q.size());
      CHECK(is_open(t.first.map()).open);
      CHECK(is_open(t.second.map()).open);
    }
  }
}

TEST_CASE("monoidal pullback of an upset inclusion") {
  FinPoset v = rooted_vee();
  OpenMap inc = upset_inclusion(v, v.up(v.index_of("a")));
  MonoidalPullback mp = monoidal_pullback(inc, MonotoneMap::identity(v));
  CHECK(mp.carrier.size() == 1);
  CHECK(is_open(mp.to_r.map()).open);
}

TEST_CASE("locality of U(P)") {
  CHECK(is_local(UpsetAlgebra(rooted_vee())));
  CHECK(is_local(UpsetAlgebra(chain(4))));
  CHECK_FALSE(is_local(UpsetAlgebra(antichain(2))));
  for (const auto& p : posets_up_to(4)) {
    if (!p.empty()) CHECK(is_local(UpsetAlgebra(p)) == is_rooted(p));
  }
}
