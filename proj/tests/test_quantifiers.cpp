#include <doctest.h>

#include "ktopos/duality.hpp"
#include "ktopos/errors.hpp"
#include "ktopos/quantifiers.hpp"
#include "oracles.hpp"

using namespace ktopos;

namespace {

// ladder(d) × P with the product order, element (node, p) at node * |P| + p.
FinPoset product_frame(std::size_t d, const FinPoset& p) {
  const FinPoset& l = ladder_trunc(d);
  std::vector<std::string> labels;
  for (std::size_t n = 0; n < l.size(); ++n) {
    for (std::size_t q = 0; q < p.size(); ++q) labels.push_back(l.label(n) + "/" + p.label(q));
  }
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t n = 0; n < l.size(); ++n) {
    for (std::size_t m = 0; m < l.size(); ++m) {
      for (std::size_t q = 0; q < p.size(); ++q) {
        for (std::size_t r = 0; r < p.size(); ++r) {
          if (l.leq(n, m) && p.leq(q, r)) pairs.emplace_back(n * p.size() + q, m * p.size() + r);
        }
      }
    }
  }
  return FinPoset::from_pairs(labels, pairs);
}

Mask encode(const ProductUpset& s, std::size_t d) {
  const std::size_t np = s.base().size();
  Mask m = 0;
  for (std::size_t q = 0; q < np; ++q) {
    const RNElement& f = s.fiber(q);
    for (std::size_t n = 0; n < 2 * d; ++n) {
      if (f.is_top() || (f.nodes() >> n & 1)) m |= bit(n * np + q);
    }
  }
  return m;
}

ProductUpset family(const FinPoset& p, std::vector<RNElement> fibers) { return ProductUpset(p, std::move(fibers)); }

}  // namespace

TEST_CASE("product upset validation") {
  FinPoset s = sierpinski();
  CHECK_THROWS_AS(family(s, {RNElement::top()}), SizeError);
  CHECK_THROWS_AS(family(s, {RNElement::top(), RNElement::empty()}), NotMonotoneError);
  ProductUpset a = family(s, {RNElement::empty(), RNElement::top()});
  CHECK_THROWS_AS(prod_meet(a, ProductUpset::constant(point(), RNElement::top())), BaseMismatchError);
}

TEST_CASE("fiberwise implication is the Heyting implication of the product") {
  for (const auto& p : {sierpinski(), rooted_vee(), chain(3)}) {
    const std::size_t d = 4;
    FinPoset frame = product_frame(d, p);
    auto grid = product_grid(p, 1);
    for (const auto& s : grid) {
      for (const auto& t : grid) {
        CHECK(encode(prod_implies(s, t), d) == oracle::implies(frame, encode(s, d), encode(t, d)));
        CHECK(encode(prod_meet(s, t), d) == (encode(s, d) & encode(t, d)));
        CHECK(encode(prod_join(s, t), d) == (encode(s, d) | encode(t, d)));
      }
    }
  }
}

TEST_CASE("quantifiers against their definitions") {
  FinPoset v = rooted_vee();
  for (const auto& s : product_grid(v, 2)) {
    Mask ex = 0, all = 0;
    for (std::size_t q = 0; q < v.size(); ++q) {
      if (!s.fiber(q).is_empty()) ex |= bit(q);
      if (s.fiber(q).is_top()) all |= bit(q);
    }
    CHECK(exists_pi(s).members == ex);
    CHECK(forall_pi(s).members == all);
    // ∃S is the least T with S ⊆ π*T; ∀S the greatest with π*T ⊆ S.
    for (Mask t : oracle::upsets(v)) {
      CHECK(s.leq(pi_inverse(v, Upset{t})) == ((ex & ~t) == 0));
      CHECK(pi_inverse(v, Upset{t}).leq(s) == ((t & ~all) == 0));
    }
  }
}

TEST_CASE("grid sizes") {
  // Eight upsets of the first two rows, plus Top.
  const auto pool = fiber_pool(2);
  CHECK(pool.size() == 9);
  CHECK(product_grid(point(), 2).size() == 9);
  std::size_t pairs = 0;
  for (const auto& a : pool) {
    for (const auto& b : pool) pairs += a.leq(b) ? 1 : 0;
  }
  CHECK(product_grid(sierpinski(), 2).size() == pairs);
  CHECK_THROWS_AS(product_grid(antichain(6), 2, 1000), SizeError);
}

TEST_CASE("Frobenius on chains") {
  for (const auto& p : {point(), sierpinski(), chain(3)}) {
    QuantVerdict v = frobenius_check(p, 2);
    CHECK(v.holds);
    CHECK(v.cells > 0);
  }
}

TEST_CASE("Frobenius fails on the rooted vee") {
  // φ = {a,b}; ψ is empty over r and splits {L1}, {R1} over a, b.
  FinPoset v = rooted_vee();
  ProductUpset psi = family(v, {RNElement::empty(), RNElement::from_nodes({{'L', 1}}), RNElement::from_nodes({{'R', 1}})});
  Upset phi = make_upset(v, v.up(v.index_of("a")) | v.up(v.index_of("b")));
  Upset lhs = exists_pi(prod_implies(pi_inverse(v, phi), psi));
  Upset rhs = heyting_implies(v, phi.members, exists_pi(psi).members);
  CHECK(lhs.members == phi.members);
  CHECK(rhs.members == v.all());
  // The product frame oracle gives the same left-hand side.
  const std::size_t d = 4;
  FinPoset frame = product_frame(d, v);
  Mask imp = oracle::implies(frame, encode(pi_inverse(v, phi), d), encode(psi, d));
  Mask root_column = 0;
  for (std::size_t n = 0; n < 2 * d; ++n) root_column |= bit(n * v.size() + v.index_of("r"));
  CHECK((imp & root_column) == 0);

  QuantVerdict verdict = frobenius_check(v, 2);
  CHECK_FALSE(verdict.holds);
  CHECK(verdict.counterexample.at("phi") == "{a,b}");
}

TEST_CASE("join preservation, adjunctions and residuation") {
  for (const auto& p : {point(), sierpinski(), chain(3), rooted_vee()}) {
    CHECK(join_preservation_check(p, 2).holds);
    CHECK(galois_check(p, 2).holds);
    CHECK(residuation_check(p, 1).holds);
  }
  CHECK_FALSE(control_fiber_check(antichain(2), point()).holds);
  CHECK(control_fiber_check(sierpinski(), point()).holds);
}

TEST_CASE("locality of the product") {
  for (const auto& p : {point(), sierpinski(), chain(3), rooted_vee()}) CHECK(locality_check(p, 2).holds);
  CHECK_THROWS_AS(locality_check(antichain(2), 1), NotRootedError);
  CHECK_FALSE(product_locality_check(antichain(2), 1).holds);
}

TEST_CASE("forall along an open map") {
  // ∀ along the identity is the identity.
  OpenMap id = OpenMap::identity(rooted_vee());
  auto f = forall_along(id);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == i);
  // Along V -> 1, only the full set survives.
  OpenMap bang = OpenMap::create(rooted_vee(), point(), {0, 0, 0});
  auto g = forall_along(bang);
  UpsetAlgebra uv(rooted_vee());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK((g[i] == 1) == (uv.elements()[i].members == 0b111));
}

TEST_CASE("glueing") {
  FinLattice two = to_lattice(UpsetAlgebra(point()));
  FinLattice three = to_lattice(UpsetAlgebra(sierpinski()));
  // Identity on 2 glues to the 3-chain.
  GluedAlgebra g = glue(two, two, {0, 1});
  CHECK(g.lattice.size() == 3);
  CHECK_FALSE(g.heyting_violation);
  CHECK(g.r_is_heyting);
  CHECK(is_local(g.lattice));
  // The top-preserving map 3 -> 2 sending the middle to top.
  GluedAlgebra h = glue(three, two, {0, 1, 1});
  CHECK_FALSE(h.heyting_violation);
  CHECK(h.pairs.size() == 5);
  CHECK_THROWS_AS(glue(two, two, {1, 0}), NotMeetPreservingError);
}
