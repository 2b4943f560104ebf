#include <doctest.h>

#include "ktopos/errors.hpp"
#include "ktopos/kp.hpp"

using namespace ktopos;

TEST_CASE("coproduct labels and injections") {
  const FinPoset parts[] = {sierpinski(), point()};
  Coproduct c = coproduct(parts);
  CHECK(c.sum.size() == 3);
  CHECK(c.sum.find("0:1"));
  CHECK(c.injections.size() == 2);
  for (const auto& i : c.injections) CHECK(is_open(i.map()).open);
}

TEST_CASE("the swap coequalizer is the 3-chain") {
  NotExactReport w = notexact_witness();
  CHECK(w.quotient_is_three_chain);
  CHECK(isomorphic(w.coequalizer.quotient, chain(3)));
  CHECK(w.coequalizer.classes.size() == 3);
  CHECK(is_open(w.coequalizer.projection.map()).open);
  CHECK(w.universal);
  // The two middle points are identified; the ends are not.
  const auto& q = w.coequalizer;
  CHECK(q.class_of[q.source.index_of("(0,1)")] == q.class_of[q.source.index_of("(1,0)")]);
  CHECK(q.class_of[q.source.index_of("(0,0)")] != q.class_of[q.source.index_of("(1,1)")]);
  // Swap pair: equal after the projection, neither factors through the joint image.
  CHECK(w.hu_equals_hv);
  CHECK_FALSE(w.u_factors);
  CHECK_FALSE(w.v_factors);
}

TEST_CASE("coequalizer of equal maps is the identity quotient") {
  OpenMap id = OpenMap::identity(rooted_vee());
  Quotient q = coequalizer(id, id);
  CHECK(isomorphic(q.quotient, rooted_vee()));
  CHECK(check_coequalizer_universal(q, id, id, 3).universal);
  CHECK_THROWS_AS(coequalizer(id, OpenMap::identity(sierpinski())), ParallelPairError);
}

TEST_CASE("image factorization") {
  // Σ ⊗ Σ -> Σ first projection is surjective.
  Tensor t = tensor(sierpinski(), sierpinski());
  ImageFactorization f = image_factorize(t.first);
  CHECK(f.image.size() == 2);
  CHECK(compose(f.embedding, f.surjection) == t.first);
  // An upset inclusion is its own image.
  OpenMap inc = upset_inclusion(chain(3), 0b110);
  ImageFactorization g = image_factorize(inc);
  CHECK(g.image.size() == 2);
  CHECK(g.surjection.map().is_surjective());
}

TEST_CASE("rooted covers are covers and effective") {
  for (const auto& p : posets_up_to(3)) {
    if (p.empty()) continue;
    CoverFamily c = rooted_cover(p);
    CHECK(is_cover(c));
    EffectiveEpiVerdict v = check_effective_epi(c, 3);
    CHECK(v.effective);
    CHECK(v.cover);
  }
}

TEST_CASE("a non-surjective family is not a cover") {
  FinPoset c3 = chain(3);
  CoverFamily top_only(c3, {upset_inclusion(c3, 0b100)});
  CHECK_FALSE(is_cover(top_only));
  CHECK_THROWS_AS(CoverFamily(c3, {OpenMap::identity(sierpinski())}), CodomainMismatchError);
  CHECK_THROWS_AS(check_effective_epi(rooted_cover(c3), kMaxCoconeBound + 1), SizeError);
}
