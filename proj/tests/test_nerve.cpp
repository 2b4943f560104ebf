#include <doctest.h>

#include "ktopos/duality.hpp"
#include "ktopos/errors.hpp"
#include "ktopos/nerve.hpp"
#include "oracles.hpp"

using namespace ktopos;

namespace {

Presentation pres(std::vector<std::string> gens, std::vector<const char*> rels) {
  std::vector<Formula> fs;
  for (const char* r : rels) fs.push_back(parse(r));
  return Presentation(std::move(gens), std::move(fs));
}

// Valuations of one or two generators whose relations hold everywhere.
std::size_t count_models(const Presentation& a, const FinPoset& p) {
  const auto ups = oracle::upsets(p);
  const auto& g = a.generators();
  std::size_t n = 0;
  const std::size_t combos = g.size() == 1 ? ups.size() : ups.size() * ups.size();
  for (std::size_t c = 0; c < combos; ++c) {
    std::map<std::string, Mask> v{{g[0], ups[c % ups.size()]}};
    if (g.size() == 2) v[g[1]] = ups[c / ups.size()];
    bool ok = true;
    for (const auto& r : a.relations()) ok = ok && oracle::truth(p, v, r) == p.all();
    n += ok ? 1 : 0;
  }
  return n;
}

Mask preimage(const OpenMap& f, Mask m) {
  Mask out = 0;
  for (std::size_t i = 0; i < f.domain().size(); ++i) {
    if (m >> f(i) & 1) out |= bit(i);
  }
  return out;
}

}  // namespace

TEST_CASE("presentation validation") {
  CHECK_THROWS_AS(pres({"x", "x"}, {}), DuplicateLabelError);
  CHECK_THROWS_AS(pres({"x"}, {"y"}), UnboundVariableError);
}

TEST_CASE("model counts agree with direct enumeration") {
  std::vector<Presentation> pool = {pres({"x"}, {}),           pres({"x"}, {"~x"}),         pres({"x"}, {"x | ~x"}),
                                    pres({"x"}, {"~~x -> x"}), pres({"x", "y"}, {"x -> y"}), pres({"x", "y"}, {"~(x & y)"})};
  for (const auto& p : posets_up_to(4)) {
    for (const auto& a : pool) CHECK(models(a, p).models.size() == count_models(a, p));
  }
  CHECK(models(pres({"x"}, {"~x"}), sierpinski()).models.size() == 1);
}

TEST_CASE("the free model is Ω") {
  for (const auto& p : posets_up_to(4)) {
    const std::size_t u = oracle::upsets(p).size();
    CHECK(models(pres({"x"}, {}), p).models.size() == u);
    CHECK(poset_nerve(sierpinski(), p).size() == u);
  }
  CHECK(cohesion_gamma(pres({"x"}, {})).size() == 2);
}

TEST_CASE("restriction is inverse image") {
  Presentation a = pres({"x"}, {});
  OpenMap inc = upset_inclusion(chain(3), 0b110);
  NerveStage over_p = models(a, chain(3));
  NerveStage over_q = models(a, inc.domain());
  auto r = restrict_models(over_p, over_q, inc.map());
  REQUIRE(r.size() == over_p.models.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(over_q.models[r[i]].at("x").members == preimage(inc, over_p.models[i].at("x").members));
  }
  CHECK_THROWS_AS(restrict_models(over_q, over_p, inc.map()), CodomainMismatchError);
}

TEST_CASE("finite Heyting algebras are nerves of their spectra") {
  for (const auto& q : posets_up_to(2)) {
    if (q.empty()) continue;
    FinLattice d = to_lattice(UpsetAlgebra(q));
    for (const auto& p : posets_up_to(3)) {
      FreeNerveVerdict v = free_nerve_check(d, p);
      CHECK_MESSAGE(v.holds, v.failure);
    }
  }
}

TEST_CASE("sheaf condition on rooted and identity covers") {
  std::vector<Presentation> pool = {pres({"x"}, {}), pres({"x"}, {"x | ~x"}), pres({"x", "y"}, {"(x -> y) | y"})};
  for (const auto& p : posets_up_to(4)) {
    if (p.empty()) continue;
    for (const auto& a : pool) {
      SheafVerdict v = sheaf_check(a, rooted_cover(p));
      CHECK_MESSAGE(v.holds, v.failure);
      CHECK(v.compatible_families == v.models);
      CHECK(sheaf_check(a, CoverFamily(p, {OpenMap::identity(p)})).holds);
    }
  }
  FinPoset c3 = chain(3);
  CHECK_THROWS_AS(sheaf_check(pool[0], CoverFamily(c3, {upset_inclusion(c3, 0b100)})), NotCoverError);
}

TEST_CASE("cohesion functors") {
  CHECK(cohesion_delta({"s", "t"}, rooted_vee()).size() == 2);
  CHECK(cohesion_nabla({"s", "t", "u"}, rooted_vee()).size() == 9);
  CHECK(cohesion_nabla({"s", "t", "u"}, chain(3)).size() == 3);
}

TEST_CASE("zigzags between elements of Ω") {
  for (const auto& p : rooted_posets_up_to(3)) {
    for (const auto& q : rooted_posets_up_to(3)) {
      for (Mask a : oracle::upsets(p)) {
        for (Mask b : oracle::upsets(q)) {
          Zigzag z = pi_connect(p, Upset{a}, q, Upset{b}, 4);
          REQUIRE(z.nodes.size() == z.steps.size() + 1);
          CHECK(isomorphic(z.nodes.front().frame, p));
          CHECK(isomorphic(z.nodes.back().frame, q));
          CHECK(popcount(z.nodes.front().element.members) == popcount(a));
          CHECK(popcount(z.nodes.back().element.members) == popcount(b));
          for (std::size_t i = 0; i < z.steps.size(); ++i) {
            const auto& s = z.steps[i];
            CHECK(is_open(s.map.map()).open);
            if (s.restrict) {
              CHECK(s.map.codomain() == z.nodes[i].frame);
              CHECK(z.nodes[i + 1].element.members == preimage(s.map, z.nodes[i].element.members));
            } else {
              CHECK(s.map.domain() == z.nodes[i].frame);
              CHECK(z.nodes[i].element.members == preimage(s.map, z.nodes[i + 1].element.members));
            }
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(pi_connect(antichain(2), Upset{0}, point(), Upset{0}, 4), NotRootedError);
  CHECK_THROWS_AS(pi_connect(point(), Upset{0}, point(), Upset{1}, 6), SizeError);
}
