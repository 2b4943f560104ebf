#include <doctest.h>

#include <cctype>

#include "ktopos/errors.hpp"
#include "ktopos/ladder.hpp"
#include "oracles.hpp"

using namespace ktopos;

namespace {

// The first d rows of the ladder, built directly from its covers.
FinPoset ladder_frame(std::size_t d) {
  std::vector<std::string> labels;
  for (std::size_t k = 1; k <= d; ++k) {
    labels.push_back("L" + std::to_string(k));
    labels.push_back("R" + std::to_string(k));
  }
  auto L = [](std::size_t k) { return 2 * (k - 1); };
  auto R = [](std::size_t k) { return 2 * (k - 1) + 1; };
  std::vector<FinPoset::Pair> pairs;
  for (std::size_t k = 1; k < d; ++k) {
    pairs.emplace_back(L(k + 1), L(k));
    pairs.emplace_back(L(k + 1), R(k));
    pairs.emplace_back(R(k + 1), R(k));
    if (k + 2 <= d) pairs.emplace_back(R(k + 2), L(k));
  }
  return FinPoset::from_pairs(labels, pairs);
}

RNElement el(const char* text) {
  std::vector<LadderNode> nodes;
  std::string s(text);
  for (std::size_t i = 0; i < s.size();) {
    const char col = s[i++];
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    nodes.push_back({col, std::stoul(s.substr(i, j - i))});
    i = j + (j < s.size() ? 1 : 0);
  }
  return RNElement::from_nodes(nodes);
}

}  // namespace

TEST_CASE("truncated ladder order") {
  for (std::size_t d = 1; d <= 6; ++d) CHECK(ladder_trunc(d) == ladder_frame(d));
  CHECK_THROWS_AS(ladder_trunc(0), SizeError);
  CHECK_THROWS_AS(ladder_trunc(kMaxLadderDepth + 1), SizeError);
  CHECK_THROWS_AS(RNElement::from_nodes({{'L', 1}, {'L', 2}}), NotUpsetError);
}

TEST_CASE("one-variable values") {
  CHECK(eval_one_var(parse("x")) == el("R1"));
  CHECK(eval_one_var(parse("~x")) == el("L1"));
  CHECK(eval_one_var(parse("~~x")) == el("R1,R2"));
  CHECK(eval_one_var(parse("x | ~x")) == el("L1,R1"));
  CHECK(eval_one_var(parse("~~x -> x")) == el("L1,R1,L2"));
  CHECK(eval_one_var(parse("x -> x")).is_top());
  CHECK(eval_one_var(parse("false")).is_empty());
  CHECK(ladder_up_closure(bit(LadderNode{'R', 3}.index())) == el("L1,R1,R2,R3").nodes());
  CHECK(to_string(el("L1,R1")) == "{L1,R1}");
  CHECK(to_string(RNElement::top()) == "Top");
  CHECK_THROWS_AS(eval_one_var(parse("y")), UnboundVariableError);
}

TEST_CASE("ladder evaluation agrees with forcing on a truncation") {
  const std::size_t d = 8;
  FinPoset frame = ladder_frame(d);
  const std::map<std::string, Mask> v{{"x", bit(1)}};
  const Mask rows = frame.all();
  for (const auto& f : formulas_up_to({"x"}, 7)) {
    CAPTURE(print(f));
    RNElement e = eval_one_var(f);
    const Mask expected = e.is_top() ? rows : (e.nodes() & rows);
    CHECK(oracle::truth(frame, v, f) == expected);
  }
}

TEST_CASE("Heyting operations against the upset algebra of a truncation") {
  const std::size_t d = 4;
  FinPoset frame = ladder_frame(d + 2);
  for (const auto& a : rn_elements_up_to(d)) {
    for (const auto& b : rn_elements_up_to(d)) {
      const Mask got = rn_implies(a, b).is_top() ? frame.all() : rn_implies(a, b).nodes() & frame.all();
      CHECK(got == oracle::implies(frame, a.nodes(), b.nodes()));
      CHECK(rn_meet(a, b).nodes() == (a.nodes() & b.nodes()));
      CHECK(rn_join(a, b).nodes() == (a.nodes() | b.nodes()));
    }
  }
  CHECK(rn_negate(RNElement::empty()).is_top());
  CHECK(rn_negate(RNElement::top()).is_empty());
}

TEST_CASE("uniform topological operators") {
  CHECK(is_uniform_topological(parse("x")).passes);
  CHECK(is_uniform_topological(parse("~~x")).passes);
  CHECK(is_uniform_topological(parse("true")).passes);
  CHECK(is_uniform_topological(parse("false")).failed == 1);
  CHECK(is_uniform_topological(parse("~x")).failed == 1);
  CHECK(is_uniform_topological(parse("x | ~x")).failed == 2);
  CHECK(is_uniform_topological(parse("~~x -> x")).failed == 2);

  Prover prover;
  UtopSearch s = utop_search(4, prover);
  CHECK(s.exhaustive);
  REQUIRE(s.passing.size() == 3);
  CHECK(s.passing[0].element == el("R1"));
  CHECK(s.passing[1].element == el("R1,R2"));
  CHECK(s.passing[2].element.is_top());
  CHECK_THROWS_AS(utop_search(2, prover), SizeError);
  CHECK_THROWS_AS(utop_search(9, prover), SizeError);

  RawSweep raw = utop_raw_sweep(6, prover);
  REQUIRE(raw.passing.size() == 3);
  CHECK(raw.passing[1].element == el("R1,R2"));
}
