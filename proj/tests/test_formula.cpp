#include <doctest.h>

#include <random>

#include "ktopos/errors.hpp"
#include "ktopos/formula.hpp"
#include "oracles.hpp"

using namespace ktopos;

TEST_CASE("parsing precedence and associativity") {
  CHECK(parse("a & b | c") == Formula::disj(Formula::conj(parse("a"), parse("b")), parse("c")));
  CHECK(parse("a -> b -> c") == Formula::implies(parse("a"), Formula::implies(parse("b"), parse("c"))));
  CHECK(parse("~a & b") == Formula::conj(Formula::negation(parse("a")), parse("b")));
  CHECK(parse("!a") == parse("~a"));
  CHECK(parse("¬a ∧ b → ⊥ ∨ ⊤") == parse("~a & b -> false | true"));
  CHECK(parse("a -> false") == parse("~a"));
  CHECK(parse("(a)") == parse("a"));
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("a &"), SyntaxError);
  CHECK_THROWS_AS(parse("(a"), SyntaxError);
  CHECK_THROWS_AS(parse("a $ b"), SyntaxError);
  try {
    parse("a b");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("printing round trips") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const auto& f : formulas_of_size({"x", "y"}, n)) {
      CHECK(parse(print(f)) == f);
      CHECK(size(f) == n);
    }
  }
  CHECK(print(parse("~~x -> x")) == "~~x -> x");
  CHECK(print(parse("(a -> b) -> c")) == "(a -> b) -> c");
}

TEST_CASE("formula counts by size") {
  // One variable, atoms x, true, false; ¬ unary; &, |, -> binary.
  // a(1)=3, a(n)=a(n-1) + 3·Σ a(i)a(n-1-i), minus the binary "-> false" forms.
  std::vector<std::size_t> a(8, 0);
  a[1] = 3;
  for (std::size_t n = 2; n < 8; ++n) {
    a[n] = a[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) a[n] += 3 * a[i] * a[n - 1 - i];
    // A -> false with size(A) = n-2 prints as ~A and is excluded.
    if (n >= 3) a[n] -= a[n - 2];
  }
  for (std::size_t n = 1; n < 8; ++n) CHECK(formulas_of_size({"x"}, n).size() == a[n]);
}

TEST_CASE("substitution and variables") {
  Formula f = parse("x -> y & x");
  CHECK(substitute(f, "x", parse("~z")) == parse("~z -> y & ~z"));
  CHECK(variables(f) == std::set<std::string>{"x", "y"});
}

TEST_CASE("truth sets agree with pointwise forcing") {
  std::mt19937_64 rng(11);
  const auto forms = formulas_up_to({"p", "q"}, 5);
  std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    FinPoset p = oracle::random_poset(rng, 1 + trial % 5);
    auto ups = oracle::upsets(p);
    std::uniform_int_distribution<std::size_t> up(0, ups.size() - 1);
    std::map<std::string, Mask> v{{"p", ups[up(rng)]}, {"q", ups[up(rng)]}};
    KripkeModel m(p, {{"p", Upset{v["p"]}}, {"q", Upset{v["q"]}}});
    for (int k = 0; k < 50; ++k) {
      const Formula& f = forms[pick(rng)];
      CHECK(truth_set(m, f) == oracle::truth(p, v, f));
      CHECK(evaluate_upsets(p, f, v) == oracle::truth(p, v, f));
    }
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(KripkeModel(sierpinski(), {{"p", Upset{0b01}}}), NotUpsetError);
  KripkeModel m(sierpinski(), {{"p", Upset{0b10}}});
  CHECK_THROWS_AS(truth_set(m, parse("q")), UnboundVariableError);
  CHECK_FALSE(force(m, 0, parse("p | ~p")));
  CHECK(force(m, 1, parse("p | ~p")));
  CHECK(all_valuations(sierpinski(), {"p", "q"}).size() == 9);
}
