#include "ktopos/ladder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>

#include "ktopos/errors.hpp"

namespace ktopos {

namespace {

FinPoset build_full_ladder() {
  const std::size_t d = kMaxLadderDepth;
  std::vector<std::string> labels(2 * d);
  for (std::size_t i = 0; i < 2 * d; ++i) labels[i] = LadderNode::from_index(i).label();
  std::vector<FinPoset::Pair> pairs;
  auto L = [](std::size_t k) { return LadderNode{'L', k}.index(); };
  auto R = [](std::size_t k) { return LadderNode{'R', k}.index(); };
  for (std::size_t k = 1; k <= d; ++k) {
    if (k + 1 <= d) {
      pairs.emplace_back(L(k + 1), L(k));
      pairs.emplace_back(L(k + 1), R(k));
      pairs.emplace_back(R(k + 1), R(k));
    }
    if (k + 2 <= d) pairs.emplace_back(R(k + 2), L(k));
  }
  return FinPoset::from_pairs(std::move(labels), pairs);
}

const FinPoset& full_ladder() {
  static const FinPoset p = build_full_ladder();
  return p;
}

}  // namespace

const FinPoset& ladder_trunc(std::size_t d) {
  if (d == 0 || d > kMaxLadderDepth) throw SizeError("ladder depth must be between 1 and 32");
  static std::array<std::optional<FinPoset>, kMaxLadderDepth + 1> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  if (!cache[d]) cache[d] = induced_subposet(full_ladder(), low_bits(2 * d));
  return *cache[d];
}

std::size_t ladder_depth(Mask m) {
  if (m == 0) return 0;
  return (63 - static_cast<std::size_t>(std::countl_zero(m))) / 2 + 1;
}

Mask ladder_up_closure(Mask m) { return full_ladder().up_closure(m); }

Mask ladder_down_within(Mask m, std::size_t depth) {
  if (depth > kMaxLadderDepth) throw SizeError("ladder depth must be at most 32");
  return full_ladder().down_closure(m) & low_bits(2 * depth);
}

RNElement RNElement::finite(Mask m) {
  if (ladder_up_closure(m) != m) throw NotUpsetError("node set is not upward closed in the ladder");
  return RNElement(false, m);
}

RNElement RNElement::from_nodes(const std::vector<LadderNode>& nodes) {
  Mask m = 0;
  for (const auto& n : nodes) {
    if ((n.column != 'L' && n.column != 'R') || n.depth == 0 || n.depth > kMaxLadderDepth) {
      throw UnknownElementError("no ladder node " + std::string(1, n.column) + std::to_string(n.depth));
    }
    m |= bit(n.index());
  }
  return finite(m);
}

std::vector<LadderNode> RNElement::members() const {
  std::vector<LadderNode> out;
  for (std::size_t i : members_of(nodes_)) out.push_back(LadderNode::from_index(i));
  return out;
}

std::string to_string(const RNElement& e) {
  if (e.is_top()) return "Top";
  std::string out = "{";
  bool first = true;
  for (const auto& n : e.members()) {
    if (!first) out += ",";
    out += n.label();
    first = false;
  }
  return out + "}";
}

RNElement rn_meet(const RNElement& a, const RNElement& b) {
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  return RNElement::finite(a.nodes() & b.nodes());
}

RNElement rn_join(const RNElement& a, const RNElement& b) {
  if (a.is_top() || b.is_top()) return RNElement::top();
  return RNElement::finite(a.nodes() | b.nodes());
}

RNElement rn_implies(const RNElement& a, const RNElement& b) {
  if (b.is_top()) return RNElement::top();
  if (a.is_top()) return b;
  const Mask diff = a.nodes() & ~b.nodes();
  if (diff == 0) return RNElement::top();
  const std::size_t depth = ladder_depth(diff) + 1;
  if (depth > kMaxLadderDepth) throw SizeError("implication needs ladder rows beyond 32");
  return RNElement::finite(low_bits(2 * depth) & ~ladder_down_within(diff, depth));
}

RNElement rn_negate(const RNElement& a) { return rn_implies(a, RNElement::empty()); }

RNElement generic_x() { return RNElement::finite(bit(LadderNode{'R', 1}.index())); }

RNElement eval_one_var(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bottom:
      return RNElement::empty();
    case Kind::Top:
      return RNElement::top();
    case Kind::Var:
      if (f.name() != "x") throw UnboundVariableError("one-variable evaluation only knows x, got '" + f.name() + "'");
      return generic_x();
    case Kind::And:
      return rn_meet(eval_one_var(f.left()), eval_one_var(f.right()));
    case Kind::Or:
      return rn_join(eval_one_var(f.left()), eval_one_var(f.right()));
    case Kind::Implies:
      return rn_implies(eval_one_var(f.left()), eval_one_var(f.right()));
  }
  return RNElement::empty();
}

std::vector<RNElement> rn_elements_up_to(std::size_t d) {
  std::vector<RNElement> out;
  for (const auto& u : all_upsets(ladder_trunc(d), 2 * kMaxLadderDepth)) out.push_back(RNElement::finite(u.members));
  return out;
}

UtopVerdict is_uniform_topological(const Formula& f, Prover& prover) {
  const Formula x = Formula::var("x");
  const Formula y = Formula::var("y");
  auto iff = [&](const Formula& a, const Formula& b) { return prover.equiv(a, b); };
  if (!prover.provable(substitute(f, "x", Formula::top()))) return {false, 1};
  const Formula lhs = substitute(f, "x", Formula::conj(x, y));
  const Formula rhs = Formula::conj(f, substitute(f, "x", y));
  if (!iff(lhs, rhs)) return {false, 2};
  if (!iff(substitute(f, "x", f), f)) return {false, 3};
  return {true, 0};
}

UtopVerdict is_uniform_topological(const Formula& f) {
  Prover p;
  return is_uniform_topological(f, p);
}

UtopSearch utop_search(std::size_t depth_bound, Prover& prover) {
  if (depth_bound < 3 || depth_bound > 8) throw SizeError("depth bound must be between 3 and 8");
  const std::size_t cap = depth_bound + 2;
  std::map<RNElement, Formula> reps;
  auto offer = [&](const RNElement& e, const Formula& f) {
    if (!e.is_top() && e.depth() > cap) return false;
    auto it = reps.find(e);
    if (it == reps.end()) {
      reps.emplace(e, f);
      return true;
    }
    if (size(f) < size(it->second)) {
      it->second = f;
      return true;
    }
    return false;
  };
  offer(generic_x(), Formula::var("x"));
  offer(RNElement::empty(), Formula::bottom());
  offer(RNElement::top(), Formula::top());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<RNElement, Formula>> cur(reps.begin(), reps.end());
    for (const auto& [a, fa] : cur) {
      for (const auto& [b, fb] : cur) {
        // Results of operations whose operands lie within the cap stay
        // within cap+1 rows, so rn_implies never overflows here.
        changed |= offer(rn_meet(a, b), Formula::conj(fa, fb));
        changed |= offer(rn_join(a, b), Formula::disj(fa, fb));
        changed |= offer(rn_implies(a, b), b.is_empty() ? Formula::negation(fa) : Formula::implies(fa, fb));
      }
    }
  }
  UtopSearch out;
  out.depth_bound = depth_bound;
  out.exhaustive = true;
  for (const auto& e : rn_elements_up_to(depth_bound)) {
    if (!reps.count(e)) out.exhaustive = false;
  }
  for (const auto& [e, f] : reps) {
    if (!e.is_top() && e.depth() > depth_bound) continue;
    UtopClass c{e, f, is_uniform_topological(f, prover)};
    out.classes.push_back(c);
    if (c.verdict.passes) out.passing.push_back(c);
  }
  return out;
}

RawSweep utop_raw_sweep(std::size_t max_size, Prover& prover) {
  RawSweep out;
  out.max_size = max_size;
  std::map<RNElement, Formula> seen;
  std::map<RNElement, Formula> pass;
  for (const auto& f : formulas_up_to({"x"}, max_size)) {
    ++out.formulas;
    const RNElement e = eval_one_var(f);
    seen.emplace(e, f);
    if (is_uniform_topological(f, prover).passes) pass.emplace(e, f);
  }
  out.classes = seen.size();
  for (const auto& [e, f] : pass) out.passing.push_back(UtopClass{e, f, {true, 0}});
  return out;
}

}  // namespace ktopos
