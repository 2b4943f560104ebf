#include "ktopos/prover.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ktopos/errors.hpp"

namespace ktopos {

std::size_t Prover::VecHash::operator()(const std::vector<int>& v) const {
  std::size_t h = v.size();
  for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Prover::Prover(ProverOptions options) : options_(options) {}

int Prover::make(Kind k, int a, int b, const std::string& name) {
  std::string key = std::to_string(static_cast<int>(k)) + ":" + std::to_string(a) + ":" + std::to_string(b) + ":" + name;
  auto it = keys_.find(key);
  if (it != keys_.end()) return it->second;
  nodes_.push_back(Node{k, a, b, name});
  const int id = static_cast<int>(nodes_.size()) - 1;
  keys_.emplace(std::move(key), id);
  return id;
}

int Prover::intern(const Formula& f) {
  switch (f.kind()) {
    case Kind::Bottom:
    case Kind::Top:
      return make(f.kind(), -1, -1);
    case Kind::Var:
      return make(Kind::Var, -1, -1, f.name());
    default: {
      int a = intern(f.left());
      int b = intern(f.right());
      return make(f.kind(), a, b);
    }
  }
}

namespace {

bool contains(const std::vector<int>& ctx, int x) { return std::binary_search(ctx.begin(), ctx.end(), x); }

std::vector<int> with(std::vector<int> ctx, std::initializer_list<int> extra) {
  for (int x : extra) ctx.insert(std::upper_bound(ctx.begin(), ctx.end(), x), x);
  return ctx;
}

std::vector<int> without(const std::vector<int>& ctx, std::size_t i) {
  std::vector<int> out = ctx;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
  return out;
}

}  // namespace

bool Prover::prove(std::vector<int> ctx, int goal) {
  if (++steps_ > options_.max_steps) throw ResourceError("proof search exceeded its step bound");
  std::sort(ctx.begin(), ctx.end());
  ctx.erase(std::unique(ctx.begin(), ctx.end()), ctx.end());
  std::vector<int> key = ctx;
  key.push_back(goal);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool r = prove_normalized(ctx, goal);
  if (memo_.size() > 4'000'000) memo_.clear();
  memo_.emplace(std::move(key), r);
  return r;
}

bool Prover::prove_normalized(std::vector<int>& ctx, int goal) {
  // Invertible left rules.
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Node n = nodes_[ctx[i]];
    switch (n.kind) {
      case Kind::Bottom:
        return true;
      case Kind::Top:
        return prove(without(ctx, i), goal);
      case Kind::And:
        return prove(with(without(ctx, i), {n.a, n.b}), goal);
      case Kind::Or: {
        auto rest = without(ctx, i);
        return prove(with(rest, {n.a}), goal) && prove(with(rest, {n.b}), goal);
      }
      case Kind::Implies: {
        const Node ante = nodes_[n.a];
        switch (ante.kind) {
          case Kind::Top:
            return prove(with(without(ctx, i), {n.b}), goal);
          case Kind::Bottom:
            return prove(without(ctx, i), goal);
          case Kind::Var:
            if (contains(ctx, n.a)) return prove(with(without(ctx, i), {n.b}), goal);
            break;
          case Kind::And: {
            int inner = make(Kind::Implies, ante.b, n.b);
            return prove(with(without(ctx, i), {make(Kind::Implies, ante.a, inner)}), goal);
          }
          case Kind::Or: {
            int l = make(Kind::Implies, ante.a, n.b);
            int r = make(Kind::Implies, ante.b, n.b);
            return prove(with(without(ctx, i), {l, r}), goal);
          }
          case Kind::Implies:
            break;
        }
        break;
      }
      case Kind::Var:
        break;
    }
  }
  // Invertible right rules.
  const Node g = nodes_[goal];
  switch (g.kind) {
    case Kind::Top:
      return true;
    case Kind::And:
      return prove(ctx, g.a) && prove(ctx, g.b);
    case Kind::Implies:
      return prove(with(ctx, {g.a}), g.b);
    default:
      break;
  }
  if (contains(ctx, goal)) return true;
  if (g.kind == Kind::Or && (prove(ctx, g.a) || prove(ctx, g.b))) return true;
  // Left rule for nested implications: (C -> D) -> B.
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    const Node n = nodes_[ctx[i]];
    if (n.kind != Kind::Implies || nodes_[n.a].kind != Kind::Implies) continue;
    const Node cd = nodes_[n.a];
    auto rest = without(ctx, i);
    if (prove(with(rest, {make(Kind::Implies, cd.b, n.b)}), n.a) && prove(with(rest, {n.b}), goal)) return true;
  }
  return false;
}

bool Prover::provable(const Formula& f) {
  steps_ = 0;
  return prove({}, intern(f));
}

std::optional<Countermodel> Prover::small_countermodel(const Formula& f) const {
  const auto vs = variables(f);
  const std::vector<std::string> vars(vs.begin(), vs.end());
  for (const auto& p : posets_up_to(options_.small_frame_size)) {
    if (p.empty()) continue;
    const std::size_t ups = all_upsets(p).size();
    double count = 1;
    for (std::size_t k = 0; k < vars.size(); ++k) count *= static_cast<double>(ups);
    if (count > 200000) break;
    for (auto& v : all_valuations(p, vars)) {
      KripkeModel m(p, std::move(v));
      Mask t = truth_set(m, f);
      if (t != p.all()) {
        // Report a minimal refuting point.
        Mask bad = p.all() & ~t;
        for (std::size_t x : members_of(bad)) {
          if ((p.down(x) & bad) == bit(x)) return Countermodel{std::move(m), x};
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

// A node of the subformula closure, indexed in post-order.
struct SubNode {
  Kind kind;
  int a = -1, b = -1;
  std::string name;
};

class CanonicalSearch {
 public:
  CanonicalSearch(const Formula& f, const ProverOptions& opt) : opt_(opt) {
    root_ = collect(f);
    if (subs_.size() > 64) throw ResourceError("formula has more than 64 distinct subformulas");
  }

  std::optional<Countermodel> run() {
    std::optional<Mask> start;
    extend(0, -1, root_, [&](Mask w) {
      if (good(w)) {
        start = w;
        return true;
      }
      return false;
    });
    if (!start) return std::nullopt;
    std::vector<Mask> worlds;
    std::vector<Mask> todo{*start};
    while (!todo.empty()) {
      Mask w = todo.back();
      todo.pop_back();
      if (std::find(worlds.begin(), worlds.end(), w) != worlds.end()) continue;
      worlds.push_back(w);
      if (worlds.size() > opt_.max_worlds) throw ResourceError("countermodel needs more than max_worlds points");
      for (Mask s : witnesses_.at(w)) todo.push_back(s);
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < worlds.size(); ++i) labels.push_back("w" + std::to_string(i));
    std::vector<FinPoset::Pair> pairs;
    for (std::size_t i = 0; i < worlds.size(); ++i) {
      for (std::size_t j = 0; j < worlds.size(); ++j) {
        if ((worlds[i] & ~worlds[j]) == 0) pairs.emplace_back(i, j);
      }
    }
    FinPoset frame = FinPoset::from_pairs(std::move(labels), pairs);
    std::map<std::string, Upset> v;
    for (std::size_t k = 0; k < subs_.size(); ++k) {
      if (subs_[k].kind != Kind::Var) continue;
      Mask m = 0;
      for (std::size_t i = 0; i < worlds.size(); ++i) {
        if (worlds[i] & bit(k)) m |= bit(i);
      }
      v.emplace(subs_[k].name, Upset{m});
    }
    return Countermodel{KripkeModel(std::move(frame), std::move(v)), 0};
  }

 private:
  int collect(const Formula& f) {
    SubNode n{f.kind(), -1, -1, f.kind() == Kind::Var ? f.name() : ""};
    if (f.binary()) {
      n.a = collect(f.left());
      n.b = collect(f.right());
    }
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const auto& s = subs_[i];
      if (s.kind == n.kind && s.a == n.a && s.b == n.b && s.name == n.name) return static_cast<int>(i);
    }
    subs_.push_back(n);
    return static_cast<int>(subs_.size()) - 1;
  }

  void tick() {
    if (++steps_ > opt_.max_steps) throw ResourceError("countermodel search exceeded its step bound");
  }

  // Enumerates locally consistent worlds w ⊇ base with `need` true and
  // `avoid` false (either may be -1), smallest choices first. Stops when
  // `visit` returns true; returns whether it did.
  bool extend(Mask base, int need, int avoid, const std::function<bool(Mask)>& visit) {
    return step(0, 0, base, need, avoid, visit);
  }

  bool step(std::size_t i, Mask w, Mask base, int need, int avoid, const std::function<bool(Mask)>& visit) {
    tick();
    if (i == subs_.size()) return visit(w);
    const SubNode& n = subs_[i];
    auto value = [&](int k) { return (w & bit(static_cast<std::size_t>(k))) != 0; };
    auto admissible = [&](bool v) {
      if (static_cast<int>(i) == need && !v) return false;
      if (static_cast<int>(i) == avoid && v) return false;
      if (n.kind == Kind::Implies) {
        if (v && value(n.a) && !value(n.b)) return false;
        if (!v && value(n.b)) return false;
      }
      return true;
    };
    auto go = [&](bool v) {
      return admissible(v) && step(i + 1, v ? (w | bit(i)) : w, base, need, avoid, visit);
    };
    switch (n.kind) {
      case Kind::Bottom:
        return go(false);
      case Kind::Top:
        return go(true);
      case Kind::And:
        return go(value(n.a) && value(n.b));
      case Kind::Or:
        return go(value(n.a) || value(n.b));
      case Kind::Var:
      case Kind::Implies:
        if (base & bit(i)) return go(true);
        return go(false) || go(true);
    }
    return false;
  }

  bool good(Mask w) {
    auto it = good_.find(w);
    if (it != good_.end()) return it->second;
    std::vector<Mask> wit;
    bool ok = true;
    for (std::size_t k = 0; k < subs_.size() && ok; ++k) {
      const SubNode& n = subs_[k];
      if (n.kind != Kind::Implies || (w & bit(k))) continue;
      if ((w & bit(static_cast<std::size_t>(n.a))) && !(w & bit(static_cast<std::size_t>(n.b)))) continue;
      std::optional<Mask> found;
      extend(w, n.a, n.b, [&](Mask s) {
        if (s != w && good(s)) {
          found = s;
          return true;
        }
        return false;
      });
      if (found) {
        wit.push_back(*found);
      } else {
        ok = false;
      }
    }
    good_[w] = ok;
    if (ok) witnesses_[w] = std::move(wit);
    return ok;
  }

  const ProverOptions& opt_;
  std::vector<SubNode> subs_;
  int root_ = 0;
  std::map<Mask, bool> good_;
  std::map<Mask, std::vector<Mask>> witnesses_;
  std::size_t steps_ = 0;
};

}  // namespace

std::optional<Countermodel> Prover::canonical_countermodel(const Formula& f) const {
  auto cm = CanonicalSearch(f, options_).run();
  if (cm && force(cm->model, cm->point, f)) throw std::logic_error("canonical countermodel does not refute formula");
  return cm;
}

Decision Prover::decide(const Formula& f) {
  Decision d;
  d.provable = provable(f);
  if (d.provable) return d;
  d.countermodel = small_countermodel(f);
  if (!d.countermodel) d.countermodel = canonical_countermodel(f);
  if (!d.countermodel) throw std::logic_error("proof search failed but no countermodel exists: " + print(f));
  return d;
}

bool Prover::equiv(const Formula& a, const Formula& b) {
  return provable(Formula::implies(a, b)) && provable(Formula::implies(b, a));
}

namespace {
Prover& thread_prover() {
  thread_local Prover p;
  return p;
}
}  // namespace

Decision decide(const Formula& f) { return thread_prover().decide(f); }
bool provable(const Formula& f) { return thread_prover().provable(f); }
bool equiv(const Formula& a, const Formula& b) { return thread_prover().equiv(a, b); }

}  // namespace ktopos
