#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ktopos/formula.hpp"
#include "ktopos/poset.hpp"
#include "ktopos/prover.hpp"

namespace ktopos {

/// Deepest ladder row representable in a Mask (two nodes per row).
inline constexpr std::size_t kMaxLadderDepth = 32;

/// L_k sits at index 2(k-1), R_k at 2(k-1)+1.
struct LadderNode {
  char column;  // 'L' or 'R'
  std::size_t depth;

  std::size_t index() const { return 2 * (depth - 1) + (column == 'R' ? 1 : 0); }
  std::string label() const { return std::string(1, column) + std::to_string(depth); }
  static LadderNode from_index(std::size_t i) { return {i % 2 == 0 ? 'L' : 'R', i / 2 + 1}; }
  friend bool operator==(const LadderNode&, const LadderNode&) = default;
};

/// The first d rows of the ladder. Covers: L_{k+1} < L_k, L_{k+1} < R_k,
/// R_{k+1} < R_k, R_{k+2} < L_k. Throws SizeError for d = 0 or d > 32.
const FinPoset& ladder_trunc(std::size_t d);

/// Up-closure and ↓-closure computed in the ladder; the down-closure is cut
/// at row `depth`.
Mask ladder_up_closure(Mask m);
Mask ladder_down_within(Mask m, std::size_t depth);
/// Deepest row touched by m (0 for the empty mask).
std::size_t ladder_depth(Mask m);

/// An element of U(ladder): either the whole ladder or a finite upset.
class RNElement {
 public:
  static RNElement top() { return RNElement(true, 0); }
  static RNElement empty() { return RNElement(false, 0); }
  /// Throws NotUpsetError unless m is upward closed in the ladder.
  static RNElement finite(Mask m);
  static RNElement from_nodes(const std::vector<LadderNode>& nodes);

  bool is_top() const { return top_; }
  bool is_empty() const { return !top_ && nodes_ == 0; }
  /// Members of a finite element (0 for top).
  Mask nodes() const { return nodes_; }
  std::size_t depth() const { return top_ ? 0 : ladder_depth(nodes_); }
  bool contains(const LadderNode& n) const { return top_ || (nodes_ & bit(n.index())); }
  /// Inclusion, with top greatest.
  bool leq(const RNElement& o) const { return o.top_ || (!top_ && (nodes_ & ~o.nodes_) == 0); }
  std::vector<LadderNode> members() const;

  friend bool operator==(const RNElement&, const RNElement&) = default;
  friend auto operator<=>(const RNElement&, const RNElement&) = default;

 private:
  RNElement(bool top, Mask m) : top_(top), nodes_(m) {}
  bool top_;
  Mask nodes_;
};

std::string to_string(const RNElement& e);

RNElement rn_meet(const RNElement& a, const RNElement& b);
RNElement rn_join(const RNElement& a, const RNElement& b);
/// Complement of ↓(a∖b), which is confined to rows ≤ depth(a∖b)+1.
/// Throws SizeError if that passes kMaxLadderDepth.
RNElement rn_implies(const RNElement& a, const RNElement& b);
RNElement rn_negate(const RNElement& a);

/// Evaluates φ with x = {R1}. Throws UnboundVariableError for any other
/// variable.
RNElement eval_one_var(const Formula& f);
/// The generic valuation used by eval_one_var.
RNElement generic_x();

/// Every finite upset of the first d rows (all are ladder upsets).
std::vector<RNElement> rn_elements_up_to(std::size_t d);

struct UtopVerdict {
  bool passes = false;
  /// First failing condition: 1 top, 2 conjunction, 3 idempotence; 0 if none.
  int failed = 0;
};
/// Conditions checked with the prover: ⊢ φ[x:=⊤]; ⊢ φ[x:=x∧y] ↔ φ ∧ φ[x:=y];
/// ⊢ φ[x:=φ] ↔ φ.
UtopVerdict is_uniform_topological(const Formula& f, Prover& prover);
UtopVerdict is_uniform_topological(const Formula& f);

struct UtopClass {
  RNElement element;
  Formula representative;
  UtopVerdict verdict;
};

struct UtopSearch {
  std::size_t depth_bound = 0;
  /// Every class visited, ascending by element.
  std::vector<UtopClass> classes;
  std::vector<UtopClass> passing;
  /// Whether every upset of the first depth_bound rows was reached.
  bool exhaustive = false;
};
/// Closes {x, ⊥, ⊤} under ∧, ∨, → keeping elements of depth ≤ depth_bound+2
/// (smallest representative per class), then tests each class. Throws
/// SizeError for depth_bound < 3 or > 8.
UtopSearch utop_search(std::size_t depth_bound, Prover& prover);

struct RawSweep {
  std::size_t max_size = 0;
  std::size_t formulas = 0;
  std::size_t classes = 0;
  /// Distinct elements of the passing formulas, ascending, with the
  /// first passing formula found for each.
  std::vector<UtopClass> passing;
};
/// Tests every one-variable formula of size ≤ max_size directly.
RawSweep utop_raw_sweep(std::size_t max_size, Prover& prover);

}  // namespace ktopos
