#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ktopos/poset.hpp"

namespace ktopos {

enum class Kind : std::uint8_t { Bottom, Top, Var, And, Or, Implies };

/// Immutable IPC formula. Negation is stored as A -> ⊥.
class Formula {
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Formula> kids;
    std::size_t hash;
  };

 public:
  Formula();  // ⊥

  static Formula bottom();
  static Formula top();
  static Formula var(std::string name);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula negation(Formula a) { return implies(std::move(a), bottom()); }

  Kind kind() const { return n_->kind; }
  const std::string& name() const { return n_->name; }
  const Formula& left() const { return n_->kids[0]; }
  const Formula& right() const { return n_->kids[1]; }
  bool is_negation() const { return kind() == Kind::Implies && right().kind() == Kind::Bottom; }
  bool binary() const { return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies; }
  std::size_t hash() const { return n_->hash; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  static Formula binary(Kind k, Formula a, Formula b);
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Grammar: ~ binds tightest, then &, then |, then -> (right associative).
/// Literals true/false; identifiers [a-zA-Z][a-zA-Z0-9_]*. The Unicode
/// forms ¬ ∧ ∨ → ⊥ ⊤ are accepted too. Throws SyntaxError.
Formula parse(std::string_view text);
std::string print(const Formula& f);

Formula substitute(const Formula& f, const std::string& var, const Formula& by);
/// Node count, with ¬ counted as a single unary node.
std::size_t size(const Formula& f);
std::set<std::string> variables(const Formula& f);

/// All formulas over `vars` (plus true/false) of size exactly n; ¬ is
/// produced only as the unary connective, never as binary "-> false".
/// Cached per (vars, n).
const std::vector<Formula>& formulas_of_size(const std::vector<std::string>& vars, std::size_t n);
std::vector<Formula> formulas_up_to(const std::vector<std::string>& vars, std::size_t max_size);

class KripkeModel {
 public:
  /// Throws NotUpsetError when a value is not upward closed.
  KripkeModel(FinPoset frame, std::map<std::string, Upset> valuation);
  const FinPoset& frame() const { return frame_; }
  const std::map<std::string, Upset>& valuation() const { return valuation_; }

 private:
  FinPoset frame_;
  std::map<std::string, Upset> valuation_;
};

/// {p : p ⊩ φ}. Throws UnboundVariableError.
Mask truth_set(const KripkeModel& m, const Formula& f);
bool force(const KripkeModel& m, std::size_t point, const Formula& f);
/// Evaluates φ in U(P) under an arbitrary valuation of masks.
Mask evaluate_upsets(const FinPoset& p, const Formula& f, const std::map<std::string, Mask>& v);

/// Every valuation of `vars` in upsets of p, in lexicographic order.
std::vector<std::map<std::string, Upset>> all_valuations(const FinPoset& p, const std::vector<std::string>& vars);

}  // namespace ktopos
