#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ktopos/formula.hpp"

namespace ktopos {

struct ProverOptions {
  /// Cap on proof-search calls plus countermodel search nodes per query.
  std::size_t max_steps = 50'000'000;
  /// Largest countermodel frame the canonical construction may return.
  std::size_t max_worlds = 64;
  /// Frames searched exhaustively before the canonical construction.
  std::size_t small_frame_size = 3;
};

struct Countermodel {
  KripkeModel model;
  std::size_t point;
};

struct Decision {
  bool provable = false;
  std::optional<Countermodel> countermodel;
};

/// Contraction-free sequent search (G4ip) with memoisation, plus semantic
/// countermodel construction for the unprovable case.
class Prover {
 public:
  explicit Prover(ProverOptions options = {});

  /// Proof search only. Throws ResourceError past max_steps.
  bool provable(const Formula& f);
  /// Exhaustive search over every frame with at most small_frame_size
  /// points and every valuation.
  std::optional<Countermodel> small_countermodel(const Formula& f) const;
  /// Finite canonical model over the subformulas of f: the greatest set of
  /// locally consistent truth assignments in which every false implication
  /// has a witness. Returns nullopt when f is valid. Throws ResourceError
  /// when the witness-closed submodel outgrows max_worlds.
  std::optional<Countermodel> canonical_countermodel(const Formula& f) const;

  /// Proof search, then countermodel search when it fails.
  Decision decide(const Formula& f);
  bool equiv(const Formula& a, const Formula& b);

  const ProverOptions& options() const { return options_; }

 private:
  struct Node {
    Kind kind;
    int a = -1, b = -1;
    std::string name;
  };
  struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const;
  };

  int intern(const Formula& f);
  int make(Kind k, int a, int b, const std::string& name = {});
  bool prove(std::vector<int> ctx, int goal);
  bool prove_normalized(std::vector<int>& ctx, int goal);

  ProverOptions options_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, int> keys_;
  std::unordered_map<std::vector<int>, bool, VecHash> memo_;
  std::size_t steps_ = 0;
};

/// Convenience wrappers over a per-thread Prover with default options.
Decision decide(const Formula& f);
bool provable(const Formula& f);
bool equiv(const Formula& a, const Formula& b);

}  // namespace ktopos
