#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ktopos/duality.hpp"
#include "ktopos/formula.hpp"
#include "ktopos/kp.hpp"
#include "ktopos/poset.hpp"

namespace ktopos {

/// Generators plus relation formulas.
class Presentation {
 public:
  /// Throws UnboundVariableError when a relation mentions a non-generator
  /// and DuplicateLabelError for repeated generators.
  Presentation(std::vector<std::string> generators, std::vector<Formula> relations);
  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Formula>& relations() const { return relations_; }

 private:
  std::vector<std::string> generators_;
  std::vector<Formula> relations_;
};

using Valuation = std::map<std::string, Upset>;

struct NerveStage {
  Presentation presentation;
  FinPoset frame;
  std::vector<Valuation> models;
  /// Index of v in models, or nullopt.
  std::optional<std::size_t> find(const Valuation& v) const;
};

/// Cap on |U(P)|^|generators| for model enumeration.
inline constexpr std::size_t kMaxValuations = 2'000'000;

/// Every valuation forcing each relation at every point. Throws SizeError.
NerveStage models(const Presentation& a, const FinPoset& p);

/// v ↦ f⁻¹∘v for any monotone f (no model check).
Valuation pull_back(const Valuation& v, const MonotoneMap& f);
/// models(A,P) -> models(A,Q) along f: Q -> P, as indices. Throws
/// NotOpenError for non-open f, and std::logic_error if some restriction
/// fails to be a model.
std::vector<std::size_t> restrict_models(const NerveStage& over_p, const NerveStage& over_q, const MonotoneMap& f);

/// Pos(P, L). Throws SizeError past kMaxValuations candidates.
std::vector<MonotoneMap> poset_nerve(const FinPoset& l, const FinPoset& p);

/// The table presentation of a finite lattice: one generator per element,
/// relations for ⊥, ⊤ and every meet and join.
Presentation table_presentation(const FinLattice& d);

struct FreeNerveVerdict {
  bool holds = false;
  std::size_t models = 0;
  std::size_t monotone_maps = 0;
  /// bijection[i] = index in poset_nerve(spec D, P) of model i.
  std::vector<std::size_t> bijection;
  std::string failure;
};
/// Compares models(table_presentation(D), P) with Pos(P, Spec D). Throws
/// NotDistributiveError.
FreeNerveVerdict free_nerve_check(const FinLattice& d, const FinPoset& p);

struct SheafVerdict {
  bool holds = false;
  std::size_t models = 0;
  std::size_t compatible_families = 0;
  std::string failure;
};
/// Compatible families (agreeing on monoidal pullbacks of every pair of
/// cover maps, each with itself included) must glue uniquely. Throws
/// NotCoverError.
SheafVerdict sheaf_check(const Presentation& a, const CoverFamily& cover);

/// Γ A = models(A, 1).
std::vector<Valuation> cohesion_gamma(const Presentation& a);
/// Δ S (P) = S.
std::vector<std::string> cohesion_delta(const std::vector<std::string>& s, const FinPoset& p);
/// ∇ S (P) = functions max(P) -> S, keyed by the maximal elements' labels.
std::vector<std::map<std::string, std::string>> cohesion_nabla(const std::vector<std::string>& s, const FinPoset& p);

struct ZigzagNode {
  FinPoset frame;
  Upset element;
};
struct ZigzagStep {
  /// Frame map between consecutive nodes. When `restrict` is set it goes
  /// from the next node's frame to this node's frame, and the next element
  /// is the inverse image of this one. Otherwise it goes the other way.
  OpenMap map;
  bool restrict;
};
struct Zigzag {
  std::vector<ZigzagNode> nodes;
  std::vector<ZigzagStep> steps;
  std::size_t stage_bound = 0;
  std::size_t explored = 0;
};
/// Breadth-first search through (rooted frame up to iso, upset) pairs joined
/// by restriction along open maps, with frames of at most stage_bound
/// points. Throws NotRootedError, SizeError (stage_bound smaller than a
/// frame or above 5) and SearchExhaustedError.
Zigzag pi_connect(const FinPoset& p, Upset a, const FinPoset& q, Upset b, std::size_t stage_bound);

}  // namespace ktopos
