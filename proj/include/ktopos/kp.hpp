#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ktopos/poset.hpp"

namespace ktopos {

struct Coproduct {
  FinPoset sum;
  std::vector<OpenMap> injections;
};

/// Disjoint union; element k of summand i is labelled "i:label".
Coproduct coproduct(std::span<const FinPoset> parts);

/// P/θ for the smallest equivalence θ identifying f(r) and g(r), ordered by
/// [p] <= [q] iff some p' >= p has p' θ q.
struct Quotient {
  FinPoset source;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_of;
  FinPoset quotient;
  OpenMap projection;
};

/// Throws ParallelPairError when f and g do not share domain and codomain.
Quotient coequalizer(const OpenMap& f, const OpenMap& g);

/// The ascending chain p <= q0 <= p1 <= q1 <= ... used to show the class
/// order is antisymmetric, starting from [p] <= [q] and [q] <= [p]. Each
/// step moves to some element above the current one in the other class,
/// staying put when possible. Returns the visited elements; the chain has
/// stabilised once two consecutive entries coincide.
std::vector<std::size_t> antisymmetry_chain(const Quotient& q, std::size_t p, std::size_t other);

/// Checks the coequalizer universal property against every open cocone into
/// posets with at most `bound` elements (one per isomorphism class).
struct UniversalityVerdict {
  bool universal = true;
  std::size_t targets = 0;
  std::size_t cocones = 0;
  std::string failure;
};
UniversalityVerdict check_coequalizer_universal(const Quotient& q, const OpenMap& f, const OpenMap& g,
                                                std::size_t bound);

struct ImageFactorization {
  OpenMap surjection;
  OpenMap embedding;
  FinPoset image;
};
ImageFactorization image_factorize(const OpenMap& f);

/// Finite family of open maps into a common target.
class CoverFamily {
 public:
  /// Throws CodomainMismatchError when some map misses the target.
  CoverFamily(FinPoset target, std::vector<OpenMap> maps);
  const FinPoset& target() const { return target_; }
  const std::vector<OpenMap>& maps() const { return maps_; }

 private:
  FinPoset target_;
  std::vector<OpenMap> maps_;
};

/// {↑p ↪ P : p ∈ P}.
CoverFamily rooted_cover(const FinPoset& p);
bool is_cover(const CoverFamily& family);

inline constexpr std::size_t kMaxCoconeBound = 5;

struct EffectiveEpiVerdict {
  bool effective = true;
  bool cover = false;
  bool agrees = false;
  std::size_t bound = 0;
  std::size_t targets = 0;
  std::size_t cocones = 0;
  /// Set when some compatible cocone has zero or several factorizations.
  std::optional<std::string> separating_cocone;
};

/// Bounded colimit-cone test: every compatible family of open maps
/// g_i : Q_i -> R (agreeing on the monoidal pullbacks Q_i ⊗_P Q_j) must
/// factor uniquely through P. Throws SizeError for bound > kMaxCoconeBound.
EffectiveEpiVerdict check_effective_epi(const CoverFamily& family, std::size_t bound);

/// The parallel pair Σ ⇉ Σ⊗Σ whose Kp coequalizer is not preserved in
/// sheaves: recomputes the quotient and exhibits the swap pair.
struct NotExactReport {
  OpenMap f;
  OpenMap g;
  Quotient coequalizer;
  bool quotient_is_three_chain = false;
  bool universal = false;
  Mask joint_image = 0;
  std::vector<std::size_t> missing;
  OpenMap u;
  OpenMap v;
  bool hu_equals_hv = false;
  bool u_factors = false;
  bool v_factors = false;
};
NotExactReport notexact_witness();

}  // namespace ktopos
