#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ktopos/duality.hpp"
#include "ktopos/ladder.hpp"
#include "ktopos/poset.hpp"

namespace ktopos {

/// An upset of Ω×P given by its fibers: p ↦ {ω : (ω,p) ∈ S}.
class ProductUpset {
 public:
  /// Throws SizeError on a length mismatch and NotMonotoneError when some
  /// p <= p' has fiber(p) not contained in fiber(p').
  ProductUpset(FinPoset base, std::vector<RNElement> fibers);
  static ProductUpset constant(FinPoset base, const RNElement& e);

  const FinPoset& base() const { return base_; }
  const std::vector<RNElement>& fibers() const { return fibers_; }
  const RNElement& fiber(std::size_t p) const { return fibers_.at(p); }
  /// Fiberwise inclusion.
  bool leq(const ProductUpset& o) const;
  bool is_top() const;

  friend bool operator==(const ProductUpset& a, const ProductUpset& b) { return a.fibers_ == b.fibers_; }

 private:
  FinPoset base_;
  std::vector<RNElement> fibers_;
};

std::string to_string(const ProductUpset& s);

ProductUpset pi_inverse(const FinPoset& p, Upset t);
Upset exists_pi(const ProductUpset& s);
Upset forall_pi(const ProductUpset& s);

/// Throw BaseMismatchError for different bases.
ProductUpset prod_meet(const ProductUpset& s, const ProductUpset& t);
ProductUpset prod_join(const ProductUpset& s, const ProductUpset& t);
/// (S→T)(p) = ⋀_{p' >= p} (S(p') → T(p')).
ProductUpset prod_implies(const ProductUpset& s, const ProductUpset& t);

/// Fibers drawn from the finite upsets of the first `depth` ladder rows
/// together with Top.
std::vector<RNElement> fiber_pool(std::size_t depth);
/// Every monotone family over p with fibers in the pool. Throws SizeError
/// when there would be more than `limit` of them.
std::vector<ProductUpset> product_grid(const FinPoset& p, std::size_t depth, std::size_t limit = 200000);

struct QuantVerdict {
  bool holds = true;
  std::size_t cells = 0;
  /// Named parts of the first counterexample, printable as-is.
  std::map<std::string, std::string> counterexample;
};

/// ∃(π*φ → ψ) = φ → ∃ψ for every upset φ of p and ψ in the grid.
QuantVerdict frobenius_check(const FinPoset& p, std::size_t fiber_depth);
/// ∀ preserves ⊥ and binary joins on the grid.
QuantVerdict join_preservation_check(const FinPoset& p, std::size_t fiber_depth);
/// The same join test for ∀ along the projection Q⊗P -> P. With Q the
/// 2-antichain a counterexample is expected.
QuantVerdict control_fiber_check(const FinPoset& q, const FinPoset& p);
/// S ⊆ π*T ⇔ ∃S ⊆ T, π*T ⊆ S ⇔ T ⊆ ∀S, ∃π*T = T = ∀π*T.
QuantVerdict galois_check(const FinPoset& p, std::size_t fiber_depth);
/// V ⊆ (S→T) ⇔ V∧S ⊆ T for all V,S,T in the grid.
QuantVerdict residuation_check(const FinPoset& p, std::size_t fiber_depth);

/// Throws NotRootedError; then runs product_locality_check and is_local on
/// U(P).
QuantVerdict locality_check(const FinPoset& p, std::size_t fiber_depth);
/// S ∨ T = ⊤ forces S = ⊤ or T = ⊤, over the grid, plus locality of U(P).
/// No rootedness precondition, so it can be run on controls.
QuantVerdict product_locality_check(const FinPoset& p, std::size_t fiber_depth);

/// ∀ along an open map f: P -> Q as a map of upset lattices U(P) -> U(Q)
/// (indices into UpsetAlgebra::elements()).
std::vector<std::size_t> forall_along(const OpenMap& f);

struct GluedAlgebra {
  /// pairs[i] = (b, a) with a <= f(b).
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  FinLattice lattice;
  /// (b,a) ↦ b and (b,a) ↦ a.
  std::vector<std::size_t> r;
  std::vector<std::size_t> t;
  bool r_is_heyting = false;
  std::optional<std::string> heyting_violation;
};

/// Artin glueing along f: B -> A. Throws NotMeetPreservingError unless f is
/// monotone and preserves ⊤ and binary meets, and NotDistributiveError
/// unless both lattices are Heyting.
GluedAlgebra glue(const FinLattice& b, const FinLattice& a, const std::vector<std::size_t>& f);

}  // namespace ktopos
