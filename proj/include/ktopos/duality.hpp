#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ktopos/poset.hpp"

namespace ktopos {

/// A finite bounded lattice with cached meet/join tables. Distributive
/// lattices also carry an implication table (they are Heyting).
class FinLattice {
 public:
  /// Throws NotLatticeError when some pair lacks a meet or join, or the
  /// order is empty.
  static FinLattice from_order(FinPoset order);
  /// Replaces the implication table with a caller-supplied one (row-major,
  /// a * size + b). No validation; see heyting_violation.
  static FinLattice with_implication(FinLattice base, std::vector<std::size_t> table);

  const FinPoset& order() const { return order_; }
  std::size_t size() const { return order_.size(); }
  const std::string& label(std::size_t i) const { return order_.label(i); }
  bool leq(std::size_t a, std::size_t b) const { return order_.leq(a, b); }
  std::size_t meet(std::size_t a, std::size_t b) const { return meet_[a * size() + b]; }
  std::size_t join(std::size_t a, std::size_t b) const { return join_[a * size() + b]; }
  std::size_t bottom() const { return bottom_; }
  std::size_t top() const { return top_; }
  bool distributive() const { return distributive_; }
  bool heyting() const { return !implies_.empty(); }
  /// Throws NotDistributiveError when no implication table exists.
  std::size_t implies(std::size_t a, std::size_t b) const;
  std::size_t negate(std::size_t a) const { return implies(a, bottom_); }

  /// Join-irreducible elements (nonbottom, not a join of strictly smaller ones).
  std::vector<std::size_t> join_irreducibles() const;

 private:
  FinLattice() = default;
  FinPoset order_;
  std::vector<std::size_t> meet_, join_, implies_;
  std::size_t bottom_ = 0, top_ = 0;
  bool distributive_ = false;
};

/// Nontrivial, and a ∨ b = ⊤ forces a = ⊤ or b = ⊤.
bool is_local(const FinLattice& l);

/// Checks every Heyting algebra law by brute force; returns a description of
/// the first violation.
std::optional<std::string> heyting_violation(const FinLattice& l);

/// First clause a map fails ("bottom", "top", "meet", "join", "implication"),
/// or nullopt for a homomorphism.
std::optional<std::string> hom_violation(const FinLattice& dom, const FinLattice& cod,
                                         const std::vector<std::size_t>& assignment, bool heyting);

class LatticeHom {
 public:
  /// Throws NotHomomorphismError naming the violated clause.
  static LatticeHom create(FinLattice domain, FinLattice codomain, std::vector<std::size_t> assignment,
                           bool heyting);
  const FinLattice& domain() const { return domain_; }
  const FinLattice& codomain() const { return codomain_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  std::size_t operator()(std::size_t i) const { return assignment_[i]; }
  bool heyting() const { return heyting_; }

 private:
  LatticeHom(FinLattice d, FinLattice c, std::vector<std::size_t> a, bool h)
      : domain_(std::move(d)), codomain_(std::move(c)), assignment_(std::move(a)), heyting_(h) {}
  FinLattice domain_;
  FinLattice codomain_;
  std::vector<std::size_t> assignment_;
  bool heyting_;
};

/// Homs D -> 2 of a distributive lattice, ordered pointwise. Point k is
/// labelled by the element generating its (principal, prime) filter.
struct Spectrum {
  FinPoset points;
  /// models[k][d] is the value of hom k at element d.
  std::vector<std::vector<bool>> models;
};
/// Throws NotDistributiveError.
Spectrum spectrum(const FinLattice& d);
FinPoset spec(const FinLattice& d);

/// U(P) as an explicit lattice; elements labelled "{a,b}" by member labels.
FinLattice to_lattice(const UpsetAlgebra& a);
std::string upset_label(const FinPoset& p, Mask m);

struct RoundTrip {
  bool ok = false;
  /// iso[p] = point of Spec(U P) corresponding to p.
  std::vector<std::size_t> iso;
  std::string reason;
};
RoundTrip roundtrip_poset(const FinPoset& p);

/// D -> U(Spec D), d ↦ {h : h(d) = 1}; returns the assignment when it is a
/// lattice isomorphism.
std::optional<std::vector<std::size_t>> dual_counit(const FinLattice& d);

/// S ↦ f⁻¹(S) from U(Q) to U(P). Throws NotOpenError for non-open f.
LatticeHom dual_open_map(const MonotoneMap& f);
/// Same assignment without the openness precondition (for diagnostics).
std::vector<std::size_t> inverse_image_assignment(const MonotoneMap& f, const FinLattice& uq,
                                                  const FinLattice& up);

/// Every lattice hom A -> B (Heyting homs when `heyting`), exhaustively.
std::vector<std::vector<std::size_t>> enumerate_homs(const FinLattice& a, const FinLattice& b, bool heyting);

/// Order isomorphism between the underlying orders, if any.
std::optional<std::vector<std::size_t>> lattice_isomorphism(const FinLattice& a, const FinLattice& b);

}  // namespace ktopos
