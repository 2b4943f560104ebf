#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ktopos/errors.hpp"

namespace ktopos {

/// Subsets of a finite poset are bitmasks over element indices.
using Mask = std::uint64_t;
inline constexpr std::size_t kMaxElements = 64;

constexpr Mask bit(std::size_t i) { return Mask{1} << i; }
constexpr Mask low_bits(std::size_t n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
inline std::size_t popcount(Mask m) { return static_cast<std::size_t>(std::popcount(m)); }

/// Indices of the set bits of `m`, ascending.
std::vector<std::size_t> members_of(Mask m);

/// A finite partial order over opaque string labels. The full
/// reflexive-transitive relation is stored as per-element up/down masks, so
/// order queries are a single bit test. Immutable; copies share storage.
class FinPoset {
 public:
  using Pair = std::pair<std::size_t, std::size_t>;

  /// The empty poset.
  FinPoset();

  /// Closes `pairs` (read as a <= b) reflexively and transitively.
  /// Throws DuplicateLabelError, CycleError, SizeError, UnknownElementError.
  static FinPoset from_pairs(std::vector<std::string> labels, std::span<const Pair> pairs);
  static FinPoset from_label_pairs(std::vector<std::string> labels,
                                   std::span<const std::pair<std::string, std::string>> pairs);

  std::size_t size() const { return d_->labels.size(); }
  bool empty() const { return size() == 0; }
  const std::string& label(std::size_t i) const { return d_->labels.at(i); }
  const std::vector<std::string>& labels() const { return d_->labels; }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws UnknownElementError.
  std::size_t index_of(std::string_view label) const;

  bool leq(std::size_t a, std::size_t b) const { return (d_->up[a] & bit(b)) != 0; }
  Mask up(std::size_t i) const { return d_->up[i]; }
  Mask down(std::size_t i) const { return d_->down[i]; }
  Mask all() const { return low_bits(size()); }

  Mask up_closure(Mask m) const;
  Mask down_closure(Mask m) const;
  bool is_upset(Mask m) const { return up_closure(m) == m; }

  /// Strict covering pairs (a < b with nothing in between).
  std::vector<Pair> covers() const;

  friend bool operator==(const FinPoset& a, const FinPoset& b);

 private:
  struct Data {
    std::vector<std::string> labels;
    std::vector<Mask> up;
    std::vector<Mask> down;
  };
  explicit FinPoset(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

/// Validates a raw element list plus relation pairs (by label).
FinPoset validate_poset(std::vector<std::string> labels,
                        std::span<const std::pair<std::string, std::string>> pairs);

// Named small posets. Labels are decimal indices unless stated otherwise.
FinPoset point();                      // 1 = {*}
FinPoset sierpinski();                 // Σ = {0 < 1}
FinPoset chain(std::size_t n);         // 0 < 1 < ... < n-1
FinPoset antichain(std::size_t n);
FinPoset rooted_vee();                 // {r < a, r < b}

/// An upward closed subset of some poset.
struct Upset {
  Mask members = 0;
  bool contains(std::size_t i) const { return (members & bit(i)) != 0; }
  friend auto operator<=>(const Upset&, const Upset&) = default;
};

/// Throws NotUpsetError when `members` is not upward closed in `p`.
Upset make_upset(const FinPoset& p, Mask members);

Upset up_cone(const FinPoset& p, std::size_t element);
Mask max_elements(const FinPoset& p);
Mask min_elements(const FinPoset& p);
bool is_rooted(const FinPoset& p);
std::optional<std::size_t> root_of(const FinPoset& p);

/// Monotone map between finite posets; `assignment[i]` is the image of i.
class MonotoneMap {
 public:
  /// Throws NotMonotoneError / UnknownElementError.
  static MonotoneMap create(FinPoset domain, FinPoset codomain, std::vector<std::size_t> assignment);
  static MonotoneMap identity(const FinPoset& p);

  const FinPoset& domain() const { return domain_; }
  const FinPoset& codomain() const { return codomain_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  std::size_t operator()(std::size_t i) const { return assignment_[i]; }

  Mask image() const;
  Mask image_of(Mask m) const;
  Mask preimage(Mask m) const;
  bool is_surjective() const { return image() == codomain_.all(); }
  bool is_injective() const;

  friend bool operator==(const MonotoneMap& a, const MonotoneMap& b);

 private:
  MonotoneMap(FinPoset d, FinPoset c, std::vector<std::size_t> a)
      : domain_(std::move(d)), codomain_(std::move(c)), assignment_(std::move(a)) {}
  FinPoset domain_;
  FinPoset codomain_;
  std::vector<std::size_t> assignment_;
};

/// g ∘ f. Throws CodomainMismatchError unless cod f == dom g.
MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f);

/// Result of the lifting test. On failure `witness` holds (p, q) with
/// f(p) <= q but no p' >= p mapping to q.
struct OpenCheck {
  bool open = true;
  std::optional<FinPoset::Pair> witness;
  explicit operator bool() const { return open; }
};

OpenCheck is_open(const MonotoneMap& f);
/// Same test on a raw assignment; no monotonicity check.
bool lifts(const FinPoset& dom, const FinPoset& cod, std::span<const std::size_t> assignment);

/// A monotone map known to satisfy the lifting condition (a p-morphism).
class OpenMap {
 public:
  /// Throws NotOpenError.
  static OpenMap create(MonotoneMap m);
  static OpenMap create(FinPoset domain, FinPoset codomain, std::vector<std::size_t> assignment);
  static OpenMap identity(const FinPoset& p) { return OpenMap(MonotoneMap::identity(p)); }

  const MonotoneMap& map() const { return map_; }
  const FinPoset& domain() const { return map_.domain(); }
  const FinPoset& codomain() const { return map_.codomain(); }
  std::size_t operator()(std::size_t i) const { return map_(i); }
  operator const MonotoneMap&() const { return map_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const OpenMap& a, const OpenMap& b) { return a.map_ == b.map_; }

 private:
  explicit OpenMap(MonotoneMap m) : map_(std::move(m)) {}
  MonotoneMap map_;
};

OpenMap compose(const OpenMap& g, const OpenMap& f);

/// Componentwise-ordered product with its two projections. Element (i, j)
/// sits at index i * |Q| + j and is labelled "(a,b)".
struct Tensor {
  FinPoset product;
  OpenMap first;
  OpenMap second;
};
Tensor tensor(const FinPoset& p, const FinPoset& q);

/// Pullback of an open f : P -> Q along a monotone g : R -> Q, computed in
/// posets. Carrier {(r, p) : g r = f p} labelled "(r,p)".
struct MonoidalPullback {
  FinPoset carrier;
  OpenMap to_r;
  MonotoneMap to_p;
};
MonoidalPullback monoidal_pullback(const OpenMap& f, const MonotoneMap& g);

/// Open inclusion of an upset, with the upset's induced order.
OpenMap upset_inclusion(const FinPoset& p, Mask members);
/// Induced sub-poset on `members` (labels preserved) and the inclusion map.
FinPoset induced_subposet(const FinPoset& p, Mask members);

// Enumeration helpers used by the exhaustive checks.

/// Every poset with exactly n elements, one per isomorphism class, labelled
/// "0".."n-1" along a linear extension. Throws SizeError for n > 6.
std::vector<FinPoset> posets_of_size(std::size_t n);
/// All isomorphism classes with at most `max_n` elements, empty poset first.
std::vector<FinPoset> posets_up_to(std::size_t max_n);
/// Rooted classes with 1..max_n elements.
std::vector<FinPoset> rooted_posets_up_to(std::size_t max_n);

/// Brute-force search for an order isomorphism a -> b.
std::optional<std::vector<std::size_t>> find_isomorphism(const FinPoset& a, const FinPoset& b);
bool isomorphic(const FinPoset& a, const FinPoset& b);

std::vector<std::vector<std::size_t>> monotone_assignments(const FinPoset& dom, const FinPoset& cod);
std::vector<std::vector<std::size_t>> open_assignments(const FinPoset& dom, const FinPoset& cod);
std::vector<OpenMap> open_maps(const FinPoset& dom, const FinPoset& cod);

/// Default cap on |P| for explicit upset enumeration.
inline constexpr std::size_t kDefaultUpsetBound = 12;

/// The Heyting algebra U(P) of upsets, all of them enumerated.
class UpsetAlgebra {
 public:
  /// Throws SizeError when |P| > bound.
  explicit UpsetAlgebra(FinPoset p, std::size_t bound = kDefaultUpsetBound);

  const FinPoset& carrier() const { return carrier_; }
  /// Sorted by mask value, so bottom comes first.
  const std::vector<Upset>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  /// Throws NotUpsetError for masks that are not elements.
  std::size_t index_of(Upset u) const;

  Upset bottom() const { return {0}; }
  Upset top() const { return {carrier_.all()}; }
  Upset meet(Upset a, Upset b) const { return {a.members & b.members}; }
  Upset join(Upset a, Upset b) const { return {a.members | b.members}; }
  /// Largest upset U with U ∩ a ⊆ b.
  Upset implies(Upset a, Upset b) const;
  Upset negate(Upset a) const { return implies(a, bottom()); }
  bool leq(Upset a, Upset b) const { return (a.members & ~b.members) == 0; }

 private:
  FinPoset carrier_;
  std::vector<Upset> elements_;
};

/// Every upset of p, ascending by mask. Throws SizeError past `bound`.
std::vector<Upset> all_upsets(const FinPoset& p, std::size_t bound = kDefaultUpsetBound);
Upset heyting_implies(const FinPoset& p, Mask a, Mask b);

/// Local: nontrivial, and a ∪ b = top forces a = top or b = top.
bool is_local(const UpsetAlgebra& a);

}  // namespace ktopos
