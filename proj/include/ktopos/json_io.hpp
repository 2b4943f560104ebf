#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "ktopos/duality.hpp"
#include "ktopos/formula.hpp"
#include "ktopos/kp.hpp"
#include "ktopos/ladder.hpp"
#include "ktopos/nerve.hpp"
#include "ktopos/prover.hpp"
#include "ktopos/quantifiers.hpp"

namespace ktopos::json_io {

using nlohmann::json;

// Readers throw FormatError for malformed documents; domain validation
// errors (cycles, non-monotone maps, ...) propagate unchanged.

/// {"elements": [...], "leq": [[a, b], ...]}; pairs may be any generating set.
json to_json(const FinPoset& p);
FinPoset poset_from_json(const json& j);

/// {"domain": poset, "codomain": poset, "assignment": {"a": "b", ...}}.
/// The assignment may also be a list of codomain labels in domain order.
json to_json(const MonotoneMap& f);
MonotoneMap map_from_json(const json& j);
OpenMap open_map_from_json(const json& j);

/// {"poset": poset, "members": [...]}.
json upset_to_json(const FinPoset& p, Upset u);
std::pair<FinPoset, Upset> upset_from_json(const json& j);
json members_json(const FinPoset& p, Mask m);

/// Same shape as a poset; an "implication" table is not read.
json to_json(const FinLattice& l);
FinLattice lattice_from_json(const json& j);

/// {"generators": [...], "relations": ["~x", ...]}.
json to_json(const Presentation& a);
Presentation presentation_from_json(const json& j);

/// {"top": true} or {"nodes": [["L", 2], ["R", 1], ...]}.
json to_json(const RNElement& e);
RNElement rn_from_json(const json& j);

/// {"base": poset, "fibers": {"p": RNElement, ...}}.
json to_json(const ProductUpset& s);
ProductUpset product_upset_from_json(const json& j);

/// {"frame": poset, "valuation": {"x": [...]}}.
json to_json(const KripkeModel& m);
KripkeModel kripke_from_json(const json& j);
json to_json(const Countermodel& c);

json valuation_json(const FinPoset& p, const Valuation& v);

/// {"target": poset, "maps": [map, ...]}.
CoverFamily cover_from_json(const json& j);

json to_json(const QuantVerdict& v);

/// Reads a whole file as JSON. Throws FormatError.
json read_file(const std::string& path);

}  // namespace ktopos::json_io
