// io.hpp - JSON (de)serialization for the library's data types
//
// Every reader takes a JSON document as a std::string and throws
// std::invalid_argument with a "json: ..." message on anything
// malformed: syntax errors, missing or mistyped fields, unknown
// enumerators, out-of-range indices.  Semantic validation is delegated
// to the constructors of the target types, so their exceptions
// (duplicate worlds, non-preorders, broken algebra laws, ...) pass
// through unchanged.  Every writer produces a document its reader
// accepts; readers tolerate unknown extra keys so envelopes can carry
// annotations.
//
// Formats:
//
//   Kripke model      {"worlds":["w0",...], "edges":[["w0","w1"],...],
//                      "valuation":{"p":["w0",...],...}}
//   finite model      {"points":[...], "opens":[[...],...]} or
//                     {"points":[...], "preorder":[["a","b"],...]},
//                     optional "valuation" as above
//   region            {"space":"cantor"|"baire", "cylinders":[stem,...],
//                      "carved":[[outer, inner],...], "plus":[point,...],
//                      "minus":[point,...]}
//                     where a cantor stem is a digit string "010", a
//                     baire stem an array [0,1,2] (digit strings are
//                     also accepted there), a point is
//                     {"prefix":stem, "period":stem}, and a carved
//                     entry is [outer, inner] or [outer, [inners...]]
//   symbolic model    {"space":..., "valuation":{"p":<region body>,...}}
//                     (the regions inherit the model's space and may
//                     omit their own "space" key)
//   proof             [{"formula":"...", "by":{...}},...] with "by" one of
//                     {"axiom":name[, "subst":{"phi":"..."}]},
//                     {"premise":k}, {"mp":[from, imp]},
//                     {"gen":from, "mode":"A"|"box"|"d"|"diff"},
//                     {"sub":from, "map":{"p":"..."}}; all indices 1-based
//   L-structure       {"points":n, "sets":[[point indices],...],
//                      "plus":[[...],...], "minus":[...], "zero":i,
//                      "one":i, "preds":{"p":[indices],...}, "k":i}
//   realized tree     write-only dump: {"root_world", "depth", "nodes":
//                     [{"stem", "label", "level", "parent", "children",
//                       "boundary":{"stem","depth"}},...], "roots"}
//                     with boundary present on dissected nodes only;
//                     "stem" is the node's shortest member stem and
//                     boundary "depth" its separation exponent (points
//                     of that boundary are 2^-depth apart).

#pragma once

#include <string>

#include "topomodal/alexandrov.hpp"
#include "topomodal/foltrans.hpp"
#include "topomodal/hilbert.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/realize.hpp"
#include "topomodal/region.hpp"

namespace topomodal {

KripkeModel kripke_model_from_json(const std::string& text);
std::string kripke_model_to_json(const KripkeModel& m);

FiniteModel finite_model_from_json(const std::string& text);
std::string finite_model_to_json(const FiniteModel& m);

Region region_from_json(const std::string& text);
std::string region_to_json(const Region& r);

SymbolicModel symbolic_model_from_json(const std::string& text);
std::string symbolic_model_to_json(const SymbolicModel& m);

Proof proof_from_json(const std::string& text);
std::string proof_to_json(const Proof& p);

// The reader validates the algebra tables (validate_lstructure).
LStructure lstructure_from_json(const std::string& text);
std::string lstructure_to_json(const LStructure& s);

std::string realized_to_json(const RealizedStructure& rs);

}  // namespace topomodal
