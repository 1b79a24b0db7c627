#pragma once

#include "json.hpp"
#include "vlat/lattice.hpp"

namespace vlat {

using json = nlohmann::json;

// {"kind": "padic", "p": 3, "precision": 24}; laurent2 uses "q" and [N_t, N_u].
RingConfig ring_from_json(const json& j);
json ring_to_json(const RingConfig& r);

// padic/two_adic: "decimal"; ramified2: [a, b]; laurent2: {"i": {"j": digit}}.
// Elements known to less than the cap are wrapped as {"value": ..., "known_to": ...}.
RingElem elem_from_json(const RingConfig& ring, const json& j);
json elem_to_json(const RingElem& x);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const RingConfig& ring, const json& j);

// {"ring": {...}, "gram": [[...]]}
GramLattice lattice_from_json(const json& j);
json lattice_to_json(const GramLattice& M);
GramLattice load_lattice(const std::string& path);

json value_to_json(const ValGroupElem& v);

}  // namespace vlat
