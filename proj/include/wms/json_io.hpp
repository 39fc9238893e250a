#pragma once

#include <string>

#include <json.hpp>

#include "wms/dividing.hpp"
#include "wms/ideals.hpp"
#include "wms/logic.hpp"
#include "wms/stability.hpp"

namespace wms::json_io {

using ordered_json = nlohmann::ordered_json;

// Structure files look like
//   {"name": "P3", "universe": 3,
//    "relations": {"E": {"arity": 2, "symmetric": true, "tuples": [[0,1],[1,2]]}}}
// Symmetric relations may list each edge once; the loader closes them.
logic::finite_structure structure_from_json(const ordered_json& j);
logic::finite_structure load_structure(const std::string& path);
ordered_json structure_to_json(const logic::finite_structure& s);

// Ideal configs:
//   {"kind":"trivial"} | {"kind":"threshold","t":1} |
//   {"kind":"fraction","epsilon":"1/2"} | {"kind":"coarse","alpha":"1/2"} |
//   {"kind":"cover","family":["E(x,#0)","x = #2"]} |
//   {"kind":"product","left":{...},"right":{...}}
// plus the extensions {"kind":"explicit","family":[...]} and
// {"kind":"power","base":{...},"n":2}. Rationals are "p/q" strings (plain
// integers also accepted). Family members are formulas with exactly one
// free variable, evaluated against the structure. An optional "arity" field
// sets the context arity of the scalar kinds.
ideals::ideal_ptr ideal_from_json(const ordered_json& j, const logic::finite_structure& s);
ideals::ideal_ptr load_ideal(const std::string& path, const logic::finite_structure& s);

ordered_json tuples_to_json(const std::vector<std::vector<u32>>& ts);
ordered_json rank_to_json(const stability::rank_result& r, const std::string& psi,
                          const std::string& phi);
ordered_json order_to_json(const stability::order_witness& w, const std::string& phi);
ordered_json types_to_json(const stability::type_count& tc);
ordered_json dividing_to_json(const dividing::dividing_witness& w);
ordered_json uniform_to_json(const dividing::uniform_sequence& u,
                             const std::vector<logic::partitioned_formula>& delta);

}  // namespace wms::json_io
