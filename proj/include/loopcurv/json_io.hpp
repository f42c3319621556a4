#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>

#include "loopcurv/spectral.hpp"

namespace loopcurv {

using Json = nlohmann::json;

/// Field spec: {"components": [[{"freq": n, "kind": "sin"|"cos"|"const",
/// "coeff": "p/q"}, ...], ...]} with one array per basis direction.
/// Unknown keys are rejected; errors carry the offending path.
LoopField parse_field_spec(const std::string& text, const LieAlgebraSpec& L);
LoopField parse_field_json(const Json& j, const LieAlgebraSpec& L);
Json field_to_json(const LoopField& x);

/// Algebra spec: {"dim": d, "brackets": [{"i":1,"j":2,"k":3,"coeff":"-2"},
/// ...], "labels": [...]} listing C^k_{ij} for i < j (1-based); the
/// antisymmetric partners are filled in and the result is validated.
LieAlgebraSpec parse_algebra_json(const Json& j);
Json algebra_to_json(const LieAlgebraSpec& L);

/// Builtin name ("su2", "so3", "abelianN"), inline JSON ("{...}"), or
/// "@path" to a JSON file.
LieAlgebraSpec resolve_algebra(const std::string& arg);

Json symbol_to_json(const Symbol& s);
Json term_to_json(const SymbolTerm& t);

Json provenance_json(const SobolevParam& p, const Rat& cutoff,
                     SignConvention conv, const std::string& algebra_name);

Json connection_to_json(const ConnectionSymbol& c,
                        const std::string& algebra_name, bool verbose);
Json curvature_to_json(const CurvatureSymbol& c,
                       const std::string& algebra_name, bool verbose);

Json order_estimate_to_json(const OrderEstimate& e);
std::string order_estimate_to_csv(const OrderEstimate& e);

std::string trig_to_string(const TrigPoly& p);
std::string symbol_to_table(const Symbol& s);

}  // namespace loopcurv
