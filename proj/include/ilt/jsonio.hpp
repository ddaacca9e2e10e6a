#pragma once

#include <json.hpp>

#include "ilt/ilt.hpp"
#include "ilt/solver.hpp"
#include "ilt/transforms.hpp"

namespace ilt {

using json = nlohmann::ordered_json;

// Operator as a list of {"index": {var: exp}, "coeff": "<canonical text>"},
// terms in graded-lex descending order.
json to_json(const Lpdo& op);
Lpdo lpdo_from_json(const json& j, const TowerPtr& tower);

json to_json(const PrincipalSymbol& s);

// The eight operators/functions of a certificate plus a verified stamp; the
// stamp is written only for certificates, which are verified on construction.
json to_json(const IltCertificate& cert);

json to_json(const IntertwiningReport& rep);
json to_json(const CascadeReport& rep, const FieldTower& tower);
json to_json(const LclmReport& rep);
json to_json(const IntertwiningSolution& sol);
json to_json(const std::vector<KernelCheckEntry>& entries, const FieldTower& tower);

}  // namespace ilt
