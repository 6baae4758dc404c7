#pragma once

#include <json.hpp>

#include "mmx/conjugate.hpp"
#include "mmx/grid.hpp"
#include "mmx/interval.hpp"
#include "mmx/minimax.hpp"
#include "mmx/pwl.hpp"
#include "mmx/subdiff.hpp"

namespace mmx {

using Json = nlohmann::json;

// extended reals serialize as JSON numbers, infinities as "inf" / "-inf"
Json to_json(ExtReal v);
ExtReal extreal_from_json(const Json& j);

Json to_json(const Interval& iv);
Interval interval_from_json(const Json& j);

Json to_json(const PwlFunction& f);
PwlFunction pwl_from_json(const Json& j);

Json to_json(const GridFunction& g);
GridFunction grid_from_json(const Json& j);

Json to_json(const BifunctionFamily& fam);
BifunctionFamily family_from_json(const Json& j);

Json to_json(const BifunctionGrid& g);
BifunctionGrid bifgrid_from_json(const Json& j);

Json to_json(const FunctionSequence& s);
FunctionSequence sequence_from_json(const Json& j);

Json to_json(const SubdiffInterval& s);
Json to_json(const IdentityReport& r);
Json to_json(const MaxRuleReport& r);
Json to_json(const MinimaxReport& r);
Json to_json(const DualityReport& r);
Json to_json(const InteriorEqualityReport& r);
Json to_json(const MonotoneReport& r);
Json to_json(const MarginalReport& r);

}  // namespace mmx
