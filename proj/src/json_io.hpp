#pragma once

// JSON conversions shared by the config loader, reports and field manifests.

#include <json.hpp>

#include "boltzscat/collision.hpp"
#include "boltzscat/maxwellian.hpp"
#include "boltzscat/phase_field.hpp"

namespace bz {

using json = nlohmann::json;

json params_to_json(const Params& p);
Params params_from_json(const json& j);
json grid_to_json(const PhaseGrid& g);
PhaseGrid grid_from_json(const json& j);
json kernel_to_json(const KernelSpec& k);
// bbar is recomputed; a stored value that disagrees by more than 1e-8 relative is an error.
KernelSpec kernel_from_json(const json& j, int D);

// Numbers that may be infinite are written as the strings "inf" / "-inf".
json number_or_inf(double x);
double number_or_inf(const json& j);

}  // namespace bz
