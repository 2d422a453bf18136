#pragma once

#include <string>

#include <json.hpp>

#include "kgyro/canonical.hpp"
#include "kgyro/params.hpp"
#include "kgyro/phase.hpp"

namespace kgyro {

using nlohmann::json;

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

Params params_from_json(const json& j);
json params_to_json(const Params& p);

PhaseState state_from_json(const json& j);
json state_to_json(const PhaseState& s);

DGParams dgparams_from_json(const json& j);
json dgparams_to_json(const DGParams& p);

}  // namespace kgyro
