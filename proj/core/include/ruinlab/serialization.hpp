#pragma once

#include <nlohmann/json.hpp>

#include "ruinlab/estimators.hpp"
#include "ruinlab/lundberg.hpp"
#include "ruinlab/model.hpp"

namespace ruinlab {

// Configuration objects parse strictly: unknown keys raise InvalidConfig.
// Non-finite numbers are written as null (JSON has no infinity).

nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelSpec& m);
ModelSpec model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LundbergSolution& s);
nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const DiagnosticReport& r);

}  // namespace ruinlab
