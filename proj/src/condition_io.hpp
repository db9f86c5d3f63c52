#pragma once

#include "forge/condition.hpp"
#include "forge/json_writer.hpp"
#include "vendor_json.hpp"

namespace forge {

void write_condition(JsonWriter& json, const Condition& p);
Condition condition_from_parsed(const nlohmann::json& node, const ConditionContext* hint);

}  // namespace forge
