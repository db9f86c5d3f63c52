#pragma once

// Vendored single-header nlohmann/json, used for parsing only; output goes
// through JsonWriter to keep bytes stable.
#include <json.hpp>
