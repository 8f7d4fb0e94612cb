#pragma once

// single-header nlohmann/json from vendor/
#include <json.hpp>
