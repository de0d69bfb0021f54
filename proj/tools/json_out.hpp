#pragma once

#include <json.hpp>
#include <string>

namespace shadowtree::cli {

// Serializes with every floating-point value at 17 significant digits.
std::string dump17(const nlohmann::ordered_json& j, int indent = 2);
std::string fmt17(double v);

}  // namespace shadowtree::cli
