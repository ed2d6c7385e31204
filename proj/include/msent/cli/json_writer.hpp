#pragma once

#include <string>

#include "json.hpp"

namespace msent::cli {

// Serializes with every floating-point value printed to 17 significant
// digits (non-finite values become null), so reruns compare byte for byte.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace msent::cli
