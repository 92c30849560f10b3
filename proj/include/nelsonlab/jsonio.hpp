#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

namespace nelsonlab {

using Json = nlohmann::ordered_json;

/// Serialises with every floating-point number printed through "%.17g" so
/// identical inputs give byte-identical reports.
void write_json(std::ostream& out, const Json& value, int indent = 2);

std::string json_to_string(const Json& value, int indent = 2);

}  // namespace nelsonlab
