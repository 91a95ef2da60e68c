#pragma once

#include <string>

#include "json.hpp"
#include "owshift/weights.hpp"

namespace ows {

using Json = nlohmann::ordered_json;

/// Parses a weight specification document. Errors are SpecError with the
/// path of the offending field, or SingularWeight from validation.
WeightSpec spec_from_json(const Json& doc);
WeightSpec parse_spec(const std::string& text);
WeightSpec load_spec(const std::string& path);

Json spec_to_json(const WeightSpec& spec);
void save_spec(const std::string& path, const WeightSpec& spec);

}  // namespace ows
