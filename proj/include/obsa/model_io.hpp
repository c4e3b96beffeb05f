#pragma once

#include "obsa/lti_model.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace obsa {

struct LoadedModel {
    LdtSystem system;
    std::vector<std::string> warnings;  // e.g. ignored unknown keys
};

/// Parses the model document
///   { "name": str, "A": [[...], ...], "C": [[...], ...],
///     "rated_states": [...], "rated_outputs": [...], "shared_ranges": [...] }
/// (A row-major n x n, C m x n; the three scale vectors optional). Unknown
/// keys are rejected with a warning listing them. Structural problems throw
/// std::invalid_argument.
LoadedModel load_model_json(const nlohmann::json& doc,
                            const std::string& fallback_name = "");

/// Reads and parses a model file; the file stem is the fallback name.
LoadedModel load_model_file(const std::string& path);

nlohmann::ordered_json model_to_json(const LdtSystem& sys);

}  // namespace obsa
