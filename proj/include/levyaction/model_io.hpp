#pragma once

#include <string>

#include <json.hpp>

#include "levyaction/expr.hpp"
#include "levyaction/model.hpp"

namespace levyaction {

// Parsed and validated model document. Keeps the expression sources so
// documents round-trip.
struct ModelDocument {
    ModelSpec spec;
    int grid_n = 200;
    std::string b_source, sigma_source, eta_source;
    double state_lo = -10.0, state_hi = 10.0;
};

// Schema errors name the offending location with a JSON-pointer style path;
// expression errors carry the character offset.
ModelDocument parse_model_json(const nlohmann::json& doc);
ModelDocument parse_model_file(const std::string& path);

}  // namespace levyaction
