#pragma once

#include <string>

#include <json.hpp>

#include "nehari/convex_body.hpp"

namespace nehari {

/// Parses a body description (see docs/body_schema.md). Errors are reported
/// as SchemaError naming the offending field.
ConvexBody body_from_json(const nlohmann::json& j, const std::string& where = "");

nlohmann::json body_to_json(const ConvexBody& body);

/// Reads a body description file.
ConvexBody load_body(const std::string& path);

Vec vec_from_json(const nlohmann::json& j, const std::string& where);
nlohmann::json vec_to_json(const Vec& v);

/// Parses "x,y,..." into a point.
Vec parse_point(const std::string& text);

}  // namespace nehari
