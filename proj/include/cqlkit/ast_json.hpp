#pragma once

#include <string>

#include "json.hpp"

#include "cqlkit/ast.hpp"

namespace cqlkit {

nlohmann::json to_json(const Query& q);

/// Indented one-node-per-line tree view.
std::string render_tree(const Query& q);

}  // namespace cqlkit
