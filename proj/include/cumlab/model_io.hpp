#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "cumlab/decomposition.hpp"
#include "cumlab/product_space.hpp"

namespace cumlab {

struct Model {
    SpacePtr space;
    TabFn f;
    /// "table" or the builtin name.
    std::string kind;
};

/// Parses a model document:
///   { "components": [ {"atoms": [...], "probs": [...]}, ... ],
///     "function": {"kind": "table", "re": [...], "im": [...]}
///               | {"kind": "builtin", "name": "sum" | "product_pairs" | "triangle_count",
///                  "params": {...}} }
/// Syntax errors are reported as ValidationError with line and column;
/// schema errors name the offending JSON path.
Model parse_model(std::string_view text, std::size_t max_lattice = kDefaultMaxLattice);
Model load_model(const std::string& path, std::size_t max_lattice = kDefaultMaxLattice);

/// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte);

/// Debug dump: one entry per nonzero part with its subset and table.
nlohmann::json decomposition_json(const Decomposition& pi);

/// Doubles with 17 significant digits.
std::string format_double(double x);

} // namespace cumlab
