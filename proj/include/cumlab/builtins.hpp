#pragma once

#include "cumlab/product_space.hpp"

namespace cumlab {

/// f(x) = Σ_j x_j over atom values.
TabFn sum_function(const SpacePtr& space);

/// f(x) = Σ_j x_j x_{j+1} over atom values (adjacent pairs, optionally cyclic).
TabFn adjacent_products(const SpacePtr& space, bool cyclic = false);

/// Number of vertices v with C(v,2) == n_edges, or -1.
int vertices_for_edges(int n_edges);

/// Coordinate of edge {a,b} (a < b) among the C(v,2) lexicographically
/// ordered vertex pairs (0,1), (0,2), ..., (v-2,v-1).
int edge_coordinate(int vertices, int a, int b);

/// Number of triangles in the graph whose edge indicators are the
/// coordinates: edge e is present when its atom index is 1. Every component
/// must have exactly two atoms.
TabFn triangle_count(const SpacePtr& space, int vertices);

} // namespace cumlab
