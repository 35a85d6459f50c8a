#pragma once

#include "glab/geometry.hpp"

namespace glab {

/// Point minimising the summed distance to a, b, c (Weiszfeld iteration).
/// Equals the vertex at an angle of 120° or more.
Point fermat_point(const Point& a, const Point& b, const Point& c);

/// Inserts free Fermat junctions into a tree while any vertex has two
/// neighbours spanning less than 120° and the junction saves length.
/// Input must be a tree; output is a tree on a superset of the vertices.
Animal steiner_improve(Animal tree);

}  // namespace glab
