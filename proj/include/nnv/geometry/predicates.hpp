#pragma once

#include "nnv/geometry/core.hpp"

namespace nnv::geom {

// Exact-sign orientation test (adaptive-precision arithmetic after Shewchuk).
// Returns a value whose sign matches the exact sign of
//   det | a.x - c.x   a.y - c.y |
//       | b.x - c.x   b.y - c.y |
// i.e. positive when a, b, c make a counterclockwise turn.
double orient2d(Point2 a, Point2 b, Point2 c);

// Sign of orient2d: +1 counterclockwise, -1 clockwise, 0 collinear.
int orientation(Point2 a, Point2 b, Point2 c);

// True when c lies on the closed segment [a, b]; requires exact collinearity.
bool on_segment(Point2 a, Point2 b, Point2 c);

}  // namespace nnv::geom
