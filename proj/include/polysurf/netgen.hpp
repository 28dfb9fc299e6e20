#pragma once

#include "polysurf/mesh.hpp"

namespace polysurf::netgen {

// m x m quad faces; spacing h = 2/(m-1) and extent [-1-h/2, 1+h/2] so the
// spline surface (which recedes half a cell) covers exactly [-1,1]^2.
ControlNet grid(int m);

// Axis-aligned unit cube [-1,1]^3, 6 quads, outward CCW winding.
ControlNet cube();

// n-valent interior vertex surrounded by n quads, padded with two extra
// vertex rings so the star footprint stays interior.
ControlNet star_disk(int n);

// n-gon face surrounded by 2n quads, plus `rings` padding rings (>= 1).
ControlNet ngon_disk(int n, int rings = 2);

// m triangles fanning around an apex lifted to `height`, plus two quad rings.
ControlNet polar_cone(int m, double height = 0.8);

enum class Insert { T0, T1Add, T1Sub, T2Add, T2Sub, Polar4, Polar8 };

// The reference grid(16) net with one local modification near the center.
ControlNet grid16_with(Insert kind);

// Bottle-opener-style demo net: polar cap, quad tube, T1 ring growth and a
// star-based 6->4 transition; closed surface.
ControlNet opener();

}  // namespace polysurf::netgen
