#pragma once

// Shared helpers for the patch builders: 1D Bernstein curve algebra and
// boundary-seam registration.  Value types need +, -, and double*.

#include <array>

#include "polysurf/construct.hpp"

namespace polysurf {
namespace detail {

template <class V>
using Cubic = std::array<V, 4>;
template <class V>
using Quadratic = std::array<V, 3>;
template <class V>
using Linear = std::array<V, 2>;

// Degree raise quadratic -> cubic.
template <class V>
Cubic<V> raise3(const Quadratic<V>& q) {
  return {q[0], (q[0] + 2.0 * q[1]) / 3.0, (2.0 * q[1] + q[2]) / 3.0, q[2]};
}

// Cubic blossom b(a,b,c).
template <class V>
V blossom3(const Cubic<V>& p, double a, double b, double c) {
  const double w0 = (1 - a) * (1 - b) * (1 - c);
  const double w1 = a * (1 - b) * (1 - c) + b * (1 - a) * (1 - c) + c * (1 - a) * (1 - b);
  const double w2 = a * b * (1 - c) + a * c * (1 - b) + b * c * (1 - a);
  const double w3 = a * b * c;
  return w0 * p[0] + w1 * p[1] + w2 * p[2] + w3 * p[3];
}

template <class V>
V blossom2(const Quadratic<V>& q, double a, double b) {
  return (1 - a) * (1 - b) * q[0] + (a * (1 - b) + b * (1 - a)) * q[1] + a * b * q[2];
}

// Restriction to [s0,s1].
template <class V>
Cubic<V> seg3(const Cubic<V>& p, double s0, double s1) {
  return {blossom3(p, s0, s0, s0), blossom3(p, s0, s0, s1), blossom3(p, s0, s1, s1),
          blossom3(p, s1, s1, s1)};
}

template <class V>
Quadratic<V> seg2(const Quadratic<V>& q, double s0, double s1) {
  return {blossom2(q, s0, s0), blossom2(q, s0, s1), blossom2(q, s1, s1)};
}

// Products staying within degree 3; one factor is a scalar profile.
template <class V>
Cubic<V> lin_times_quad(const Linear<double>& l, const Quadratic<V>& q) {
  return {l[0] * q[0], (2.0 * (l[0] * q[1]) + l[1] * q[0]) / 3.0,
          (l[0] * q[2] + 2.0 * (l[1] * q[1])) / 3.0, l[1] * q[2]};
}

template <class V>
Cubic<V> quad_times_lin(const Quadratic<V>& q, const Linear<double>& l) {
  return {q[0] * l[0], (2.0 * (q[1] * l[0]) + q[0] * l[1]) / 3.0,
          (q[2] * l[0] + 2.0 * (q[1] * l[1])) / 3.0, q[2] * l[1]};
}

template <class V>
Cubic<V> quad_times_lin(const Quadratic<double>& q, const Linear<V>& l) {
  return {q[0] * l[0], (2.0 * (q[1] * l[0]) + q[0] * l[1]) / 3.0,
          (q[2] * l[0] + 2.0 * (q[1] * l[1])) / 3.0, q[2] * l[1]};
}

// Halves of a quadratic split at 1/2.
template <class V>
Quadratic<V> split_left(const Quadratic<V>& q) {
  const V q01 = 0.5 * (q[0] + q[1]);
  const V q12 = 0.5 * (q[1] + q[2]);
  return {q[0], q01, 0.5 * (q01 + q12)};
}

template <class V>
Quadratic<V> split_right(const Quadratic<V>& q) {
  const V q01 = 0.5 * (q[0] + q[1]);
  const V q12 = 0.5 * (q[1] + q[2]);
  return {0.5 * (q01 + q12), q12, q[2]};
}

// Cubic BB -> 6 coefficients of the C1 double-knot spline on {0, 1/2, 1}.
template <class V>
std::array<V, 6> spline_of_cubic(const Cubic<V>& p) {
  return {blossom3(p, 0, 0, 0),   blossom3(p, 0, 0, 0.5), blossom3(p, 0, 0.5, 0.5),
          blossom3(p, 0.5, 0.5, 1), blossom3(p, 0.5, 1, 1), blossom3(p, 1, 1, 1)};
}

// Double-knot spline coefficients -> BB coefficients of the two halves.
template <class V>
std::pair<Cubic<V>, Cubic<V>> spline_to_bb(const std::array<V, 6>& s) {
  const V m = 0.5 * (s[2] + s[3]);
  return {Cubic<V>{s[0], s[1], s[2], m}, Cubic<V>{m, s[3], s[4], s[5]}};
}

// Records that patch edge [lo,hi] lies on the cell seam crossing mesh edge
// (inside,outside).  par_lo/par_hi give where the edge endpoints sit along the
// full crossing curve, measured in the inside vertex's fan direction (0 at the
// centroid of the face before outside, 1 at the face after).  The stored s is
// flipped to the canonical direction of the undirected mesh edge so both cells
// describe the seam consistently.
inline void register_seam(PatchBlock& block, int inside, int outside, int patch, int edge,
                          double lo, double hi, double par_lo, double par_hi) {
  BoundarySeg s;
  s.inside = inside;
  s.outside = outside;
  s.patch = patch;
  s.edge = edge;
  s.lo = lo;
  s.hi = hi;
  s.s0 = inside < outside ? par_lo : 1.0 - par_lo;
  s.s1 = inside < outside ? par_hi : 1.0 - par_hi;
  block.boundary.push_back(s);
}

}  // namespace detail
}  // namespace polysurf
