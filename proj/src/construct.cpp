#include "polysurf/construct.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "construct_internal.hpp"

namespace polysurf {

namespace {

// Row r of the 1D map from three consecutive uniform quadratic B-spline
// coefficients to the four BB coefficients of the middle span.
constexpr double kBi2ToBB3[4][3] = {
    {0.5, 0.5, 0.0},
    {1.0 / 6, 5.0 / 6, 0.0},
    {0.0, 5.0 / 6, 1.0 / 6},
    {0.0, 0.5, 0.5},
};

PatchBlock dispatch(const HalfEdgeMesh& mesh, const Configuration& conf) {
  switch (conf.kind) {
    case ConfigKind::Tensor: return emit_regular(mesh, conf);
    case ConfigKind::Star: return emit_star(mesh, conf);
    case ConfigKind::NGon: return emit_ngon(mesh, conf);
    case ConfigKind::Polar: return emit_polar(mesh, conf);
    default: return emit_tjunction(mesh, conf);
  }
}

}  // namespace

std::vector<Patch3d> apply_map(const ControlToBBMap& map, const std::vector<Vec3>& vertices) {
  Eigen::MatrixXd v(vertices.size(), 3);
  for (size_t i = 0; i < vertices.size(); ++i) v.row(i) = vertices[i].transpose();
  const Eigen::MatrixXd r = map.weights * v;
  std::vector<Patch3d> patches(map.patch_count(), Patch3d(3, 3));
  for (int p = 0; p < map.patch_count(); ++p)
    for (int k = 0; k < 16; ++k) patches[p].coeffs()[k] = r.row(16 * p + k).transpose();
  return patches;
}

std::vector<PatchXd> apply_map(const ControlToBBMap& map, const Eigen::VectorXd& values) {
  const Eigen::VectorXd r = map.weights * values;
  std::vector<PatchXd> patches(map.patch_count(), PatchXd(3, 3));
  for (int p = 0; p < map.patch_count(); ++p)
    for (int k = 0; k < 16; ++k) patches[p].coeffs()[k] = r[16 * p + k];
  return patches;
}

// One bi-3 patch over the dual cell of a regular interior vertex. The local
// bi-2 net is the 3x3 of vertex, edge neighbors, and face diagonals; u points
// at neighbor 0, v at neighbor 1. Collapsed footprints (triangle fans at a
// pole) repeat vertices and the triplet sum handles the coincidence.
PatchBlock emit_regular(const HalfEdgeMesh& mesh, const Configuration& conf) {
  (void)mesh;
  const auto& f = conf.footprint;
  if (f.size() != 9) throw std::invalid_argument("tensor footprint must have 9 vertices");
  // net[a][b]: a along u, b along v.
  const int net[3][3] = {
      {f[7], f[3], f[6]},
      {f[4], f[0], f[2]},
      {f[8], f[1], f[5]},
  };
  PatchBlock block;
  block.patch_count = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          block.weight(0, i, j, net[a][b], kBi2ToBB3[i][a] * kBi2ToBB3[j][b]);

  const int v = f[0];
  detail::register_seam(block, v, f[1], 0, 1, 0, 1, 0, 1);
  detail::register_seam(block, v, f[2], 0, 2, 0, 1, 1, 0);
  detail::register_seam(block, v, f[3], 0, 3, 0, 1, 1, 0);
  detail::register_seam(block, v, f[4], 0, 0, 0, 1, 0, 1);
  return block;
}

BuiltComplex build_complex(const HalfEdgeMesh& mesh, const std::vector<Configuration>& configs) {
  BuiltComplex built;
  SplineComplex& cx = built.complex;
  cx.configs = configs;

  std::vector<Eigen::Triplet<double>> trips;
  // Seam registrations grouped by undirected mesh edge; map keys give a
  // deterministic pairing order.
  std::map<std::pair<int, int>, std::vector<BoundarySeg>> seams;

  int patch_off = 0;
  for (size_t ci = 0; ci < configs.size(); ++ci) {
    PatchBlock block = dispatch(mesh, configs[ci]);
    for (const auto& t : block.weights)
      trips.emplace_back(t.row() + 16 * patch_off, t.col(), t.value());
    for (EdgeContact c : block.contacts) {
      c.patch_a += patch_off;
      c.patch_b += patch_off;
      cx.contacts.push_back(c);
    }
    for (BoundarySeg s : block.boundary) {
      s.patch += patch_off;
      seams[{std::min(s.inside, s.outside), std::max(s.inside, s.outside)}].push_back(s);
    }
    for (int p = 0; p < block.patch_count; ++p) cx.owner.push_back(int(ci));
    patch_off += block.patch_count;
  }

  for (const auto& [key, segs] : seams) {
    // Segments from the two sides of the seam, in registration order.
    std::vector<const BoundarySeg*> lo_side, hi_side;
    for (const BoundarySeg& s : segs)
      (s.inside == key.first ? lo_side : hi_side).push_back(&s);
    if (lo_side.empty() || hi_side.empty()) continue;  // mesh boundary or pole seam
    for (const BoundarySeg* a : lo_side) {
      for (const BoundarySeg* b : hi_side) {
        const double a0 = std::min(a->s0, a->s1), a1 = std::max(a->s0, a->s1);
        const double b0 = std::min(b->s0, b->s1), b1 = std::max(b->s0, b->s1);
        const double c0 = std::max(a0, b0), c1 = std::min(a1, b1);
        if (c1 - c0 < 1e-9) continue;
        const auto to_t = [](const BoundarySeg& s, double sc) {
          return s.lo + (sc - s.s0) / (s.s1 - s.s0) * (s.hi - s.lo);
        };
        double ta0 = to_t(*a, c0), ta1 = to_t(*a, c1);
        double tb0 = to_t(*b, c0), tb1 = to_t(*b, c1);
        if (ta0 > ta1) {
          std::swap(ta0, ta1);
          std::swap(tb0, tb1);
        }
        EdgeContact c;
        c.patch_a = a->patch;
        c.edge_a = a->edge;
        c.patch_b = b->patch;
        c.edge_b = b->edge;
        c.a_lo = ta0;
        c.a_hi = ta1;
        c.flip = tb0 > tb1;
        c.b_lo = std::min(tb0, tb1);
        c.b_hi = std::max(tb0, tb1);
        cx.contacts.push_back(c);
      }
    }
  }

  built.map.weights.resize(16 * patch_off, mesh.net.vertices.size());
  built.map.weights.setFromTriplets(trips.begin(), trips.end());
  cx.patches = apply_map(built.map, mesh.net.vertices);
  return built;
}

BuiltComplex build_complex(const HalfEdgeMesh& mesh) {
  return build_complex(mesh, classify(mesh));
}

}  // namespace polysurf
