#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <utility>
#include <vector>

#include "polysurf/bezier.hpp"
#include "polysurf/mesh.hpp"
#include "polysurf/types.hpp"

namespace polysurf {

// Patch boundary edges, each parameterized by t in [0,1]:
//   edge 0: (t, 0)   edge 1: (1, t)   edge 2: (t, 1)   edge 3: (0, t)
inline Vec2 edge_point(int edge, double t) {
  switch (edge) {
    case 0: return {t, 0.0};
    case 1: return {1.0, t};
    case 2: return {t, 1.0};
    default: return {0.0, t};
  }
}

// Parametric direction from the edge into the patch interior.
inline Vec2 edge_inward(int edge) {
  switch (edge) {
    case 0: return {0.0, 1.0};
    case 1: return {-1.0, 0.0};
    case 2: return {0.0, -1.0};
    default: return {1.0, 0.0};
  }
}

// A stretch of boundary shared by two patches. The common curve is traversed
// by s in [0,1]; on A it covers edge parameters [a_lo, a_hi] (increasing with
// s), on B it covers [b_lo, b_hi], decreasing with s when flip is set.
// Spans are [0,1] except where a patch edge abuts several smaller neighbors
// (T-junction seams, cap sectors meeting one regular cell).
struct EdgeContact {
  int patch_a = -1, edge_a = 0;
  int patch_b = -1, edge_b = 0;
  double a_lo = 0.0, a_hi = 1.0;
  double b_lo = 0.0, b_hi = 1.0;
  bool flip = false;
};

// Edge parameters of both patches at curve parameter s.
inline std::pair<double, double> contact_params(const EdgeContact& c, double s) {
  const double ta = c.a_lo + s * (c.a_hi - c.a_lo);
  const double tb = c.flip ? c.b_hi - s * (c.b_hi - c.b_lo) : c.b_lo + s * (c.b_hi - c.b_lo);
  return {ta, tb};
}

// Registration of a piece of block boundary lying on the spline-complex seam
// that crosses the mesh edge (inside, outside); build_complex pairs matching
// registrations of the two flanking blocks into EdgeContacts. The seam curve
// carries a canonical parameter with 0 at the centroid of the face right of
// min(inside,outside) -> max(...); s0/s1 are its values at t = lo / t = hi.
struct BoundarySeg {
  int inside = -1, outside = -1;
  int patch = -1, edge = 0;
  double lo = 0.0, hi = 1.0;
  double s0 = 0.0, s1 = 1.0;
};

// Output of one configuration's builder: bi-3 coefficient masks plus the
// block's internal contacts and its boundary registrations. Weight rows are
// block-local (row 16*p + 4*i + j = coefficient (i,j) of block patch p);
// columns are mesh vertex ids.
struct PatchBlock {
  int patch_count = 0;
  std::vector<Eigen::Triplet<double>> weights;
  std::vector<EdgeContact> contacts;
  std::vector<BoundarySeg> boundary;

  void weight(int patch, int i, int j, int vertex, double w) {
    if (w != 0.0) weights.emplace_back(16 * patch + 4 * i + j, vertex, w);
  }
};

// The assembled surface: bi-3 patches, their provenance, and all shared-edge
// records. Patches are stored in emission order (configurations in
// classification order, block-internal order fixed by each builder).
struct SplineComplex {
  std::vector<Patch3d> patches;
  std::vector<int> owner;  // index into configs, -1 for hand-built patches
  std::vector<Configuration> configs;
  std::vector<EdgeContact> contacts;

  int patch_count() const { return int(patches.size()); }
  ConfigKind patch_config_kind(int p) const {
    const int c = owner.at(p);
    return c < 0 ? ConfigKind::Tensor : configs[c].kind;
  }
  std::string patch_kind_name(int p) const {
    const int c = owner.at(p);
    return c < 0 ? "tensor" : kind_name(configs[c].kind, configs[c].n);
  }
};

// Sparse masks taking control-net vertex data to the BB coefficients of every
// patch; row 16*p + 4*i + j holds coefficient (i,j) of patch p. Every row sums
// to 1 and draws only from the emitting configuration's footprint.
struct ControlToBBMap {
  Eigen::SparseMatrix<double> weights;

  int patch_count() const { return int(weights.rows()) / 16; }
};

// Geometry (or any per-vertex data) pushed through the masks.
std::vector<Patch3d> apply_map(const ControlToBBMap& map, const std::vector<Vec3>& vertices);
std::vector<PatchXd> apply_map(const ControlToBBMap& map, const Eigen::VectorXd& values);

struct BuiltComplex {
  SplineComplex complex;
  ControlToBBMap map;
};

// Dispatches every configuration to its builder, stitches block boundaries
// into the global contact list, and applies the map to the mesh positions.
BuiltComplex build_complex(const HalfEdgeMesh& mesh, const std::vector<Configuration>& configs);
BuiltComplex build_complex(const HalfEdgeMesh& mesh);  // classify + build

// Per-configuration builders.
PatchBlock emit_regular(const HalfEdgeMesh& mesh, const Configuration& conf);
PatchBlock emit_star(const HalfEdgeMesh& mesh, const Configuration& conf);
PatchBlock emit_ngon(const HalfEdgeMesh& mesh, const Configuration& conf);
PatchBlock emit_polar(const HalfEdgeMesh& mesh, const Configuration& conf);
PatchBlock emit_tjunction(const HalfEdgeMesh& mesh, const Configuration& conf);

// Smoothness audit of every contact.
enum class JoinClass { C1, G1, Fail };

struct EdgeCheck {
  EdgeContact contact;
  double c0 = 0.0;          // max position gap over the samples
  double g1 = 0.0;          // max normalized |det[tangent, inward A, inward B]|
  double c1_residual = 0.0; // misfit of the constant-ratio derivative match
  double ratio = 0.0;       // fitted constant of that match
  JoinClass verdict = JoinClass::Fail;
  bool degenerate = false;  // vanishing edge tangent away from a polar pole
};

struct G1Report {
  std::vector<EdgeCheck> edges;
  double max_c0 = 0.0;
  double max_g1 = 0.0;  // over C1/G1 edges (failed edges are reported per edge)
  int fail_count = 0;
  int degenerate_count = 0;

  bool all_pass() const { return fail_count == 0 && degenerate_count == 0; }
  std::string text() const;     // one line per edge plus a summary line
  std::string summary() const;
};

// Samples 16 Gauss points per contact: position gap, coplanarity of the two
// inward derivatives with the shared tangent, and a constant-ratio test that
// upgrades the verdict to C1. Classification cut for both residuals: 1e-10.
G1Report verify_g1(const SplineComplex& complex);

}  // namespace polysurf
