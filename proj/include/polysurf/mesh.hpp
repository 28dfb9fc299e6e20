#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "polysurf/types.hpp"

namespace polysurf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ControlNet {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;  // 0-based vertex cycles, CCW
};

// Wavefront .obj subset: `v x y z` and polygonal `f` lines (1-based);
// #, vt, vn, g, o, s, usemtl, mtllib lines ignored; `i/j/k` keeps i.
ControlNet parse_obj(std::istream& in);
ControlNet parse_obj(const std::string& text);
ControlNet parse_obj_file(const std::string& path);

class HalfEdgeMesh {
 public:
  struct HalfEdge {
    int origin = -1, face = -1, next = -1, prev = -1, twin = -1;
  };

  ControlNet net;
  std::vector<HalfEdge> he;
  std::vector<int> vertex_out;  // outgoing half-edge per vertex (-1: isolated);
                                // for boundary vertices the fan's CW-most one
  std::vector<int> face_he;
  std::vector<int> valence;       // incident edges
  std::vector<char> on_boundary;  // per vertex
  std::vector<std::string> warnings;

  int nv() const { return int(net.vertices.size()); }
  int nf() const { return int(net.faces.size()); }
  int face_size(int f) const { return int(net.faces[f].size()); }
  const std::vector<int>& face_vertices(int f) const { return net.faces[f]; }
  const Vec3& position(int v) const { return net.vertices[v]; }
  Vec3 centroid(int f) const;
  bool closed() const;

  int dest(int h) const { return he[he[h].next].origin; }
  int halfedge_from_to(int a, int b) const;

  // CCW fans around a vertex; full cycles for interior vertices, the boundary
  // fan (CW-most to CCW-most) otherwise. faces_ccw(v)[i] lies between
  // neighbors_ccw(v)[i] and [i+1].
  std::vector<int> neighbors_ccw(int v) const;
  std::vector<int> faces_ccw(int v) const;
};

// Builds twin/next/prev connectivity. Input faces must be consistently wound
// (the first face fixes the outward orientation). Errors: non-manifold edges,
// inconsistent winding. Isolated vertices are kept but disconnected (warning).
HalfEdgeMesh build_halfedge(const ControlNet& net);

enum class ConfigKind { Tensor, Star, NGon, Polar, T0, T1, T2 };

std::string kind_name(ConfigKind kind, int n);  // "tensor", "star5", "t1", ...

struct Configuration {
  ConfigKind kind;
  int n = 0;        // valence (star/polar), face size (ngon); 0 otherwise
  int anchor = 0;   // vertex (tensor/star/polar) or face (ngon/T)
  bool anchor_is_face = false;
  std::vector<int> footprint;  // stencil-ordered nodes; repeats allowed
  std::vector<int> claims;     // interior vertices whose cells this tiles
};

// Covers every interior vertex cell exactly once or throws AdmissibilityError.
// Deterministic: ordered by (anchor_is_face, anchor).
std::vector<Configuration> classify(const HalfEdgeMesh& mesh);

struct AdmissibilityFinding {
  std::string kind;
  int anchor = -1;  // vertex or face id depending on kind
  std::string message;
};

struct AdmissibilityReport {
  std::vector<AdmissibilityFinding> findings;
  bool ok() const { return findings.empty(); }
  std::string text() const;
  std::string json() const;
};

AdmissibilityReport check_admissibility(const HalfEdgeMesh& mesh);

// Configuration census as printed by the CLI: "tensor: 16", "star3: 8", ...
std::string census_text(const std::vector<Configuration>& configs);

}  // namespace polysurf
