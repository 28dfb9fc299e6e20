#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "polysurf/mesh.hpp"
#include "polysurf/netgen.hpp"

using namespace polysurf;

namespace {

const char* kCubeObj =
    "# unit cube\n"
    "v -1 -1 -1\nv 1 -1 -1\nv 1 1 -1\nv -1 1 -1\n"
    "v -1 -1 1\nv 1 -1 1\nv 1 1 1\nv -1 1 1\n"
    "f 1 4 3 2\n"
    "f 5 6 7 8\n"
    "f 1 2 6 5\n"
    "f 2 3 7 6\n"
    "f 3 4 8 7\n"
    "f 4 1 5 8\n";

std::map<std::string, int> census_map(const std::vector<Configuration>& cs) {
  std::map<std::string, int> m;
  for (const auto& c : cs) m[kind_name(c.kind, c.n)]++;
  return m;
}

}  // namespace

TEST_CASE("parse_obj: cube") {
  ControlNet net = parse_obj(std::string(kCubeObj));
  CHECK(net.vertices.size() == 8);
  CHECK(net.faces.size() == 6);
  CHECK(net.faces[0] == std::vector<int>{0, 3, 2, 1});
  CHECK(net.vertices[6] == Vec3(1, 1, 1));
}

TEST_CASE("parse_obj: ignored lines and slash indices") {
  std::string text =
      "o thing\ng part\ns off\nusemtl m\nmtllib f.mtl\n"
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "vt 0 0\nvn 0 0 1\n"
      "f 1/1/1 2/2/1 3/3/1 4/4/1\n";
  ControlNet net = parse_obj(text);
  CHECK(net.vertices.size() == 4);
  REQUIRE(net.faces.size() == 1);
  CHECK(net.faces[0] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("parse_obj: errors") {
  CHECK_THROWS_AS(parse_obj(std::string("")), ParseError);
  CHECK_THROWS_AS(parse_obj(std::string("v 0 0 0\n")), ParseError);  // no faces
  CHECK_THROWS_AS(parse_obj(std::string("v 0 0 zebra\nf 1 1 1\n")), ParseError);
  CHECK_THROWS_AS(parse_obj(std::string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n")), ParseError);
  CHECK_THROWS_AS(parse_obj(std::string("v 0 0 0\nv 1 0 0\nf 1 2\n")), ParseError);
  CHECK_THROWS_AS(parse_obj(std::string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 2\n")), ParseError);
}

TEST_CASE("parse_obj: grid counts") {
  ControlNet net = netgen::grid(3);  // 3x3 faces, 4x4 vertices
  CHECK(net.vertices.size() == 16);
  CHECK(net.faces.size() == 9);
  for (const auto& f : net.faces) CHECK(f.size() == 4);
}

TEST_CASE("build_halfedge: cube combinatorics") {
  HalfEdgeMesh mesh = build_halfedge(parse_obj(std::string(kCubeObj)));
  CHECK(mesh.closed());
  int vsum = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    CHECK(mesh.valence[v] == 3);
    CHECK(!mesh.on_boundary[v]);
    vsum += mesh.valence[v];
  }
  CHECK(vsum == 24);  // 2 * 12 edges
  for (int h = 0; h < int(mesh.he.size()); ++h) {
    REQUIRE(mesh.he[h].twin >= 0);
    CHECK(mesh.he[mesh.he[h].twin].twin == h);
  }
  for (int f = 0; f < mesh.nf(); ++f) {
    int h = mesh.face_he[f];
    int steps = 0, cur = h;
    do {
      cur = mesh.he[cur].next;
      ++steps;
    } while (cur != h && steps < 10);
    CHECK(steps == mesh.face_size(f));
  }
  for (int v = 0; v < mesh.nv(); ++v) {
    CHECK(mesh.neighbors_ccw(v).size() == 3);
    CHECK(mesh.faces_ccw(v).size() == 3);
  }
}

TEST_CASE("build_halfedge: open grid boundary") {
  HalfEdgeMesh mesh = build_halfedge(netgen::grid(3));
  int interior = 0, boundary = 0;
  for (int v = 0; v < mesh.nv(); ++v) {
    if (mesh.on_boundary[v]) {
      ++boundary;
    } else {
      ++interior;
      CHECK(mesh.valence[v] == 4);
      CHECK(mesh.neighbors_ccw(v).size() == 4);
      CHECK(mesh.faces_ccw(v).size() == 4);
    }
  }
  CHECK(interior == 4);
  CHECK(boundary == 12);
}

TEST_CASE("build_halfedge: inconsistent winding is an error") {
  ControlNet net;
  net.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {2, 0, 0}, {2, 1, 0}};
  net.faces = {{0, 1, 2, 3}, {1, 2, 5, 4}};  // both faces traverse the shared edge 1->2
  CHECK_THROWS_AS(build_halfedge(net), MeshError);
}

TEST_CASE("build_halfedge: errors") {
  ControlNet moebius;
  moebius.vertices.assign(6, Vec3::Zero());
  moebius.faces = {{0, 1, 4, 3}, {1, 2, 5, 4}, {2, 3, 0, 5}};
  CHECK_THROWS_AS(build_halfedge(moebius), MeshError);

  ControlNet nonmanifold;
  nonmanifold.vertices.assign(8, Vec3::Zero());
  nonmanifold.faces = {{0, 1, 2, 3}, {1, 0, 4, 5}, {0, 1, 6, 7}};
  CHECK_THROWS_AS(build_halfedge(nonmanifold), MeshError);
}

TEST_CASE("build_halfedge: isolated vertex warns") {
  ControlNet net;
  net.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {9, 9, 9}};
  net.faces = {{0, 1, 2, 3}};
  HalfEdgeMesh mesh = build_halfedge(net);
  CHECK(mesh.valence[4] == 0);
  CHECK(!mesh.warnings.empty());
}

TEST_CASE("classify: cube is eight Star(3)") {
  HalfEdgeMesh mesh = build_halfedge(parse_obj(std::string(kCubeObj)));
  auto configs = classify(mesh);
  REQUIRE(configs.size() == 8);
  for (const auto& c : configs) {
    CHECK(c.kind == ConfigKind::Star);
    CHECK(c.n == 3);
    CHECK(c.footprint.size() == 7);
    CHECK(c.claims == std::vector<int>{c.anchor});
  }
  auto cm = census_map(configs);
  CHECK(cm["star3"] == 8);
  CHECK(census_text(configs) == "star3: 8");
}

TEST_CASE("classify: regular grid is tensor only") {
  HalfEdgeMesh mesh = build_halfedge(netgen::grid(5));  // 6x6 vertices
  auto configs = classify(mesh);
  REQUIRE(configs.size() == 16);
  for (const auto& c : configs) {
    CHECK(c.kind == ConfigKind::Tensor);
    CHECK(c.footprint.size() == 9);
  }
}

TEST_CASE("classify: tensor footprint layout matches the 3x3 stencil") {
  HalfEdgeMesh mesh = build_halfedge(netgen::grid(5));
  auto configs = classify(mesh);
  // footprint order [v, e0..e3, d0..d3] with f_i = [v, e_i, d_i, e_{i+1}]
  for (const auto& c : configs) {
    for (int i = 0; i < 4; ++i) {
      int e0 = c.footprint[1 + i], e1 = c.footprint[1 + (i + 1) % 4], d = c.footprint[5 + i];
      bool found = false;
      for (int f : mesh.faces_ccw(c.anchor)) {
        const auto& fv = mesh.face_vertices(f);
        for (int k = 0; k < 4; ++k)
          if (fv[k] == c.anchor && fv[(k + 1) % 4] == e0 && fv[(k + 2) % 4] == d &&
              fv[(k + 3) % 4] == e1)
            found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("classify: star disk census") {
  HalfEdgeMesh mesh = build_halfedge(netgen::star_disk(5));
  auto configs = classify(mesh);
  auto cm = census_map(configs);
  CHECK(cm["star5"] == 1);
  CHECK(cm["star3"] == 5);
  CHECK(cm["tensor"] == 15);
  for (const auto& c : configs)
    if (c.kind == ConfigKind::Star && c.n == 5) CHECK(c.footprint.size() == 11);
}

TEST_CASE("classify: ngon disk census") {
  HalfEdgeMesh mesh = build_halfedge(netgen::ngon_disk(5));
  auto configs = classify(mesh);
  auto cm = census_map(configs);
  CHECK(cm["ngon5"] == 1);
  CHECK(cm["tensor"] == 15);
  for (const auto& c : configs)
    if (c.kind == ConfigKind::NGon) {
      CHECK(c.footprint.size() == 20);
      CHECK(c.claims.size() == 5);
    }
}

TEST_CASE("classify: polar cone census") {
  HalfEdgeMesh mesh = build_halfedge(netgen::polar_cone(6));
  auto configs = classify(mesh);
  auto cm = census_map(configs);
  CHECK(cm["polar6"] == 1);
  CHECK(cm["tensor"] == 12);
  for (const auto& c : configs)
    if (c.kind == ConfigKind::Polar) CHECK(c.footprint.size() == 7);
}

TEST_CASE("classify: collapsed ring cells repeat the pole in the stencil") {
  HalfEdgeMesh mesh = build_halfedge(netgen::polar_cone(4));
  auto configs = classify(mesh);
  int pole = -1;
  for (const auto& c : configs)
    if (c.kind == ConfigKind::Polar) pole = c.anchor;
  REQUIRE(pole >= 0);
  int collapsed = 0;
  for (const auto& c : configs) {
    if (c.kind != ConfigKind::Tensor) continue;
    int reps = 0;
    for (int v : c.footprint) reps += (v == pole);
    if (reps > 0) {
      CHECK(reps == 3);
      ++collapsed;
    }
  }
  CHECK(collapsed == 4);  // the ring cells
}

TEST_CASE("classify is deterministic") {
  HalfEdgeMesh mesh = build_halfedge(netgen::star_disk(7));
  auto a = classify(mesh);
  auto b = classify(mesh);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].anchor == b[i].anchor);
    CHECK(a[i].footprint == b[i].footprint);
  }
}

TEST_CASE("classify: grid inserts") {
  struct Expect {
    netgen::Insert insert;
    const char* name;
    int count;
    int star5;
    int tensor;
    int claim_size;
  };
  const Expect table[] = {
      {netgen::Insert::T0, "t0", 1, 0, 230, 3},
      {netgen::Insert::T1Add, "t1", 1, 0, 228, 5},
      {netgen::Insert::T1Sub, "t1", 1, 0, 213, 5},
      {netgen::Insert::T2Add, "t2", 1, 0, 235, 6},
      {netgen::Insert::T2Sub, "t2", 1, 0, 204, 6},
      {netgen::Insert::Polar4, "polar4", 1, 4, 228, 1},
      {netgen::Insert::Polar8, "polar8", 1, 4, 228, 1},
  };
  for (const auto& e : table) {
    CAPTURE(e.name);
    auto configs = classify(build_halfedge(netgen::grid16_with(e.insert)));
    auto cm = census_map(configs);
    CHECK(cm[e.name] == e.count);
    CHECK(cm["star5"] == e.star5);
    CHECK(cm["tensor"] == e.tensor);
    for (const auto& c : configs)
      if (kind_name(c.kind, c.n) == e.name) CHECK(int(c.claims.size()) == e.claim_size);
  }
}

TEST_CASE("classify: every interior vertex claimed exactly once") {
  for (auto insert : {netgen::Insert::T0, netgen::Insert::T2Sub, netgen::Insert::Polar4}) {
    HalfEdgeMesh mesh = build_halfedge(netgen::grid16_with(insert));
    auto configs = classify(mesh);
    std::vector<int> claimed(mesh.nv(), 0);
    for (const auto& c : configs)
      for (int v : c.claims) claimed[v]++;
    for (int v = 0; v < mesh.nv(); ++v) CHECK(claimed[v] == (mesh.on_boundary[v] ? 0 : 1));
  }
}

TEST_CASE("classify: opener mixes polar, star and T1") {
  ControlNet net = netgen::opener();
  HalfEdgeMesh mesh = build_halfedge(net);
  CHECK(mesh.closed());
  CHECK(mesh.nv() == 88);
  auto cm = census_map(classify(mesh));
  CHECK(cm["polar8"] == 1);
  CHECK(cm["star5"] == 1);
  CHECK(cm["star3"] == 5);
  CHECK(cm["t1"] == 2);
  CHECK(cm["tensor"] == 71);
}

TEST_CASE("check_admissibility: clean nets give empty reports") {
  CHECK(check_admissibility(build_halfedge(parse_obj(std::string(kCubeObj)))).ok());
  CHECK(check_admissibility(build_halfedge(netgen::grid(5))).ok());
  CHECK(check_admissibility(build_halfedge(netgen::ngon_disk(7))).ok());
}

TEST_CASE("check_admissibility: unsupported star valence") {
  auto report = check_admissibility(build_halfedge(netgen::star_disk(9)));
  REQUIRE(!report.ok());
  bool mentioned = false;
  for (const auto& f : report.findings)
    if (f.message.find("star valence 9 unsupported") != std::string::npos) mentioned = true;
  CHECK(mentioned);
  CHECK_THROWS_AS(classify(build_halfedge(netgen::star_disk(9))), AdmissibilityError);
}

TEST_CASE("check_admissibility: pentagon with no admissible context") {
  // all corners 4-valent but the surround ring is on the boundary, so the
  // pentagon is neither a T1 stencil nor a legal interior n-gon
  auto report = check_admissibility(build_halfedge(netgen::ngon_disk(5, 1)));
  REQUIRE(!report.ok());
  bool mentioned = false;
  for (const auto& f : report.findings)
    if (f.message.find("does not match T1 stencil") != std::string::npos) mentioned = true;
  CHECK(mentioned);
}

TEST_CASE("classification error suggests external subdivision") {
  try {
    classify(build_halfedge(netgen::star_disk(9)));
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    CHECK(std::string(e.what()).find("Catmull-Clark") != std::string::npos);
  }
}
