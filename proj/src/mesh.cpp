#include "polysurf/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace polysurf {

namespace {

bool is_ignored_obj_prefix(const std::string& tag) {
  return tag == "#" || tag == "vt" || tag == "vn" || tag == "g" || tag == "o" || tag == "s" ||
         tag == "usemtl" || tag == "mtllib" || tag.empty() || tag[0] == '#';
}

double parse_number(const std::string& tok, int line_no) {
  size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": malformed numeric token '" + tok +
                     "'");
  return value;
}

}  // namespace

ControlNet parse_obj(std::istream& in) {
  ControlNet net;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      std::string tx, ty, tz;
      if (!(ls >> tx >> ty >> tz))
        throw ParseError("line " + std::to_string(line_no) + ": vertex needs 3 coordinates");
      x = parse_number(tx, line_no);
      y = parse_number(ty, line_no);
      z = parse_number(tz, line_no);
      net.vertices.push_back({x, y, z});
    } else if (tag == "f") {
      std::vector<int> face;
      std::string tok;
      while (ls >> tok) {
        std::string head = tok.substr(0, tok.find('/'));
        double v = parse_number(head, line_no);
        int idx = int(v);
        if (v != idx || idx == 0)
          throw ParseError("line " + std::to_string(line_no) + ": bad face index '" + tok + "'");
        face.push_back(idx - 1);
      }
      if (face.size() < 3)
        throw ParseError("line " + std::to_string(line_no) + ": face with < 3 vertices");
      net.faces.push_back(std::move(face));
    } else if (!is_ignored_obj_prefix(tag)) {
      // unknown directives are skipped, matching common .obj tolerance
    }
  }
  if (net.faces.empty()) throw ParseError("no faces");
  for (const auto& f : net.faces) {
    std::set<int> seen;
    for (int idx : f) {
      if (idx < 0 || idx >= int(net.vertices.size()))
        throw ParseError("face index " + std::to_string(idx + 1) + " out of range");
      if (!seen.insert(idx).second)
        throw ParseError("face repeats vertex " + std::to_string(idx + 1));
    }
  }
  return net;
}

ControlNet parse_obj(const std::string& text) {
  std::istringstream in(text);
  return parse_obj(in);
}

ControlNet parse_obj_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_obj(in);
}

Vec3 HalfEdgeMesh::centroid(int f) const {
  Vec3 c = Vec3::Zero();
  for (int v : net.faces[f]) c += net.vertices[v];
  return c / double(net.faces[f].size());
}

bool HalfEdgeMesh::closed() const {
  for (const auto& h : he)
    if (h.twin < 0) return false;
  return true;
}

int HalfEdgeMesh::halfedge_from_to(int a, int b) const {
  int h0 = vertex_out[a];
  if (h0 < 0) return -1;
  int h = h0;
  do {
    if (dest(h) == b) return h;
    int p = he[h].prev;
    h = he[p].twin;
  } while (h >= 0 && h != h0);
  return -1;
}

std::vector<int> HalfEdgeMesh::neighbors_ccw(int v) const {
  std::vector<int> out;
  int h0 = vertex_out[v];
  if (h0 < 0) return out;
  int h = h0;
  while (true) {
    out.push_back(dest(h));
    int p = he[h].prev;
    if (he[p].twin < 0) {
      out.push_back(he[p].origin);  // boundary fan ends with the incoming side
      break;
    }
    h = he[p].twin;
    if (h == h0) break;
  }
  return out;
}

std::vector<int> HalfEdgeMesh::faces_ccw(int v) const {
  std::vector<int> out;
  int h0 = vertex_out[v];
  if (h0 < 0) return out;
  int h = h0;
  while (true) {
    out.push_back(he[h].face);
    int p = he[h].prev;
    if (he[p].twin < 0) break;
    h = he[p].twin;
    if (h == h0) break;
  }
  return out;
}

HalfEdgeMesh build_halfedge(const ControlNet& net) {
  HalfEdgeMesh mesh;
  mesh.net = net;
  const int nv = int(net.vertices.size());
  for (const auto& f : net.faces) {
    if (f.size() < 3) throw MeshError("face with < 3 vertices");
    for (int v : f)
      if (v < 0 || v >= nv) throw MeshError("face index out of range");
  }

  mesh.face_he.resize(net.faces.size());
  for (int f = 0; f < int(net.faces.size()); ++f) {
    const auto& corners = net.faces[f];
    const int base = int(mesh.he.size());
    const int s = int(corners.size());
    mesh.face_he[f] = base;
    for (int k = 0; k < s; ++k) {
      HalfEdgeMesh::HalfEdge h;
      h.origin = corners[k];
      h.face = f;
      h.next = base + (k + 1) % s;
      h.prev = base + (k + s - 1) % s;
      mesh.he.push_back(h);
    }
  }

  std::map<std::pair<int, int>, int> directed;
  for (int h = 0; h < int(mesh.he.size()); ++h) {
    const int a = mesh.he[h].origin, b = mesh.dest(h);
    auto [it, fresh] = directed.emplace(std::make_pair(a, b), h);
    if (!fresh) {
      if (directed.count({b, a}))
        throw MeshError("non-manifold edge " + std::to_string(a) + "-" + std::to_string(b) +
                        " (3+ incident faces)");
      throw MeshError("inconsistent orientation at edge " + std::to_string(a) + "-" +
                      std::to_string(b));
    }
  }
  for (auto& [key, h] : directed) {
    auto rev = directed.find({key.second, key.first});
    mesh.he[h].twin = (rev == directed.end()) ? -1 : rev->second;
  }

  mesh.vertex_out.assign(nv, -1);
  mesh.valence.assign(nv, 0);
  mesh.on_boundary.assign(nv, 0);
  std::vector<int> out_count(nv, 0), boundary_out(nv, 0);
  for (int h = 0; h < int(mesh.he.size()); ++h) {
    const int v = mesh.he[h].origin;
    ++out_count[v];
    if (mesh.he[h].twin < 0) {
      ++boundary_out[v];
      mesh.vertex_out[v] = h;  // CW-most outgoing edge starts the boundary fan
      mesh.on_boundary[v] = 1;
      mesh.on_boundary[mesh.dest(h)] = 1;
    } else if (mesh.vertex_out[v] < 0) {
      mesh.vertex_out[v] = h;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (out_count[v] == 0) {
      mesh.on_boundary[v] = 1;
      mesh.warnings.push_back("isolated vertex " + std::to_string(v) + " dropped");
      continue;
    }
    if (boundary_out[v] > 1)
      throw MeshError("non-manifold vertex " + std::to_string(v) + " (star is not a single fan)");
    const int fan = int(mesh.faces_ccw(v).size());
    if (fan != out_count[v])
      throw MeshError("non-manifold vertex " + std::to_string(v) + " (star is not a single fan)");
    mesh.valence[v] = mesh.on_boundary[v] ? out_count[v] + 1 : out_count[v];
  }
  return mesh;
}

std::string kind_name(ConfigKind kind, int n) {
  switch (kind) {
    case ConfigKind::Tensor: return "tensor";
    case ConfigKind::Star: return "star" + std::to_string(n);
    case ConfigKind::NGon: return "ngon" + std::to_string(n);
    case ConfigKind::Polar: return "polar" + std::to_string(n);
    case ConfigKind::T0: return "t0";
    case ConfigKind::T1: return "t1";
    case ConfigKind::T2: return "t2";
  }
  return "?";
}

namespace {

// Rotates a cyclic list so the entry at `start` comes first.
std::vector<int> rotated(const std::vector<int>& cycle, int start) {
  std::vector<int> out;
  out.reserve(cycle.size());
  for (size_t k = 0; k < cycle.size(); ++k) out.push_back(cycle[(start + k) % cycle.size()]);
  return out;
}

int index_of_min(const std::vector<int>& v) {
  return int(std::min_element(v.begin(), v.end()) - v.begin());
}

struct Analysis {
  std::vector<Configuration> configs;
  std::vector<AdmissibilityFinding> findings;

  void finding(const std::string& kind, int anchor, const std::string& message) {
    findings.push_back({kind, anchor, message});
  }
};

// The diagonal of quad f as seen from corner v: the corner two steps away.
int quad_diagonal(const HalfEdgeMesh& mesh, int f, int v) {
  const auto& c = mesh.face_vertices(f);
  for (int k = 0; k < 4; ++k)
    if (c[k] == v) return c[(k + 2) % 4];
  return -1;
}

int max_consecutive_triangles(const HalfEdgeMesh& mesh, int v) {
  std::vector<int> fan = mesh.faces_ccw(v);
  if (fan.empty()) return 0;
  std::vector<char> tri(fan.size());
  for (size_t i = 0; i < fan.size(); ++i) tri[i] = mesh.face_size(fan[i]) == 3;
  int best = 0, run = 0;
  const bool cyclic = !mesh.on_boundary[v];
  const size_t total = cyclic ? 2 * fan.size() : fan.size();
  for (size_t i = 0; i < total; ++i) {
    run = tri[i % fan.size()] ? run + 1 : 0;
    best = std::max(best, std::min(run, int(fan.size())));
  }
  return best;
}

bool footprint_touches_boundary(const HalfEdgeMesh& mesh, const std::vector<int>& nodes) {
  for (int v : nodes)
    if (mesh.on_boundary[v]) return true;
  return false;
}

void analyze(const HalfEdgeMesh& mesh, Analysis& out) {
  const int nv = mesh.nv(), nf = mesh.nf();
  std::vector<char> vertex_done(nv, 0);    // has an emitted or attempted claim
  std::vector<int> pole_of(nv, -1);        // ring vertex -> its pole
  std::vector<char> polar_face(nf, 0);

  // polar fans: triangle runs of length >= 3 are interpreted as poles
  for (int v = 0; v < nv; ++v) {
    if (mesh.on_boundary[v]) continue;
    if (max_consecutive_triangles(mesh, v) < 3) continue;
    auto fan = mesh.faces_ccw(v);
    bool all_tri = true;
    for (int f : fan) all_tri &= mesh.face_size(f) == 3;
    vertex_done[v] = 1;
    for (int f : fan)
      if (mesh.face_size(f) == 3) polar_face[f] = 1;
    if (!all_tri) {
      out.finding("polar", v,
                  "triangle fan at vertex " + std::to_string(v) +
                      " does not match the polar stencil (mixed face sizes)");
      continue;
    }
    const int m = mesh.valence[v];
    if (m > 8) {
      out.finding("polar", v,
                  "polar valence " + std::to_string(m) + " unsupported (supported m in {3,...,8})");
      continue;
    }
    auto ring = mesh.neighbors_ccw(v);
    Configuration conf;
    conf.kind = ConfigKind::Polar;
    conf.n = m;
    conf.anchor = v;
    conf.footprint.push_back(v);
    for (int r : rotated(ring, index_of_min(ring))) conf.footprint.push_back(r);
    if (footprint_touches_boundary(mesh, conf.footprint)) {
      out.finding("polar", v, "polar configuration at vertex " + std::to_string(v) +
                                  " touches the boundary");
      continue;
    }
    conf.claims = {v};
    for (int r : ring) pole_of[r] = v;
    out.configs.push_back(std::move(conf));
  }

  // collapsed ring cells around each pole
  for (int v = 0; v < nv; ++v) {
    if (pole_of[v] < 0 || vertex_done[v]) continue;
    vertex_done[v] = 1;
    const int pole = pole_of[v];
    auto fan = mesh.faces_ccw(v);
    auto nbrs = mesh.neighbors_ccw(v);
    int tris = 0;
    for (int f : fan) tris += mesh.face_size(f) == 3;
    if (mesh.on_boundary[v] || mesh.valence[v] != 4 || tris != 2 ||
        max_consecutive_triangles(mesh, v) != 2) {
      out.finding("polar", v, "polar ring vertex " + std::to_string(v) +
                                  " is not 4-valent with two consecutive triangles");
      continue;
    }
    int at_pole = -1;
    for (int k = 0; k < 4; ++k)
      if (nbrs[k] == pole) at_pole = k;
    if (at_pole < 0) continue;
    auto e = rotated(nbrs, (at_pole + 2) % 4);  // e[2] = pole
    Configuration conf;
    conf.kind = ConfigKind::Tensor;
    conf.anchor = v;
    conf.footprint = {v, e[0], e[1], e[2], e[3]};
    auto faces = rotated(fan, (at_pole + 2) % 4);
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
      const int f = faces[k];
      if (mesh.face_size(f) == 3) {
        conf.footprint.push_back(pole);
      } else if (mesh.face_size(f) == 4) {
        const int d = quad_diagonal(mesh, f, v);
        conf.footprint.push_back(d);
      } else {
        ok = false;
      }
    }
    if (!ok || conf.footprint[3] != pole) {
      out.finding("polar", v, "polar ring vertex " + std::to_string(v) +
                                  " has an irregular surrounding");
      continue;
    }
    conf.claims = {v};
    out.configs.push_back(std::move(conf));
  }

  // face-anchored configurations: n-gons and T-junctions
  for (int f = 0; f < nf; ++f) {
    const int size = mesh.face_size(f);
    if (size == 4 || (size == 3 && polar_face[f])) continue;
    const auto& corners = mesh.face_vertices(f);

    bool boundary_corner = false;
    for (int v : corners) boundary_corner |= mesh.on_boundary[v];
    std::vector<int> val(size);
    for (int k = 0; k < size; ++k) val[k] = mesh.valence[corners[k]];

    auto fail = [&](const std::string& message) {
      out.finding("face", f, message);
      for (int v : corners) vertex_done[v] = 1;
    };
    auto signature = [&]() {
      std::string s = "(";
      for (int k = 0; k < size; ++k) s += (k ? "," : "") + std::to_string(val[k]);
      return s + ")";
    };

    // canonical corner: T0 starts at the 5-valent corner, T1 at the 3-valent
    // one, T2 at the 4-valent corner between the two 3-valent ones
    int t_start = -1;
    ConfigKind t_kind = ConfigKind::T0;
    if (size == 3 && !boundary_corner && std::count(val.begin(), val.end(), 4) == 2 &&
        std::count(val.begin(), val.end(), 5) == 1) {
      t_kind = ConfigKind::T0;
      t_start = int(std::find(val.begin(), val.end(), 5) - val.begin());
    } else if (size == 5 && !boundary_corner && std::count(val.begin(), val.end(), 4) == 4 &&
               std::count(val.begin(), val.end(), 3) == 1) {
      t_kind = ConfigKind::T1;
      t_start = int(std::find(val.begin(), val.end(), 3) - val.begin());
    } else if (size == 6 && !boundary_corner && std::count(val.begin(), val.end(), 4) == 4 &&
               std::count(val.begin(), val.end(), 3) == 2) {
      for (int k = 0; k < 6; ++k)
        if (val[k] == 4 && val[(k + 5) % 6] == 3 && val[(k + 1) % 6] == 3) t_start = k;
      t_kind = ConfigKind::T2;
    }

    if (t_start >= 0) {
      Configuration conf;
      conf.kind = t_kind;
      conf.anchor = f;
      conf.anchor_is_face = true;
      conf.footprint = rotated(corners, t_start);
      conf.claims = conf.footprint;
      std::set<int> extra;
      bool quads_ok = true;
      for (int v : corners)
        for (int g : mesh.faces_ccw(v)) {
          if (g != f && mesh.face_size(g) != 4) quads_ok = false;
          for (int w : mesh.face_vertices(g)) extra.insert(w);
        }
      for (int v : corners) extra.erase(v);
      conf.footprint.insert(conf.footprint.end(), extra.begin(), extra.end());
      if (!quads_ok) {
        fail(kind_name(t_kind, 0) + " face " + std::to_string(f) +
             " is not surrounded by quads only");
        continue;
      }
      if (footprint_touches_boundary(mesh, conf.footprint)) {
        fail(kind_name(t_kind, 0) + " face " + std::to_string(f) + " touches the boundary");
        continue;
      }
      for (int v : corners) vertex_done[v] = 1;
      out.configs.push_back(std::move(conf));
      continue;
    }

    // n-gon interpretation: interior corners, all 4-valent, 2n surrounding quads
    std::string why;
    if (size > 8) {
      why = "faces with more than 8 sides are unsupported";
    } else if (boundary_corner) {
      why = "a corner lies on the boundary";
    } else if (std::count(val.begin(), val.end(), 4) != size) {
      why = "corner valences " + signature() + " fit no stencil";
    }
    Configuration conf;
    if (why.empty()) {
      conf.kind = ConfigKind::NGon;
      conf.n = size;
      conf.anchor = f;
      conf.anchor_is_face = true;
      auto cycle = rotated(corners, index_of_min(corners));
      std::vector<int> sp(size), sm(size), d(size);
      for (int i = 0; i < size && why.empty(); ++i) {
        const int vi = cycle[i], vprev = cycle[(i + size - 1) % size],
                  vnext = cycle[(i + 1) % size];
        int cq = -1;
        for (int g : mesh.faces_ccw(vi)) {
          const auto& gv = mesh.face_vertices(g);
          if (g == f || mesh.face_size(g) != 4) continue;
          if (std::find(gv.begin(), gv.end(), vprev) == gv.end() &&
              std::find(gv.begin(), gv.end(), vnext) == gv.end())
            cq = g;
        }
        if (cq < 0) {
          why = "corner " + std::to_string(vi) + " has no corner quad";
          break;
        }
        d[i] = quad_diagonal(mesh, cq, vi);
        for (int w : mesh.face_vertices(cq)) {
          if (w == vi || w == d[i]) continue;
          const int eq = [&] {  // the edge quad this wing vertex shares with vi
            for (int g : mesh.faces_ccw(vi)) {
              const auto& gv = mesh.face_vertices(g);
              if (g != f && g != cq && std::find(gv.begin(), gv.end(), w) != gv.end()) return g;
            }
            return -1;
          }();
          if (eq < 0 || mesh.face_size(eq) != 4) {
            why = "corner " + std::to_string(vi) + " has no matching edge quad";
            break;
          }
          const auto& ev = mesh.face_vertices(eq);
          if (std::find(ev.begin(), ev.end(), vnext) != ev.end())
            sp[i] = w;
          else if (std::find(ev.begin(), ev.end(), vprev) != ev.end())
            sm[i] = w;
          else
            why = "corner " + std::to_string(vi) + " has a stray wing vertex";
        }
      }
      if (why.empty()) {
        conf.footprint = cycle;
        conf.footprint.insert(conf.footprint.end(), sp.begin(), sp.end());
        conf.footprint.insert(conf.footprint.end(), sm.begin(), sm.end());
        conf.footprint.insert(conf.footprint.end(), d.begin(), d.end());
        if (footprint_touches_boundary(mesh, conf.footprint))
          why = "the surrounding quads touch the boundary";
      }
    }
    if (!why.empty()) {
      std::string noun = size == 3   ? "triangle"
                         : size == 5 ? "pentagon"
                         : size == 6 ? "hexagon"
                                     : std::to_string(size) + "-gon";
      std::string stencil = size == 3 ? "T0" : size == 6 ? "T2" : "T1";
      fail(noun + " " + std::to_string(f) + " does not match " + stencil +
           " stencil and no n-gon applies: " + why);
      continue;
    }
    conf.claims = std::vector<int>(conf.footprint.begin(), conf.footprint.begin() + size);
    for (int v : conf.claims) vertex_done[v] = 1;
    out.configs.push_back(std::move(conf));
  }

  // remaining interior vertices: tensor or star
  for (int v = 0; v < nv; ++v) {
    if (mesh.on_boundary[v] || vertex_done[v]) continue;
    auto fan = mesh.faces_ccw(v);
    bool all_quads = true;
    for (int f : fan) all_quads &= mesh.face_size(f) == 4;
    if (!all_quads) continue;  // claimed (or reported) via the face loop
    const int n = mesh.valence[v];
    if (n != 4 && (n < 3 || n > 8)) {
      out.finding("star", v,
                  "star valence " + std::to_string(n) + " unsupported (supported n in {3,5,...,8})");
      continue;
    }
    auto nbrs = mesh.neighbors_ccw(v);
    const int start = index_of_min(nbrs);
    auto s = rotated(nbrs, start);
    auto faces = rotated(fan, start);
    Configuration conf;
    conf.kind = (n == 4) ? ConfigKind::Tensor : ConfigKind::Star;
    conf.n = (n == 4) ? 0 : n;
    conf.anchor = v;
    conf.footprint.push_back(v);
    conf.footprint.insert(conf.footprint.end(), s.begin(), s.end());
    for (int k = 0; k < n; ++k) conf.footprint.push_back(quad_diagonal(mesh, faces[k], v));
    if (n != 4 && footprint_touches_boundary(mesh, conf.footprint)) {
      out.finding("star", v,
                  "star configuration at vertex " + std::to_string(v) + " touches the boundary");
      continue;
    }
    conf.claims = {v};
    out.configs.push_back(std::move(conf));
  }

  std::sort(out.configs.begin(), out.configs.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.anchor_is_face, a.anchor) < std::make_pair(b.anchor_is_face, b.anchor);
  });

  if (!out.findings.empty()) return;
  std::vector<int> claimed(nv, 0);
  for (const auto& c : out.configs)
    for (int v : c.claims) ++claimed[v];
  for (int v = 0; v < nv; ++v) {
    const int want = mesh.on_boundary[v] ? 0 : 1;
    if (claimed[v] != want)
      out.finding("coverage", v,
                  "vertex " + std::to_string(v) + " claimed by " + std::to_string(claimed[v]) +
                      " configurations (expected " + std::to_string(want) + ")");
  }
}

}  // namespace

std::vector<Configuration> classify(const HalfEdgeMesh& mesh) {
  Analysis a;
  analyze(mesh, a);
  if (!a.findings.empty()) {
    std::string msg = "net not admissible:";
    for (const auto& f : a.findings) msg += "\n  " + f.message;
    msg += "\napply one Catmull-Clark step externally and rebuild";
    throw AdmissibilityError(msg);
  }
  return std::move(a.configs);
}

AdmissibilityReport check_admissibility(const HalfEdgeMesh& mesh) {
  Analysis a;
  analyze(mesh, a);
  AdmissibilityReport report;
  report.findings = std::move(a.findings);
  return report;
}

std::string AdmissibilityReport::text() const {
  std::string out;
  for (const auto& f : findings)
    out += f.kind + " at " + std::to_string(f.anchor) + ": " + f.message + "\n";
  return out;
}

std::string AdmissibilityReport::json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : findings)
    arr.push_back({{"kind", f.kind}, {"anchor", f.anchor}, {"message", f.message}});
  return nlohmann::json{{"findings", arr}, {"admissible", findings.empty()}}.dump(2);
}

std::string census_text(const std::vector<Configuration>& configs) {
  std::map<std::string, int> counts;
  for (const auto& c : configs) counts[kind_name(c.kind, c.n)]++;
  std::string out;
  for (const auto& [name, count] : counts) {
    if (!out.empty()) out += "\n";
    out += name + ": " + std::to_string(count);
  }
  return out;
}

}  // namespace polysurf
