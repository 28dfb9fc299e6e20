#include "polysurf/basis.hpp"

#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

namespace polysurf {

namespace {

constexpr double kCoeffEps = 1e-12;

// BB indices lying on a patch edge, row-major over (i,j) with i along u
std::array<int, 4> edge_indices(int e) {
  switch (e) {
    case 0: return {0, 4, 8, 12};
    case 1: return {12, 13, 14, 15};
    case 2: return {3, 7, 11, 15};
    default: return {0, 1, 2, 3};
  }
}

}  // namespace

BasisFunction basis_function(const ControlToBBMap& map, int vertex) {
  if (vertex < 0 || vertex >= map.weights.cols())
    throw std::out_of_range("basis_function: vertex out of range");
  BasisFunction b;
  b.vertex = vertex;
  std::map<int, std::array<double, 16>> blocks;
  for (Eigen::SparseMatrix<double>::InnerIterator it(map.weights, vertex); it; ++it) {
    if (it.value() == 0.0) continue;
    const int p = int(it.row()) / 16;
    auto ins = blocks.try_emplace(p);
    if (ins.second) ins.first->second.fill(0.0);
    ins.first->second[int(it.row()) % 16] = it.value();
  }
  b.support.assign(blocks.begin(), blocks.end());
  return b;
}

std::vector<std::vector<int>> overlap_graph(const ControlToBBMap& map) {
  const int nv = int(map.weights.cols());
  const int np = map.patch_count();
  std::vector<std::vector<int>> on_patch(np);
  for (int v = 0; v < nv; ++v) {
    std::set<int> touched;
    for (Eigen::SparseMatrix<double>::InnerIterator it(map.weights, v); it; ++it)
      if (it.value() != 0.0) touched.insert(int(it.row()) / 16);
    for (int p : touched) on_patch[p].push_back(v);
  }
  std::vector<std::set<int>> adj(nv);
  for (const auto& verts : on_patch)
    for (int a : verts)
      for (int b : verts) adj[a].insert(b);
  std::vector<std::vector<int>> out(nv);
  for (int v = 0; v < nv; ++v) out[v].assign(adj[v].begin(), adj[v].end());
  return out;
}

std::string DofMap::text() const {
  std::string out;
  char buf[64];
  for (size_t v = 0; v < free_index.size(); ++v) {
    std::snprintf(buf, sizeof(buf), "dof %zu %s %.17g\n", v, free_index[v] >= 0 ? "free" : "fixed",
                  free_index[v] >= 0 ? 0.0 : fixed_value[int(v)]);
    out += buf;
  }
  return out;
}

DofMap apply_dirichlet(const HalfEdgeMesh& mesh, const ControlToBBMap& map,
                       const SplineComplex& complex, const BoundarySpec& spec) {
  const int nv = int(map.weights.cols());
  if (nv != mesh.nv()) throw std::invalid_argument("apply_dirichlet: map does not match mesh");
  for (const auto& [v, val] : spec.pinned) {
    (void)val;
    if (v < 0 || v >= nv) throw std::out_of_range("apply_dirichlet: pinned vertex out of range");
  }

  // a patch edge is on the domain boundary iff the contacts do not cover it
  const int np = complex.patch_count();
  std::vector<std::array<std::vector<std::pair<double, double>>, 4>> cover(np);
  for (const EdgeContact& c : complex.contacts) {
    cover[c.patch_a][c.edge_a].push_back({c.a_lo, c.a_hi});
    cover[c.patch_b][c.edge_b].push_back({c.b_lo, c.b_hi});
  }
  std::vector<std::array<bool, 4>> boundary_edge(np);
  for (int p = 0; p < np; ++p)
    for (int e = 0; e < 4; ++e) {
      auto spans = cover[p][e];
      std::sort(spans.begin(), spans.end());
      double covered = 0.0, at = 0.0;
      for (const auto& [lo, hi] : spans) {
        const double a = std::max(at, lo);
        if (hi > a) covered += hi - a, at = hi;
      }
      boundary_edge[p][e] = covered < 1.0 - 1e-9;
    }

  DofMap dofs;
  dofs.free_index.assign(nv, -1);
  dofs.fixed_value = Eigen::VectorXd::Zero(nv);
  for (int v = 0; v < nv; ++v) {
    bool constrained = true;  // empty support
    for (Eigen::SparseMatrix<double>::InnerIterator it(map.weights, v); it; ++it) {
      if (std::abs(it.value()) <= kCoeffEps) continue;
      constrained = false;
      break;
    }
    if (!constrained) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(map.weights, v); it && !constrained;
           ++it) {
        if (std::abs(it.value()) <= kCoeffEps) continue;
        const int p = int(it.row()) / 16, k = int(it.row()) % 16;
        for (int e = 0; e < 4 && !constrained; ++e) {
          if (!boundary_edge[p][e]) continue;
          const auto idx = edge_indices(e);
          if (std::count(idx.begin(), idx.end(), k)) constrained = true;
        }
      }
    }
    if (constrained) dofs.fixed_value[v] = spec.boundary_value;
    dofs.free_index[v] = constrained ? -1 : 0;
  }
  for (const auto& [v, val] : spec.pinned) {
    dofs.free_index[v] = -1;
    dofs.fixed_value[v] = val;
  }
  for (int v = 0; v < nv; ++v)
    if (dofs.free_index[v] >= 0) dofs.free_index[v] = dofs.free_count++;
  return dofs;
}

}  // namespace polysurf
