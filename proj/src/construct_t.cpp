// T-junction clusters: the claimed vertices' cells are tiled by one bi-3
// spline macro-patch with doubled interior knots, one knot line per seam of
// the finer neighboring grid. Boundary spline coefficients are pinned to the
// surrounding cell curves (chain blossoms), the first interior layer satisfies
// a G1 identity with per-piece reparameterization profiles (lambda linear, mu
// quadratic), and the remaining coefficients minimize third then second
// differences of the extracted BB patches. The whole solve depends only on
// the local connectivity, so masks are cached by a canonical serialization of
// the cluster.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "construct_internal.hpp"

namespace polysurf {

namespace {

using Row = Eigen::RowVectorXd;
using Mat = Eigen::MatrixXd;
using detail::Cubic;
using detail::Linear;
using detail::Quadratic;

struct WalkPiece {
  int f_prev = -1, v = -1, w = -1, f_next = -1;
};

// Boundary pieces of the claimed region, chained f_next -> f_prev and split
// into four sides at the corner wedges (faces holding exactly one claimed
// vertex).
std::array<std::vector<WalkPiece>, 4> region_walk(const HalfEdgeMesh& mesh,
                                                  const std::set<int>& claimed) {
  std::map<int, WalkPiece> pieces;  // keyed by f_prev
  for (int v : claimed) {
    const auto ns = mesh.neighbors_ccw(v);
    const auto fs = mesh.faces_ccw(v);
    const int k = int(ns.size());
    for (int i = 0; i < k; ++i) {
      if (claimed.count(ns[i])) continue;
      WalkPiece p;
      p.v = v;
      p.w = ns[i];
      p.f_prev = fs[(i - 1 + k) % k];
      p.f_next = fs[i];
      if (!pieces.emplace(p.f_prev, p).second)
        throw MeshError("t-junction boundary walk is not a simple loop");
    }
  }
  if (pieces.empty()) throw MeshError("t-junction cluster has no boundary");
  std::vector<WalkPiece> loop;
  loop.push_back(pieces.begin()->second);
  while (true) {
    const auto it = pieces.find(loop.back().f_next);
    if (it == pieces.end()) throw MeshError("t-junction boundary walk broke");
    if (it->second.f_prev == loop.front().f_prev) break;
    loop.push_back(it->second);
    if (loop.size() > pieces.size()) throw MeshError("t-junction boundary walk cycled");
  }

  const auto claimed_in = [&](int f) {
    int c = 0;
    for (int q : mesh.face_vertices(f)) c += claimed.count(q);
    return c;
  };
  std::vector<int> corners;
  for (size_t i = 0; i < loop.size(); ++i)
    if (claimed_in(loop[i].f_prev) == 1) corners.push_back(int(i));
  if (corners.size() != 4) throw MeshError("t-junction region must have four corners");

  std::array<std::vector<WalkPiece>, 4> sides;
  for (int s = 0; s < 4; ++s) {
    const int a = corners[s];
    const int b = s < 3 ? corners[s + 1] : int(loop.size());
    for (int i = a; i < b; ++i) sides[s].push_back(loop[i]);
    const int wrap = s < 3 ? 0 : corners[0];
    for (int i = 0; i < wrap; ++i) sides[3].push_back(loop[i]);
  }
  return sides;
}

// Canonical vertex numbering: first appearance while traversing the sides,
// each piece contributing v, w, then the two wedge face cycles from v.
struct Canon {
  std::vector<int> to_mesh;            // canonical id -> mesh vertex
  std::map<int, int> to_canon;         // mesh vertex -> canonical id
  std::string key;                     // serialized structure
};

Canon canonize(const HalfEdgeMesh& mesh, const std::array<std::vector<WalkPiece>, 4>& sides) {
  Canon c;
  const auto id = [&](int v) {
    const auto it = c.to_canon.find(v);
    if (it != c.to_canon.end()) return it->second;
    const int k = int(c.to_mesh.size());
    c.to_canon[v] = k;
    c.to_mesh.push_back(v);
    return k;
  };
  const auto cycle_from = [&](int f, int v) {
    const auto& cyc = mesh.face_vertices(f);
    const int k = int(cyc.size());
    int at = 0;
    while (cyc[at] != v) ++at;
    std::vector<int> out;
    for (int i = 0; i < k; ++i) out.push_back(cyc[(at + i) % k]);
    return out;
  };
  std::ostringstream key;
  for (int s = 0; s < 4; ++s) {
    key << "S" << sides[s].size() << ":";
    for (const WalkPiece& p : sides[s]) {
      key << id(p.v) << "," << id(p.w) << ",[";
      for (int q : cycle_from(p.f_prev, p.v)) key << id(q) << " ";
      key << "][";
      for (int q : cycle_from(p.f_next, p.v)) key << id(q) << " ";
      key << "];";
    }
  }
  c.key = key.str();
  return c;
}

// Rotates the walk so the serialization is minimal over the four corner
// starts; the rotation only relabels which side is "0".
std::array<std::vector<WalkPiece>, 4> canonical_rotation(
    const HalfEdgeMesh& mesh, std::array<std::vector<WalkPiece>, 4> sides, Canon& canon) {
  std::array<std::vector<WalkPiece>, 4> best = sides;
  canon = canonize(mesh, sides);
  for (int r = 1; r < 4; ++r) {
    std::array<std::vector<WalkPiece>, 4> rot;
    for (int s = 0; s < 4; ++s) rot[s] = sides[(s + r) % 4];
    Canon cr = canonize(mesh, rot);
    if (cr.key < canon.key) {
      canon = cr;
      best = rot;
    }
  }
  return best;
}

struct SidePiece {
  Quadratic<Row> curve;   // [G(f_prev), midpoint, G(f_next)] over canonical slots
  Quadratic<Row> ribbon;  // inward cross field at the seam
  int v = -1, w = -1;     // canonical ids of the crossed mesh edge
  bool fan_forward = true;  // curve parameter runs with the inside fan
};

std::vector<SidePiece> side_data(const HalfEdgeMesh& mesh, const std::vector<WalkPiece>& side,
                                 const Canon& canon, bool reverse) {
  const int F = int(canon.to_mesh.size());
  std::vector<SidePiece> out;
  for (const WalkPiece& p : side) {
    const auto cent = [&](int f) {
      Row e = Row::Zero(F);
      const auto& cyc = mesh.face_vertices(f);
      for (int q : cyc) e[canon.to_canon.at(q)] += 1.0 / cyc.size();
      return e;
    };
    const auto unit = [&](int v) {
      Row e = Row::Zero(F);
      e[canon.to_canon.at(v)] = 1.0;
      return e;
    };
    const auto adjacent = [&](int x, int y) {
      return mesh.halfedge_from_to(x, y) >= 0 || mesh.halfedge_from_to(y, x) >= 0;
    };
    const auto par_edge = [&](int f) {
      std::vector<int> rest;
      for (int q : mesh.face_vertices(f))
        if (q != p.v && q != p.w) rest.push_back(q);
      if (rest.size() != 2) throw MeshError("t-junction flanking face must be a quad");
      int a = rest[0], b = rest[1];
      if (!(adjacent(p.w, a) && adjacent(p.v, b))) std::swap(a, b);
      if (!(adjacent(p.w, a) && adjacent(p.v, b)))
        throw MeshError("t-junction flanking quad is not aligned with the seam");
      return Row(unit(b) - unit(a));
    };
    SidePiece sp;
    const Row ed = unit(p.v) - unit(p.w);
    sp.curve = {cent(p.f_prev), 0.5 * (unit(p.v) + unit(p.w)), cent(p.f_next)};
    sp.ribbon = {0.5 * (ed + par_edge(p.f_prev)), ed, 0.5 * (ed + par_edge(p.f_next))};
    sp.v = canon.to_canon.at(p.v);
    sp.w = canon.to_canon.at(p.w);
    out.push_back(sp);
  }
  if (reverse) {
    std::reverse(out.begin(), out.end());
    for (SidePiece& sp : out) {
      std::swap(sp.curve[0], sp.curve[2]);
      std::swap(sp.ribbon[0], sp.ribbon[2]);
      sp.fan_forward = false;
    }
  }
  return out;
}

// --- cubic spline helpers on a clamped knot vector with doubled breaks ---

std::vector<double> knot_vector(std::set<double> breaks) {
  std::vector<double> t(4, 0.0);
  for (double b : breaks) {
    t.push_back(b);
    t.push_back(b);
  }
  t.insert(t.end(), 4, 1.0);
  return t;
}

std::vector<std::pair<double, double>> pieces_of(const std::vector<double>& t) {
  std::vector<std::pair<double, double>> out;
  for (size_t i = 3; i + 4 < t.size(); ++i)
    if (t[i + 1] > t[i] + 1e-12) out.emplace_back(t[i], t[i + 1]);
  return out;
}

int span_containing(const std::vector<double>& t, double lo, double hi) {
  for (size_t k = 3; k + 4 < t.size(); ++k)
    if (t[k + 1] > t[k] + 1e-12 && t[k] - 1e-9 <= lo && hi <= t[k + 1] + 1e-9) return int(k);
  throw std::logic_error("knot span not found");
}

// Weights over the spline control points for the cubic blossom at args.
Row blossom_weights(const std::vector<double>& t, std::array<double, 3> args) {
  const int ncp = int(t.size()) - 4;
  const int k = span_containing(t, *std::min_element(args.begin(), args.end()),
                                *std::max_element(args.begin(), args.end()));
  std::vector<Row> c(4);
  for (int j = 0; j < 4; ++j) c[j] = Row::Unit(ncp, k - 3 + j);
  for (int r = 1; r < 4; ++r) {
    const double xr = args[r - 1];
    std::vector<Row> nxt;
    for (int j = 0; j < 4 - r; ++j) {
      const int i = k - 3 + j + r;
      const double al = (xr - t[i]) / (t[i + 4 - r] - t[i]);
      nxt.push_back((1 - al) * c[j] + al * c[j + 1]);
    }
    c = std::move(nxt);
  }
  return c[0];
}

// 4 x ncp matrix: BB coefficients of the restriction to [k0,k1].
Mat bb_extract_weights(const std::vector<double>& t, double k0, double k1) {
  Mat w(4, int(t.size()) - 4);
  for (int m = 0; m < 4; ++m) {
    std::array<double, 3> args;
    for (int q = 0; q < 3; ++q) args[q] = q < 3 - m ? k0 : k1;
    w.row(m) = blossom_weights(t, args);
  }
  return w;
}

// value = u . X + (d0 + sum_k p_k d_k), affine in unknown slots and profiles
struct Val {
  Row u;   // over NU unknowns
  Mat d;   // (NP+1) x F
  Val() = default;
  Val(int nu, int np1, int f) : u(Row::Zero(nu)), d(Mat::Zero(np1, f)) {}
  Val operator+(const Val& o) const {
    Val r = *this;
    r.u += o.u;
    r.d += o.d;
    return r;
  }
  Val operator-(const Val& o) const {
    Val r = *this;
    r.u -= o.u;
    r.d -= o.d;
    return r;
  }
  friend Val operator*(double c, const Val& v) {
    Val r = v;
    r.u *= c;
    r.d *= c;
    return r;
  }
};

struct TMaskSeam {
  int inside = 0, outside = 0;  // canonical ids
  int patch = 0, edge = 0;
  double lo = 0, hi = 0, par_lo = 0, par_hi = 0;
};

struct TMask {
  int F = 0, n_pu = 0, n_pv = 0;
  std::vector<Mat> nets;  // 16 x F per patch, patch index pu * n_pv + pv
  std::vector<EdgeContact> contacts;
  std::vector<TMaskSeam> seams;
};

Mat min_norm(const Mat& a, const Mat& b) { return a.completeOrthogonalDecomposition().solve(b); }

Mat nullspace_abs(const Mat& a, double floor_scale) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = floor_scale < 0 ? 1e-9 : 1e-9 * std::max(1.0, s.size() ? s[0] : 0.0);
  int rank = 0;
  while (rank < s.size() && s[rank] > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

TMask solve_cluster(const HalfEdgeMesh& mesh, const std::array<std::vector<WalkPiece>, 4>& sides,
                    const Canon& canon) {
  const int F = int(canon.to_mesh.size());
  std::array<std::vector<SidePiece>, 4> sdat = {
      side_data(mesh, sides[0], canon, false), side_data(mesh, sides[1], canon, false),
      side_data(mesh, sides[2], canon, true), side_data(mesh, sides[3], canon, true)};

  const auto breaks = [](size_t n) {
    std::set<double> b;
    for (size_t i = 1; i < n; ++i) b.insert(double(i) / double(n));
    return b;
  };
  auto bu = breaks(sdat[0].size());
  for (double b : breaks(sdat[2].size())) bu.insert(b);
  auto bv = breaks(sdat[1].size());
  for (double b : breaks(sdat[3].size())) bv.insert(b);
  const std::vector<double> tu = knot_vector(bu), tv = knot_vector(bv);
  const int ncu = int(tu.size()) - 4, ncv = int(tv.size()) - 4;
  const auto pu = pieces_of(tu), pv = pieces_of(tv);

  // profile block offsets: 5 scalars per knot interval per side
  std::array<std::vector<int>, 4> poff;
  int np = 0;
  for (int s : {0, 1, 2, 3}) {
    const auto& pieces = (s == 0 || s == 2) ? pu : pv;
    for (size_t i = 0; i < pieces.size(); ++i) {
      poff[s].push_back(np);
      np += 5;
    }
  }

  // boundary pinning by chain blossom of the covering side piece
  const auto chain_blossom = [&](const std::vector<SidePiece>& sd, const std::vector<double>& t,
                                 int i) {
    const int n = int(sd.size());
    std::array<double, 3> args = {t[i + 1], t[i + 2], t[i + 3]};
    std::array<double, 3> srt = args;
    std::sort(srt.begin(), srt.end());
    const double mid = srt[1];
    int p = std::min(int(mid * n), n - 1);
    if (mid * n - p < 1e-9 && p > 0 && args[0] < double(p) / n - 1e-12) --p;
    const double a = double(p) / n, b = double(p + 1) / n;
    const Cubic<Row> cubic = detail::raise3(sd[p].curve);
    return detail::blossom3(cubic, (args[0] - a) / (b - a), (args[1] - a) / (b - a),
                            (args[2] - a) / (b - a));
  };

  std::map<std::pair<int, int>, Row> pinned;
  for (int i = 0; i < ncu; ++i) {
    pinned[{i, 0}] = chain_blossom(sdat[0], tu, i);
    pinned[{i, ncv - 1}] = chain_blossom(sdat[2], tu, i);
  }
  for (int j = 0; j < ncv; ++j) {
    pinned[{0, j}] = chain_blossom(sdat[3], tv, j);
    pinned[{ncu - 1, j}] = chain_blossom(sdat[1], tv, j);
  }

  std::map<std::pair<int, int>, int> unknown_ids;
  for (int i = 0; i < ncu; ++i)
    for (int j = 0; j < ncv; ++j)
      if (!pinned.count({i, j})) unknown_ids[{i, j}] = int(unknown_ids.size());
  const int nu = int(unknown_ids.size());

  const auto slot = [&](int i, int j) {
    Val v(nu, np + 1, F);
    const auto it = pinned.find({i, j});
    if (it != pinned.end())
      v.d.row(0) = it->second;
    else
      v.u[unknown_ids.at({i, j})] = 1.0;
    return v;
  };
  std::vector<std::vector<Val>> net(ncu, std::vector<Val>(ncv));
  for (int i = 0; i < ncu; ++i)
    for (int j = 0; j < ncv; ++j) net[i][j] = slot(i, j);

  const double du0 = 3.0 / (tu[4] - tu[1]), du1 = 3.0 / (tu[ncu] - tu[ncu - 3]);
  const double dv0 = 3.0 / (tv[4] - tv[1]), dv1 = 3.0 / (tv[ncv] - tv[ncv - 3]);

  std::vector<Val> rows;
  const auto side_rows = [&](const std::vector<SidePiece>& sd, const std::vector<int>& offs,
                             const std::vector<double>& t, const std::vector<Val>& deriv_ctrl) {
    const int n = int(sd.size());
    const auto pieces = pieces_of(t);
    for (size_t si = 0; si < pieces.size(); ++si) {
      const auto [k0, k1] = pieces[si];
      const Mat w = bb_extract_weights(t, k0, k1);
      std::array<Val, 4> lhs;
      for (int m = 0; m < 4; ++m) {
        lhs[m] = Val(nu, np + 1, F);
        for (size_t i = 0; i < deriv_ctrl.size(); ++i)
          if (w(m, int(i)) != 0.0) lhs[m] = lhs[m] + w(m, int(i)) * deriv_ctrl[i];
      }
      const double mid = 0.5 * (k0 + k1);
      const int p = std::min(int(mid * n), n - 1);
      const double a = double(p) / n, b = double(p + 1) / n;
      const double s0 = (k0 - a) / (b - a), s1 = (k1 - a) / (b - a);
      const Quadratic<Row> r = detail::seg2(sd[p].ribbon, s0, s1);
      const Row cpf0 = 2.0 * n * (sd[p].curve[1] - sd[p].curve[0]);
      const Row cpf1 = 2.0 * n * (sd[p].curve[2] - sd[p].curve[1]);
      const Linear<Row> cp = {(1 - s0) * cpf0 + s0 * cpf1, (1 - s1) * cpf0 + s1 * cpf1};
      const std::array<Cubic<Row>, 5> cubs = {
          detail::lin_times_quad(Linear<double>{1, 0}, r),
          detail::lin_times_quad(Linear<double>{0, 1}, r),
          detail::quad_times_lin(Quadratic<double>{1, 0, 0}, cp),
          detail::quad_times_lin(Quadratic<double>{0, 1, 0}, cp),
          detail::quad_times_lin(Quadratic<double>{0, 0, 1}, cp)};
      for (int m = 0; m < 4; ++m) {
        Val row = lhs[m];
        for (int q = 0; q < 5; ++q) row.d.row(1 + offs[si] + q) -= cubs[q][m];
        rows.push_back(row);
      }
    }
  };

  {
    std::vector<Val> d0, d2, d3, d1;
    for (int i = 0; i < ncu; ++i) {
      d0.push_back(dv0 * (net[i][1] - net[i][0]));
      d2.push_back(dv1 * (net[i][ncv - 2] - net[i][ncv - 1]));
    }
    for (int j = 0; j < ncv; ++j) {
      d3.push_back(du0 * (net[1][j] - net[0][j]));
      d1.push_back(du1 * (net[ncu - 2][j] - net[ncu - 1][j]));
    }
    side_rows(sdat[0], poff[0], tu, d0);
    side_rows(sdat[2], poff[2], tu, d2);
    side_rows(sdat[3], poff[3], tv, d3);
    side_rows(sdat[1], poff[1], tv, d1);
  }

  // profile fit: project the data layers onto the complement of the unknown
  // columns and solve for the 5-scalar profiles jointly
  Mat ax(rows.size(), nu);
  for (size_t i = 0; i < rows.size(); ++i) ax.row(i) = rows[i].u;
  Eigen::JacobiSVD<Mat> svd_ax(ax, Eigen::ComputeFullU);
  const auto& s_ax = svd_ax.singularValues();
  int rank_ax = 0;
  while (rank_ax < s_ax.size() && s_ax[rank_ax] > 1e-9) ++rank_ax;
  const Mat uperp = svd_ax.matrixU().rightCols(int(rows.size()) - rank_ax);
  const int q = int(uperp.cols());
  Mat layer0(rows.size(), F);
  for (size_t i = 0; i < rows.size(); ++i) layer0.row(i) = rows[i].d.row(0);
  const Mat r0 = uperp.transpose() * layer0;
  Mat amat(q * F, np);
  for (int k = 0; k < np; ++k) {
    Mat layer(rows.size(), F);
    for (size_t i = 0; i < rows.size(); ++i) layer.row(i) = rows[i].d.row(1 + k);
    const Mat proj = uperp.transpose() * layer;
    amat.col(k) = Eigen::Map<const Eigen::VectorXd>(proj.data(), proj.size());
  }
  const Eigen::VectorXd neg_r0 =
      -Eigen::Map<const Eigen::VectorXd>(r0.data(), r0.size());
  const Eigen::VectorXd profiles = amat.completeOrthogonalDecomposition().solve(neg_r0);
  const double prof_res = (amat * profiles - neg_r0).norm();
  if (prof_res > 1e-8)
    throw std::logic_error("t-junction profile fit failed, residual " +
                           std::to_string(prof_res));

  const auto with_profiles = [&](const Val& v) {
    Row d = v.d.row(0);
    for (int k = 0; k < np; ++k) d += profiles[k] * v.d.row(1 + k);
    return d;
  };

  // slot solve with two-stage fairness
  Mat b(rows.size(), F);
  for (size_t i = 0; i < rows.size(); ++i) b.row(i) = -with_profiles(rows[i]);
  Mat x = min_norm(ax, b);
  const double resid = (ax * x - b).norm();
  if (resid > 1e-8)
    throw std::logic_error("t-junction slot system infeasible, residual " +
                           std::to_string(resid));
  const Mat kmat = nullspace_abs(ax, -1.0);

  std::vector<Val> r3, r2;
  for (const auto& [a0, a1] : pu) {
    const Mat wu = bb_extract_weights(tu, a0, a1);
    for (const auto& [b0, b1] : pv) {
      const Mat wv = bb_extract_weights(tv, b0, b1);
      std::array<std::array<Val, 4>, 4> p;
      for (int m = 0; m < 4; ++m)
        for (int nn = 0; nn < 4; ++nn) {
          p[m][nn] = Val(nu, np + 1, F);
          for (int i = 0; i < ncu; ++i) {
            if (wu(m, i) == 0.0) continue;
            for (int j = 0; j < ncv; ++j)
              if (wv(nn, j) != 0.0) p[m][nn] = p[m][nn] + (wu(m, i) * wv(nn, j)) * net[i][j];
          }
        }
      for (int m = 0; m < 4; ++m) {
        r3.push_back(p[m][3] - 3 * p[m][2] + 3 * p[m][1] - p[m][0]);
        r3.push_back(p[3][m] - 3 * p[2][m] + 3 * p[1][m] - p[0][m]);
        for (int c0 = 0; c0 < 2; ++c0) {
          r2.push_back(p[m][c0 + 2] - 2 * p[m][c0 + 1] + p[m][c0]);
          r2.push_back(p[c0 + 2][m] - 2 * p[c0 + 1][m] + p[c0][m]);
        }
      }
    }
  }
  const auto pack = [&](const std::vector<Val>& rs, Mat& gu, Mat& gd) {
    gu.resize(rs.size(), nu);
    gd.resize(rs.size(), F);
    for (size_t i = 0; i < rs.size(); ++i) {
      gu.row(i) = rs[i].u;
      gd.row(i) = with_profiles(rs[i]);
    }
  };
  Mat g3u, g3d, g2u, g2d;
  pack(r3, g3u, g3d);
  pack(r2, g2u, g2d);
  if (kmat.cols() > 0) {
    const Mat a1 = g3u * kmat;
    const Mat y = min_norm(a1, Mat(-(g3u * x + g3d)));
    const Mat flat = nullspace_abs(a1, 1.0);
    Mat x1 = x + kmat * y;
    if (flat.cols() > 0) {
      const Mat a2 = g2u * kmat * flat;
      const Mat z = min_norm(a2, Mat(-(g2u * x1 + g2d)));
      x1 += kmat * flat * z;
    }
    x = x1;
  }

  // extract the BB patches
  const auto slot_weights = [&](int i, int j) {
    const Val& v = net[i][j];
    return Row(v.u * x + with_profiles(v));
  };
  std::vector<std::vector<Row>> sw(ncu, std::vector<Row>(ncv));
  for (int i = 0; i < ncu; ++i)
    for (int j = 0; j < ncv; ++j) sw[i][j] = slot_weights(i, j);

  TMask mask;
  mask.F = F;
  mask.n_pu = int(pu.size());
  mask.n_pv = int(pv.size());
  for (const auto& [a0, a1] : pu) {
    const Mat wu = bb_extract_weights(tu, a0, a1);
    for (const auto& [b0, b1] : pv) {
      const Mat wv = bb_extract_weights(tv, b0, b1);
      Mat netw = Mat::Zero(16, F);
      for (int m = 0; m < 4; ++m)
        for (int nn = 0; nn < 4; ++nn)
          for (int i = 0; i < ncu; ++i) {
            if (wu(m, i) == 0.0) continue;
            for (int j = 0; j < ncv; ++j)
              if (wv(nn, j) != 0.0) netw.row(4 * m + nn) += wu(m, i) * wv(nn, j) * sw[i][j];
          }
      for (int rr = 0; rr < 16; ++rr)
        if (std::abs(netw.row(rr).sum() - 1.0) > 1e-8)
          throw std::logic_error("t-junction mask row does not sum to one");
      mask.nets.push_back(netw);
    }
  }

  // internal contacts between grid patches
  const auto pid = [&](int a, int bidx) { return a * mask.n_pv + bidx; };
  for (int a = 0; a < mask.n_pu; ++a)
    for (int bidx = 0; bidx < mask.n_pv; ++bidx) {
      if (a + 1 < mask.n_pu) {
        EdgeContact c;
        c.patch_a = pid(a, bidx);
        c.edge_a = 1;
        c.patch_b = pid(a + 1, bidx);
        c.edge_b = 3;
        mask.contacts.push_back(c);
      }
      if (bidx + 1 < mask.n_pv) {
        EdgeContact c;
        c.patch_a = pid(a, bidx);
        c.edge_a = 2;
        c.patch_b = pid(a, bidx + 1);
        c.edge_b = 0;
        mask.contacts.push_back(c);
      }
    }

  // boundary registrations: overlap of knot intervals with side pieces
  const auto register_side = [&](int sidx, const std::vector<SidePiece>& sd,
                                 const std::vector<double>& t) {
    const int n = int(sd.size());
    const auto pieces = pieces_of(t);
    for (size_t ki = 0; ki < pieces.size(); ++ki) {
      const auto [k0, k1] = pieces[ki];
      for (int pi = 0; pi < n; ++pi) {
        const double a = double(pi) / n, b = double(pi + 1) / n;
        const double lo = std::max(k0, a), hi = std::min(k1, b);
        if (hi - lo < 1e-9) continue;
        TMaskSeam seam;
        seam.inside = sd[pi].v;
        seam.outside = sd[pi].w;
        switch (sidx) {
          case 0: seam.patch = pid(int(ki), 0), seam.edge = 0; break;
          case 1: seam.patch = pid(mask.n_pu - 1, int(ki)), seam.edge = 1; break;
          case 2: seam.patch = pid(int(ki), mask.n_pv - 1), seam.edge = 2; break;
          default: seam.patch = pid(0, int(ki)), seam.edge = 3; break;
        }
        seam.lo = (lo - k0) / (k1 - k0);
        seam.hi = (hi - k0) / (k1 - k0);
        const double x0 = (lo - a) * n, x1 = (hi - a) * n;
        seam.par_lo = sd[pi].fan_forward ? x0 : 1.0 - x0;
        seam.par_hi = sd[pi].fan_forward ? x1 : 1.0 - x1;
        mask.seams.push_back(seam);
      }
    }
  };
  register_side(0, sdat[0], tu);
  register_side(1, sdat[1], tv);
  register_side(2, sdat[2], tu);
  register_side(3, sdat[3], tv);
  return mask;
}

}  // namespace

PatchBlock emit_tjunction(const HalfEdgeMesh& mesh, const Configuration& conf) {
  const std::set<int> claimed(conf.claims.begin(), conf.claims.end());
  Canon canon;
  const auto sides = canonical_rotation(mesh, region_walk(mesh, claimed), canon);

  static std::mutex mu;
  static std::map<std::string, TMask> cache;
  const TMask* mask;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(canon.key);
    if (it == cache.end()) it = cache.emplace(canon.key, solve_cluster(mesh, sides, canon)).first;
    mask = &it->second;
  }

  {
    std::set<int> canon_set(canon.to_mesh.begin(), canon.to_mesh.end());
    std::set<int> fp_set(conf.footprint.begin(), conf.footprint.end());
    if (canon_set != fp_set)
      throw std::logic_error("t-junction footprint does not match the boundary walk");
  }

  PatchBlock block;
  block.patch_count = mask->n_pu * mask->n_pv;
  for (int p = 0; p < block.patch_count; ++p)
    for (int a = 0; a < 4; ++a)
      for (int bidx = 0; bidx < 4; ++bidx)
        for (int c = 0; c < mask->F; ++c)
          block.weight(p, a, bidx, canon.to_mesh[c], mask->nets[p](4 * a + bidx, c));
  block.contacts = mask->contacts;
  for (const TMaskSeam& s : mask->seams)
    detail::register_seam(block, canon.to_mesh[s.inside], canon.to_mesh[s.outside], s.patch,
                          s.edge, s.lo, s.hi, s.par_lo, s.par_hi);
  return block;
}

}  // namespace polysurf
