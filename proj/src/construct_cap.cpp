// Cap builders for star (irregular vertex) and n-gon (non-quad face)
// configurations. Each cap tiles the anchor's cells with n sectors meeting at
// a shared center. Sector boundaries against the surrounding regular layer are
// pinned so the join is parametric C1; the radial sector-to-sector joins
// satisfy a G1 identity with a closed-form transition profile. Remaining free
// coefficients are fixed by a two-stage difference-minimizing solve, yielding
// one cached linear mask per (kind, n).

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "construct_internal.hpp"

namespace polysurf {

namespace {

using detail::Cubic;
using detail::Linear;
using detail::Quadratic;
using Row = Eigen::RowVectorXd;  // [unknown slots (nx) | footprint data (F)]

using SlotKey = std::array<int, 3>;  // sector, row a (along u), col b (along v)

struct CapSystem {
  int n = 0, F = 0, nx = 0, sz = 4;
  std::map<SlotKey, std::vector<Row>> defs;
  std::vector<Row> rows;  // constraint rows, == 0 required
  double beta = 0;
};

struct SectorSides {
  Quadratic<Row> Qu, Du, Qv, Dv;  // pinned u=1 / v=1 curves and cross fields
};

int mod(int i, int n) { return ((i % n) + n) % n; }

// Sector data for a star cap: v0 with neighbors s_i and face diagonals d_i;
// sector i covers the quarter of face f_i at v0, corners
// (0,0)=center, (1,0)=midpoint(v0,s_i), (0,1)=midpoint(v0,s_{i+1}), (1,1)=G(f_i).
std::vector<SectorSides> star_sectors(int n, int nx, int& F) {
  F = 2 * n + 1;
  const auto slot = [&](int k) {
    Row r = Row::Zero(nx + F);
    r[nx + k] = 1;
    return r;
  };
  const auto s = [&](int i) { return slot(1 + mod(i, n)); };
  const auto d = [&](int i) { return slot(1 + n + mod(i, n)); };
  const Row v0 = slot(0);

  struct Side {
    Quadratic<Row> Q, D;
  };
  std::vector<Side> sides;
  for (int i = 0; i < n; ++i) {
    const Row A = (v0 + s(i - 1) + d(i - 1) + s(i)) / 4;
    const Row M = (v0 + s(i)) / 2;
    const Row B = (v0 + s(i) + d(i) + s(i + 1)) / 4;
    sides.push_back({{A, M, B},
                     {(d(i - 1) - s(i - 1) + s(i) - v0) / 2, s(i) - v0,
                      (s(i) - v0 + d(i) - s(i + 1)) / 2}});
  }
  std::vector<SectorSides> out(n);
  for (int i = 0; i < n; ++i) {
    const Side& si = sides[i];
    const Side& s1 = sides[mod(i + 1, n)];
    out[i].Qu = detail::split_right(si.Q);
    out[i].Du = detail::split_right(si.D);
    Quadratic<Row> qv = detail::split_left(s1.Q);
    Quadratic<Row> dv = detail::split_left(s1.D);
    out[i].Qv = {qv[2], qv[1], qv[0]};
    out[i].Dv = {dv[2], dv[1], dv[0]};
  }
  return out;
}

// Sector data for an n-gon cap: corners v_i, wing neighbors sp_i/sm_i, corner
// quad diagonals d_i. Sector i is corner v_i's cell; (0,0) sits at the n-gon
// face centroid, u=1 runs toward the sm_i side, v=1 toward the sp_i side.
std::vector<SectorSides> ngon_sectors(int n, int nx, int& F) {
  F = 4 * n;
  const auto slot = [&](int k) {
    Row r = Row::Zero(nx + F);
    r[nx + k] = 1;
    return r;
  };
  const auto v = [&](int i) { return slot(mod(i, n)); };
  const auto sp = [&](int i) { return slot(n + mod(i, n)); };
  const auto sm = [&](int i) { return slot(2 * n + mod(i, n)); };
  const auto d = [&](int i) { return slot(3 * n + mod(i, n)); };
  const auto Geq = [&](int i) { return Row((v(i) + v(i + 1) + sp(i) + sm(i + 1)) / 4); };
  const auto Gcq = [&](int i) { return Row((v(i) + sp(i) + d(i) + sm(i)) / 4); };

  std::vector<SectorSides> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].Qu = {Geq(i - 1), (v(i) + sm(i)) / 2, Gcq(i)};
    out[i].Du = {(sp(i - 1) - v(i - 1) + sm(i) - v(i)) / 2, sm(i) - v(i),
                 (sm(i) - v(i) + d(i) - sp(i)) / 2};
    out[i].Qv = {Geq(i), (v(i) + sp(i)) / 2, Gcq(i)};
    out[i].Dv = {(sm(i + 1) - v(i + 1) + sp(i) - v(i)) / 2, sp(i) - v(i),
                 (sp(i) - v(i) + d(i) - sm(i)) / 2};
  }
  return out;
}

// Transition profiles along the pinned sides: dP/dn = a(t) D(t) + b(t) C'(t)
// with a linear, b quadratic. Closed form per cap type.
struct Profiles {
  Linear<double> a;
  Quadratic<double> b;
};

Profiles cap_profiles(int n, bool star) {
  const double c = std::cos(2 * M_PI / n);
  Profiles p;
  p.a = {star ? 1.0 / (2 * (1 - c)) : 1.0 / (1 - c), star ? 0.5 : 1.0};
  p.b = {0.0, c / (2 * (1 - c)), 0.0};
  return p;
}

void record(CapSystem& sys, int i, int a, int b, const Row& val) {
  sys.defs[{i, a, b}].push_back(val);
}

const Row& slot(const CapSystem& sys, int i, int a, int b) {
  return sys.defs.at({mod(i, sys.n), a, b}).front();
}

// 4x4 BB sectors: unknowns are the center, the first radial coefficient per
// side, and one twist per sector.
void build_unsplit(CapSystem& sys, const std::vector<SectorSides>& data, const Profiles& prof) {
  const int n = sys.n;
  sys.sz = 4;
  sys.nx = 1 + 2 * n;
  const auto unknown = [&](int idx) {
    Row r = Row::Zero(sys.nx + sys.F);
    r[idx] = 1;
    return r;
  };
  const Row C = unknown(0);
  const auto r1 = [&](int i) { return unknown(1 + mod(i, n)); };
  const auto tw = [&](int i) { return unknown(1 + n + mod(i, n)); };

  for (int i = 0; i < n; ++i) {
    const SectorSides& d = data[i];
    const Linear<Row> Lu = {2 * (d.Qu[1] - d.Qu[0]), 2 * (d.Qu[2] - d.Qu[1])};
    const Linear<Row> Lv = {2 * (d.Qv[1] - d.Qv[0]), 2 * (d.Qv[2] - d.Qv[1])};
    const Cubic<Row> r3u = detail::raise3(d.Qu);
    const Cubic<Row> r3v = detail::raise3(d.Qv);
    const Cubic<Row> cross_u = detail::lin_times_quad(prof.a, d.Du);
    const Cubic<Row> tang_u = detail::quad_times_lin(prof.b, Lu);
    const Cubic<Row> cross_v = detail::lin_times_quad(prof.a, d.Dv);
    const Cubic<Row> tang_v = detail::quad_times_lin(prof.b, Lv);
    for (int j = 0; j < 4; ++j) {
      record(sys, i, 3, j, r3u[j]);
      record(sys, i, j, 3, r3v[j]);
    }
    for (int j = 0; j < 4; ++j) {
      record(sys, i, 2, j, r3u[j] - (cross_u[j] + tang_u[j]) / 3);
      record(sys, i, j, 2, r3v[j] - (cross_v[j] + tang_v[j]) / 3);
    }
    record(sys, i, 0, 0, C);
    record(sys, i, 1, 0, r1(i));
    record(sys, i, 0, 1, r1(i + 1));
    record(sys, i, 1, 1, tw(i));
  }

  for (const auto& kv : sys.defs)
    for (size_t k = 1; k < kv.second.size(); ++k) sys.rows.push_back(kv.second[0] - kv.second[k]);
  for (int i = 0; i < n; ++i)
    for (int a = 2; a < 4; ++a) sys.rows.push_back(slot(sys, i, a, 0) - slot(sys, i - 1, 0, a));
  // Radial G1: dv P_i(t,0) + du P_{i-1}(0,t) = beta (1-t) r_i'(t).
  for (int i = 0; i < n; ++i) {
    Cubic<Row> mix;
    Quadratic<Row> rp;
    for (int a = 0; a < 4; ++a)
      mix[a] = 3 * (slot(sys, i, a, 1) - slot(sys, i, a, 0)) +
               3 * (slot(sys, i - 1, 1, a) - slot(sys, i - 1, 0, a));
    for (int a = 0; a < 3; ++a)
      rp[a] = 3 * (slot(sys, i, a + 1, 0) - slot(sys, i, a, 0));
    const Cubic<Row> rr = detail::quad_times_lin(rp, Linear<double>{sys.beta, 0.0});
    for (int j = 0; j < 4; ++j) sys.rows.push_back(mix[j] - rr[j]);
  }
}

// 6x6 double-knot spline sectors (four BB patches each): unknowns are the
// center, three radial spline coefficients per side, and the 3x3 interior.
void build_split(CapSystem& sys, const std::vector<SectorSides>& data, const Profiles& prof) {
  const int n = sys.n;
  sys.sz = 6;
  sys.nx = 1 + 3 * n + 9 * n;
  const auto unknown = [&](int idx) {
    Row r = Row::Zero(sys.nx + sys.F);
    r[idx] = 1;
    return r;
  };
  const Row C = unknown(0);
  const auto rho = [&](int i, int k) { return unknown(1 + 3 * mod(i, n) + (k - 1)); };
  const auto interior = [&](int i, int a, int b) {
    return unknown(1 + 3 * n + 9 * mod(i, n) + 3 * (a - 1) + (b - 1));
  };

  for (int i = 0; i < n; ++i) {
    const SectorSides& d = data[i];
    const Linear<Row> Lu = {2 * (d.Qu[1] - d.Qu[0]), 2 * (d.Qu[2] - d.Qu[1])};
    const Linear<Row> Lv = {2 * (d.Qv[1] - d.Qv[0]), 2 * (d.Qv[2] - d.Qv[1])};
    const auto cu = detail::spline_of_cubic(detail::raise3(d.Qu));
    const auto cv = detail::spline_of_cubic(detail::raise3(d.Qv));
    Cubic<Row> rhs_u = detail::lin_times_quad(prof.a, d.Du);
    Cubic<Row> rhs_v = detail::lin_times_quad(prof.a, d.Dv);
    const Cubic<Row> tang_u = detail::quad_times_lin(prof.b, Lu);
    const Cubic<Row> tang_v = detail::quad_times_lin(prof.b, Lv);
    for (int j = 0; j < 4; ++j) {
      rhs_u[j] = rhs_u[j] + tang_u[j];
      rhs_v[j] = rhs_v[j] + tang_v[j];
    }
    const auto su = detail::spline_of_cubic(rhs_u);
    const auto sv = detail::spline_of_cubic(rhs_v);
    for (int b = 0; b < 6; ++b) record(sys, i, 5, b, cu[b]);
    for (int a = 0; a < 6; ++a) record(sys, i, a, 5, cv[a]);
    for (int b = 0; b < 6; ++b) record(sys, i, 4, b, cu[b] - su[b] / 6);
    for (int a = 0; a < 6; ++a) record(sys, i, a, 4, cv[a] - sv[a] / 6);
    record(sys, i, 0, 0, C);
    for (int k = 1; k <= 3; ++k) {
      record(sys, i, k, 0, rho(i, k));
      record(sys, i, 0, k, rho(i + 1, k));
    }
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) record(sys, i, a, b, interior(i, a, b));
  }

  for (const auto& kv : sys.defs)
    for (size_t k = 1; k < kv.second.size(); ++k) sys.rows.push_back(kv.second[0] - kv.second[k]);
  for (int i = 0; i < n; ++i)
    for (int a = 4; a < 6; ++a) sys.rows.push_back(slot(sys, i, a, 0) - slot(sys, i - 1, 0, a));
  // Radial G1 on both halves: the transition b(t) = beta (1-t) splits into
  // [beta, beta/2] and [beta/2, 0].
  for (int i = 0; i < n; ++i) {
    std::array<Row, 6> mix, r;
    for (int a = 0; a < 6; ++a) {
      mix[a] = 6 * (slot(sys, i, a, 1) - slot(sys, i, a, 0)) +
               6 * (slot(sys, i - 1, 1, a) - slot(sys, i - 1, 0, a));
      r[a] = slot(sys, i, a, 0);
    }
    const auto [m1, m2] = detail::spline_to_bb(mix);
    const Row rm = 0.5 * (r[2] + r[3]);
    const Quadratic<Row> rp1 = {6 * (r[1] - r[0]), 6 * (r[2] - r[1]), 6 * (rm - r[2])};
    const Quadratic<Row> rp2 = {6 * (r[3] - rm), 6 * (r[4] - r[3]), 6 * (r[5] - r[4])};
    const Cubic<Row> rr1 = detail::quad_times_lin(rp1, Linear<double>{sys.beta, sys.beta / 2});
    const Cubic<Row> rr2 = detail::quad_times_lin(rp2, Linear<double>{sys.beta / 2, 0.0});
    for (int j = 0; j < 4; ++j) {
      sys.rows.push_back(m1[j] - rr1[j]);
      sys.rows.push_back(m2[j] - rr2[j]);
    }
  }
}

// The four 4x4 BB nets of one 6x6 double-knot sector, order (ha, hb).
std::array<std::array<std::array<Row, 4>, 4>, 4> split_sector_bb(
    const std::array<std::array<Row, 6>, 6>& net) {
  std::array<std::array<std::array<Row, 4>, 4>, 4> out;
  for (int ha = 0; ha < 2; ++ha)
    for (int hb = 0; hb < 2; ++hb) {
      std::array<std::array<Row, 6>, 4> tmp;
      for (int b = 0; b < 6; ++b) {
        std::array<Row, 6> col;
        for (int a = 0; a < 6; ++a) col[a] = net[a][b];
        const auto [lo, hi] = detail::spline_to_bb(col);
        for (int a = 0; a < 4; ++a) tmp[a][b] = (ha == 0 ? lo : hi)[a];
      }
      for (int a = 0; a < 4; ++a) {
        const auto [lo, hi] = detail::spline_to_bb(tmp[a]);
        for (int b = 0; b < 4; ++b) out[2 * ha + hb][a][b] = (hb == 0 ? lo : hi)[b];
      }
    }
  return out;
}

Eigen::MatrixXd stack(const std::vector<Row>& rows) {
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i];
  return m;
}

Eigen::MatrixXd min_norm_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.completeOrthogonalDecomposition().solve(b);
}

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& a, double tol_floor) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = 1e-9 * std::max(s.size() ? s[0] : 0.0, tol_floor);
  int rank = 0;
  while (rank < s.size() && s[rank] > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

// Solve the constraint system, then spend the kernel on fairness: minimize
// third differences of the BB nets, then second differences on whatever
// directions the first stage left free.
Eigen::MatrixXd solve_slots(const CapSystem& sys, const std::vector<Row>& fair3,
                            const std::vector<Row>& fair2) {
  const int nx = sys.nx, F = sys.F;
  const Eigen::MatrixXd m = stack(sys.rows);
  const Eigen::MatrixXd a = m.leftCols(nx);
  const Eigen::MatrixXd r = -m.rightCols(F);
  Eigen::MatrixXd x = min_norm_solve(a, r);
  const double feas = (a * x - r).norm();
  if (feas > 1e-8)
    throw std::logic_error("cap constraint system infeasible, residual " + std::to_string(feas));

  const Eigen::MatrixXd k = nullspace(a, 0.0);
  if (k.cols() == 0) return x;
  const Eigen::MatrixXd f3 = stack(fair3);
  const Eigen::MatrixXd g3u = f3.leftCols(nx), g3d = f3.rightCols(F);
  const Eigen::MatrixXd gk = g3u * k;
  Eigen::MatrixXd y = min_norm_solve(gk, -(g3u * x + g3d));
  const Eigen::MatrixXd n2 = nullspace(gk, 1.0);
  if (n2.cols() > 0) {
    const Eigen::MatrixXd f2 = stack(fair2);
    const Eigen::MatrixXd g2u = f2.leftCols(nx), g2d = f2.rightCols(F);
    const Eigen::MatrixXd kn = k * n2;
    const Eigen::MatrixXd x1 = x + k * y;
    y += n2 * min_norm_solve(g2u * kn, -(g2u * x1 + g2d));
  }
  return x + k * y;
}

// Third/second difference rows of every 4x4 BB net the cap produces.
void fairness_rows(const CapSystem& sys, std::vector<Row>& fair3, std::vector<Row>& fair2) {
  const auto push_bb = [&](const std::array<std::array<Row, 4>, 4>& p) {
    for (int j = 0; j < 4; ++j) {
      fair3.push_back(p[3][j] - 3 * p[2][j] + 3 * p[1][j] - p[0][j]);
      fair3.push_back(p[j][3] - 3 * p[j][2] + 3 * p[j][1] - p[j][0]);
      for (int a = 0; a < 2; ++a) {
        fair2.push_back(p[a + 2][j] - 2 * p[a + 1][j] + p[a][j]);
        fair2.push_back(p[j][a + 2] - 2 * p[j][a + 1] + p[j][a]);
      }
    }
  };
  for (int i = 0; i < sys.n; ++i) {
    if (sys.sz == 4) {
      std::array<std::array<Row, 4>, 4> net;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) net[a][b] = slot(sys, i, a, b);
      push_bb(net);
    } else {
      std::array<std::array<Row, 6>, 6> net;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) net[a][b] = slot(sys, i, a, b);
      for (const auto& p : split_sector_bb(net)) push_bb(p);
    }
  }
}

// Final result of one cap solve: per-patch 16xF weight nets.
struct CapMask {
  int n = 0, F = 0;
  bool split = false;
  std::vector<Eigen::MatrixXd> nets;  // 16 x F per patch, row 4a+b
};

CapMask solve_cap(bool star, int n) {
  CapSystem sys;
  sys.n = n;
  sys.beta = 2 * std::cos(2 * M_PI / n);
  const bool split = n >= 6;
  const Profiles prof = cap_profiles(n, star);

  // Probe nx first: sector data rows need nx+F, so size them for the variant.
  sys.nx = split ? 1 + 12 * n : 1 + 2 * n;
  std::vector<SectorSides> data =
      star ? star_sectors(n, sys.nx, sys.F) : ngon_sectors(n, sys.nx, sys.F);
  if (split)
    build_split(sys, data, prof);
  else
    build_unsplit(sys, data, prof);

  std::vector<Row> fair3, fair2;
  fairness_rows(sys, fair3, fair2);
  const Eigen::MatrixXd x = solve_slots(sys, fair3, fair2);

  const auto weights = [&](int i, int a, int b) {
    const Row& s = slot(sys, i, a, b);
    return Row(s.head(sys.nx) * x + s.tail(sys.F));
  };

  CapMask mask;
  mask.n = n;
  mask.F = sys.F;
  mask.split = split;
  for (int i = 0; i < n; ++i) {
    if (!split) {
      Eigen::MatrixXd net(16, sys.F);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) net.row(4 * a + b) = weights(i, a, b);
      mask.nets.push_back(net);
    } else {
      std::array<std::array<Row, 6>, 6> full;
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) full[a][b] = weights(i, a, b);
      for (const auto& p : split_sector_bb(full)) {
        Eigen::MatrixXd net(16, sys.F);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) net.row(4 * a + b) = p[a][b];
        mask.nets.push_back(net);
      }
    }
  }
  for (const auto& net : mask.nets)
    for (int r = 0; r < 16; ++r)
      if (std::abs(net.row(r).sum() - 1.0) > 1e-8)
        throw std::logic_error("cap mask row does not sum to one");
  return mask;
}

const CapMask& cached_cap(bool star, int n) {
  static std::mutex mu;
  static std::map<std::pair<bool, int>, CapMask> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace({star, n});
  if (inserted) it->second = solve_cap(star, n);
  return it->second;
}

// Applies a cap mask to a footprint and registers contacts and seams.
// seam(i, edge, sub) gives {outside vertex, par_lo, par_hi} for the outer
// edges; sub is the 0/1 half index along the edge for split caps.
PatchBlock emit_cap(const CapMask& mask, const std::vector<int>& footprint, int center,
                    const std::vector<int>& outer_u, const std::vector<int>& outer_v,
                    const std::array<double, 2>& par_u, const std::array<double, 2>& par_v) {
  const int n = mask.n;
  const int per = mask.split ? 4 : 1;
  PatchBlock block;
  block.patch_count = n * per;
  for (int p = 0; p < block.patch_count; ++p) {
    const Eigen::MatrixXd& net = mask.nets[p];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < mask.F; ++c) block.weight(p, a, b, footprint[c], net(4 * a + b, c));
  }

  const auto pid = [&](int i, int ha, int hb) {
    return mask.split ? 4 * i + 2 * ha + hb : i;
  };
  for (int i = 0; i < n; ++i) {
    const int prev = mod(i - 1, n);
    if (!mask.split) {
      EdgeContact c;
      c.patch_a = pid(i, 0, 0);
      c.edge_a = 0;
      c.patch_b = pid(prev, 0, 0);
      c.edge_b = 3;
      block.contacts.push_back(c);
    } else {
      for (int h = 0; h < 2; ++h) {
        EdgeContact c;
        c.patch_a = pid(i, h, 0);
        c.edge_a = 0;
        c.patch_b = pid(prev, 0, h);
        c.edge_b = 3;
        block.contacts.push_back(c);
        EdgeContact cu;  // within-sector u seam (between u halves)
        cu.patch_a = pid(i, 0, h);
        cu.edge_a = 1;
        cu.patch_b = pid(i, 1, h);
        cu.edge_b = 3;
        block.contacts.push_back(cu);
        EdgeContact cv;  // within-sector v seam
        cv.patch_a = pid(i, h, 0);
        cv.edge_a = 2;
        cv.patch_b = pid(i, h, 1);
        cv.edge_b = 0;
        block.contacts.push_back(cv);
      }
    }

    const double u0 = par_u[0], u1 = par_u[1];
    const double v0 = par_v[0], v1 = par_v[1];
    if (!mask.split) {
      detail::register_seam(block, center, outer_u[i], pid(i, 0, 0), 1, 0, 1, u0, u1);
      detail::register_seam(block, center, outer_v[i], pid(i, 0, 0), 2, 0, 1, v0, v1);
    } else {
      for (int h = 0; h < 2; ++h) {
        const double mu = 0.5 * (u0 + u1), mv = 0.5 * (v0 + v1);
        detail::register_seam(block, center, outer_u[i], pid(i, 1, h), 1, 0, 1,
                              h == 0 ? u0 : mu, h == 0 ? mu : u1);
        detail::register_seam(block, center, outer_v[i], pid(i, h, 1), 2, 0, 1,
                              h == 0 ? v0 : mv, h == 0 ? mv : v1);
      }
    }
  }
  return block;
}

}  // namespace

PatchBlock emit_star(const HalfEdgeMesh& mesh, const Configuration& conf) {
  (void)mesh;
  const int n = conf.n;
  if (n < 3 || n > 8) throw std::invalid_argument("star valence out of range");
  if (int(conf.footprint.size()) != 2 * n + 1)
    throw std::invalid_argument("star footprint size mismatch");
  const CapMask& mask = cached_cap(true, n);
  // Sector i: u=1 edge crosses (v0, s_i) on the outer half of the crossing
  // curve; v=1 edge crosses (v0, s_{i+1}) on the half running back to G(f_i).
  std::vector<int> outer_u(n), outer_v(n);
  for (int i = 0; i < n; ++i) {
    outer_u[i] = conf.footprint[1 + i];
    outer_v[i] = conf.footprint[1 + (i + 1) % n];
  }
  return emit_cap(mask, conf.footprint, conf.footprint[0], outer_u, outer_v, {0.5, 1.0},
                  {0.5, 0.0});
}

PatchBlock emit_ngon(const HalfEdgeMesh& mesh, const Configuration& conf) {
  (void)mesh;
  const int n = conf.n;
  if (n < 3 || n > 8 || n == 4) throw std::invalid_argument("n-gon size out of range");
  if (int(conf.footprint.size()) != 4 * n)
    throw std::invalid_argument("n-gon footprint size mismatch");
  const CapMask& mask = cached_cap(false, n);
  // Sector i: u=1 edge crosses (v_i, sm_i) with the fan running
  // G(eq_{i-1}) -> G(cq_i); v=1 edge crosses (v_i, sp_i) running back.
  std::vector<int> outer_u(n), outer_v(n);
  for (int i = 0; i < n; ++i) {
    outer_u[i] = conf.footprint[2 * n + i];  // sm_i
    outer_v[i] = conf.footprint[n + i];      // sp_i
  }
  PatchBlock block;
  const int per = mask.split ? 4 : 1;
  block.patch_count = n * per;
  for (int p = 0; p < block.patch_count; ++p) {
    const Eigen::MatrixXd& net = mask.nets[p];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < mask.F; ++c)
          block.weight(p, a, b, conf.footprint[c], net(4 * a + b, c));
  }
  const auto pid = [&](int i, int ha, int hb) { return mask.split ? 4 * i + 2 * ha + hb : i; };
  for (int i = 0; i < n; ++i) {
    const int prev = mod(i - 1, n);
    const int vi = conf.footprint[i];
    if (!mask.split) {
      EdgeContact c;
      c.patch_a = pid(i, 0, 0);
      c.edge_a = 0;
      c.patch_b = pid(prev, 0, 0);
      c.edge_b = 3;
      block.contacts.push_back(c);
      detail::register_seam(block, vi, outer_u[i], pid(i, 0, 0), 1, 0, 1, 0.0, 1.0);
      detail::register_seam(block, vi, outer_v[i], pid(i, 0, 0), 2, 0, 1, 1.0, 0.0);
    } else {
      for (int h = 0; h < 2; ++h) {
        EdgeContact c;
        c.patch_a = pid(i, h, 0);
        c.edge_a = 0;
        c.patch_b = pid(prev, 0, h);
        c.edge_b = 3;
        block.contacts.push_back(c);
        EdgeContact cu;
        cu.patch_a = pid(i, 0, h);
        cu.edge_a = 1;
        cu.patch_b = pid(i, 1, h);
        cu.edge_b = 3;
        block.contacts.push_back(cu);
        EdgeContact cv;
        cv.patch_a = pid(i, h, 0);
        cv.edge_a = 2;
        cv.patch_b = pid(i, h, 1);
        cv.edge_b = 0;
        block.contacts.push_back(cv);
        detail::register_seam(block, vi, outer_u[i], pid(i, 1, h), 1, 0, 1, h == 0 ? 0.0 : 0.5,
                              h == 0 ? 0.5 : 1.0);
        detail::register_seam(block, vi, outer_v[i], pid(i, h, 1), 2, 0, 1, h == 0 ? 1.0 : 0.5,
                              h == 0 ? 0.5 : 0.0);
      }
    }
  }
  return block;
}

}  // namespace polysurf
