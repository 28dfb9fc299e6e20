// Polar cap: m degenerate bi-3 patches tile the pole's cell, one per incident
// triangle. The outer row copies the neighboring ring cell's boundary, the
// next row extends its radial derivative (parametric C1 into the ring), the
// pole row collapses to a single point, and the last interior row places its
// coefficients on a shared tangent-plane ellipse sampled by a periodic cubic
// B-spline, which makes consecutive sectors join with parametric C1 as well.
// Pole point and tangent rows are fitted per footprint column by least
// squares on the radial third differences; the fit matrix depends only on m.

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "construct_internal.hpp"

namespace polysurf {

namespace {

using Row = Eigen::RowVectorXd;

struct PolarMask {
  int m = 0;
  std::vector<Eigen::MatrixXd> nets;  // 16 x F per sector, row 4*iu + jv
};

PolarMask solve_polar(int m) {
  const int F = m + 1;
  const auto pole = [&] {
    Row r = Row::Zero(F);
    r[0] = 1;
    return r;
  };
  const auto ring = [&](int i) {
    Row r = Row::Zero(F);
    r[1 + (((i % m) + m) % m)] = 1;
    return r;
  };

  // Outer boundary and first derivative rows per sector, direct weights.
  std::vector<detail::Cubic<Row>> row0(m), row1(m);
  for (int i = 0; i < m; ++i) {
    const Row g_prev = (2 * pole() + ring(i - 1) + ring(i)) / 4;
    const Row g_next = (2 * pole() + ring(i) + ring(i + 1)) / 4;
    const detail::Quadratic<Row> curve = {g_prev, (pole() + ring(i)) / 2, g_next};
    const detail::Quadratic<Row> ribbon = {
        (2 * pole() - ring(i) - ring(i - 1)) / 2, pole() - ring(i),
        (2 * pole() - ring(i) - ring(i + 1)) / 2};
    row0[i] = detail::raise3(curve);
    const detail::Cubic<Row> rib3 = detail::raise3(ribbon);
    for (int j = 0; j < 4; ++j) row1[i][j] = row0[i][j] + rib3[j] / 3;
  }

  // Tangent-row layout: BB coefficients of the periodic uniform cubic
  // B-spline through the unit circle samples.
  Eigen::MatrixXd fitmat(4 * m, 3);
  Eigen::MatrixXd rhs(4 * m, F);
  std::vector<std::array<Vec2, 4>> xy(m);
  for (int i = 0; i < m; ++i) {
    const auto u = [&](int k) {
      const double a = 2 * M_PI * (((k % m) + m) % m) / m;
      return Vec2(std::cos(a), std::sin(a));
    };
    xy[i] = {(u(i - 1) + 4 * u(i) + u(i + 1)) / 6, (2 * u(i) + u(i + 1)) / 3,
             (u(i) + 2 * u(i + 1)) / 3, (u(i) + 4 * u(i + 1) + u(i + 2)) / 6};
    for (int j = 0; j < 4; ++j) {
      fitmat(4 * i + j, 0) = -2.0;
      fitmat(4 * i + j, 1) = -3.0 * xy[i][j].x();
      fitmat(4 * i + j, 2) = -3.0 * xy[i][j].y();
      rhs.row(4 * i + j) = -(3 * row1[i][j] - row0[i][j]);
    }
  }
  const Eigen::MatrixXd fit = fitmat.completeOrthogonalDecomposition().solve(rhs);
  const Row pstar = fit.row(0), t1 = fit.row(1), t2 = fit.row(2);

  PolarMask mask;
  mask.m = m;
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd net(16, F);
    for (int j = 0; j < 4; ++j) {
      net.row(4 * j + 0) = row0[i][j];
      net.row(4 * j + 1) = row1[i][j];
      net.row(4 * j + 2) = pstar + xy[i][j].x() * t1 + xy[i][j].y() * t2;
      net.row(4 * j + 3) = pstar;
    }
    for (int r = 0; r < 16; ++r)
      if (std::abs(net.row(r).sum() - 1.0) > 1e-8)
        throw std::logic_error("polar mask row does not sum to one");
    mask.nets.push_back(net);
  }
  return mask;
}

const PolarMask& cached_polar(int m) {
  static std::mutex mu;
  static std::map<int, PolarMask> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.try_emplace(m);
  if (inserted) it->second = solve_polar(m);
  return it->second;
}

}  // namespace

PatchBlock emit_polar(const HalfEdgeMesh& mesh, const Configuration& conf) {
  (void)mesh;
  const int m = conf.n;
  if (m < 3 || m > 8) throw std::invalid_argument("polar valence out of range");
  if (int(conf.footprint.size()) != m + 1)
    throw std::invalid_argument("polar footprint size mismatch");
  const PolarMask& mask = cached_polar(m);

  PatchBlock block;
  block.patch_count = m;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c <= m; ++c)
          block.weight(i, a, b, conf.footprint[c], mask.nets[i](4 * a + b, c));

  const int P = conf.footprint[0];
  for (int i = 0; i < m; ++i) {
    EdgeContact c;  // shared radial edge between consecutive sectors
    c.patch_a = i;
    c.edge_a = 1;
    c.patch_b = (i + 1) % m;
    c.edge_b = 3;
    block.contacts.push_back(c);
    detail::register_seam(block, P, conf.footprint[1 + i], i, 0, 0, 1, 0.0, 1.0);
  }
  return block;
}

}  // namespace polysurf
