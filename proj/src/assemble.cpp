#include "polysurf/assemble.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "polysurf/bezier.hpp"
#include "polysurf/quadrature.hpp"

namespace polysurf {

QuadratureRule make_gauss_rule(int g) {
  if (g < 1 || g > 16) throw std::invalid_argument("quadrature order must be in 1..16");
  QuadratureRule rule;
  rule.order = g;
  rule.points.resize(g);
  rule.weights.resize(g);
  for (int i = 0; i < g; ++i) {
    // Newton on the Legendre polynomial from Chebyshev-like initial guesses.
    double x = std::cos(M_PI * (i + 0.75) / (g + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= g; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = g * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Roots come out in descending order over (-1,1).
    rule.points[g - 1 - i] = 0.5 * (x + 1);
    rule.weights[g - 1 - i] = 1.0 / ((1 - x * x) * dp * dp);
  }
  return rule;
}

namespace {

constexpr double kDetFloor = 1e-14;

struct Factors {
  Eigen::Matrix<double, 3, 2> jac;
  Eigen::Matrix2d metric_inv;
  double area_element;
};

Factors factors_from(const Vec3& su, const Vec3& sv, int patch) {
  Factors f;
  f.jac.col(0) = su;
  f.jac.col(1) = sv;
  const double g00 = su.dot(su), g01 = su.dot(sv), g11 = sv.dot(sv);
  const double det = g00 * g11 - g01 * g01;
  if (det <= kDetFloor)
    throw std::runtime_error("degenerate patch geometry at patch " + std::to_string(patch));
  f.metric_inv << g11 / det, -g01 / det, -g01 / det, g00 / det;
  f.area_element = std::sqrt(det);
  return f;
}

void bernstein3(double u, double* b, double* db) {
  const double s = 1 - u;
  b[0] = s * s * s;
  b[1] = 3 * u * s * s;
  b[2] = 3 * u * u * s;
  b[3] = u * u * u;
  const double q0 = s * s, q1 = 2 * u * s, q2 = u * u;
  db[0] = -3 * q0;
  db[1] = 3 * (q0 - q1);
  db[2] = 3 * (q1 - q2);
  db[3] = 3 * q2;
}

// per patch: the vertices with nonzero coefficients and their 16-blocks
struct Support {
  std::vector<int> verts;
  Eigen::MatrixXd blocks;  // 16 x nverts
};

std::vector<Support> collect_supports(const ControlToBBMap& map) {
  std::vector<Support> sup(map.patch_count());
  std::vector<std::vector<std::pair<int, std::array<double, 16>>>> per(map.patch_count());
  for (int v = 0; v < map.weights.cols(); ++v)
    for (Eigen::SparseMatrix<double>::InnerIterator it(map.weights, v); it; ++it) {
      if (it.value() == 0.0) continue;
      const int p = int(it.row()) / 16;
      if (per[p].empty() || per[p].back().first != v) {
        per[p].push_back({v, {}});
        per[p].back().second.fill(0.0);
      }
      per[p].back().second[int(it.row()) % 16] = it.value();
    }
  for (int p = 0; p < map.patch_count(); ++p) {
    const int n = int(per[p].size());
    sup[p].verts.resize(n);
    sup[p].blocks.resize(16, n);
    for (int c = 0; c < n; ++c) {
      sup[p].verts[c] = per[p][c].first;
      for (int k = 0; k < 16; ++k) sup[p].blocks(k, c) = per[p][c].second[k];
    }
  }
  return sup;
}

enum class Form { Stiffness, Mass };

// Element contributions per patch in a fixed order; the thread partition is a
// contiguous patch range so the merged triplet list is identical for any
// thread count.
template <class PerPatch>
void run_chunks(int np, int threads, const PerPatch& body) {
  if (threads <= 1) {
    for (int p = 0; p < np; ++p) body(p);
    return;
  }
  std::vector<std::thread> pool;
  const int t = std::min(threads, np > 0 ? np : 1);
  for (int c = 0; c < t; ++c)
    pool.emplace_back([&, c] {
      const int lo = np * c / t, hi = np * (c + 1) / t;
      for (int p = lo; p < hi; ++p) body(p);
    });
  for (auto& th : pool) th.join();
}

SparseSym assemble_form(const SplineComplex& complex, const ControlToBBMap& map,
                        const QuadratureRule& rule, int threads, Form form) {
  const int np = complex.patch_count();
  const int nv = int(map.weights.cols());
  const auto sup = collect_supports(map);
  std::vector<std::vector<Eigen::Triplet<double>>> chunks(np);

  run_chunks(np, threads, [&](int p) {
    const int n = int(sup[p].verts.size());
    if (n == 0) return;
    const auto du = partial_derivative(complex.patches[p], Dir::U);
    const auto dv = partial_derivative(complex.patches[p], Dir::V);
    Eigen::MatrixXd elem = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd val(n), gx(n), gy(n);
    double bu[4], dbu[4], bv[4], dbv[4];
    Eigen::Matrix<double, 16, 1> bb, bbu, bbv;
    for (size_t qi = 0; qi < rule.points.size(); ++qi)
      for (size_t qj = 0; qj < rule.points.size(); ++qj) {
        const double u = rule.points[qi], v = rule.points[qj];
        const double w = rule.weights[qi] * rule.weights[qj];
        bernstein3(u, bu, dbu);
        bernstein3(v, bv, dbv);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            bb[4 * i + j] = bu[i] * bv[j];
            bbu[4 * i + j] = dbu[i] * bv[j];
            bbv[4 * i + j] = bu[i] * dbv[j];
          }
        const Factors f = factors_from(eval(du, u, v), eval(dv, u, v), p);
        if (form == Form::Stiffness) {
          gx = sup[p].blocks.transpose() * bbu;
          gy = sup[p].blocks.transpose() * bbv;
          const double a = f.metric_inv(0, 0), b = f.metric_inv(0, 1), c = f.metric_inv(1, 1);
          const double s = w * f.area_element;
          for (int x = 0; x < n; ++x)
            for (int y = x; y < n; ++y)
              elem(x, y) += s * (a * gx[x] * gx[y] + b * (gx[x] * gy[y] + gy[x] * gx[y]) +
                                 c * gy[x] * gy[y]);
        } else {
          val = sup[p].blocks.transpose() * bb;
          const double s = w * f.area_element;
          for (int x = 0; x < n; ++x)
            for (int y = x; y < n; ++y) elem(x, y) += s * val[x] * val[y];
        }
      }
    auto& out = chunks[p];
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) {
        out.emplace_back(sup[p].verts[x], sup[p].verts[y], elem(x, y));
        if (y != x) out.emplace_back(sup[p].verts[y], sup[p].verts[x], elem(x, y));
      }
  });

  std::vector<Eigen::Triplet<double>> all;
  for (const auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  SparseSym m(nv, nv);
  m.setFromTriplets(all.begin(), all.end());
  return m;
}

}  // namespace

GeometryFactors geometry_factors(const SplineComplex& complex, int patch, double u, double v) {
  if (patch < 0 || patch >= complex.patch_count())
    throw std::out_of_range("geometry_factors: patch out of range");
  const auto du = partial_derivative(complex.patches[patch], Dir::U);
  const auto dv = partial_derivative(complex.patches[patch], Dir::V);
  const Factors f = factors_from(eval(du, u, v), eval(dv, u, v), patch);
  return {f.jac, f.metric_inv, f.area_element};
}

SparseSym assemble_stiffness(const SplineComplex& complex, const ControlToBBMap& map,
                             const QuadratureRule& rule, int threads) {
  return assemble_form(complex, map, rule, threads, Form::Stiffness);
}

SparseSym assemble_mass(const SplineComplex& complex, const ControlToBBMap& map,
                        const QuadratureRule& rule, int threads) {
  return assemble_form(complex, map, rule, threads, Form::Mass);
}

Eigen::VectorXd assemble_load(const SplineComplex& complex, const ControlToBBMap& map,
                              const QuadratureRule& rule, const ScalarField& f, int threads) {
  const int np = complex.patch_count();
  const auto sup = collect_supports(map);
  std::vector<Eigen::VectorXd> partial(np);

  run_chunks(np, threads, [&](int p) {
    const int n = int(sup[p].verts.size());
    partial[p] = Eigen::VectorXd::Zero(n);
    if (n == 0) return;
    const auto du = partial_derivative(complex.patches[p], Dir::U);
    const auto dv = partial_derivative(complex.patches[p], Dir::V);
    double bu[4], dbu[4], bv[4], dbv[4];
    Eigen::Matrix<double, 16, 1> bb;
    for (size_t qi = 0; qi < rule.points.size(); ++qi)
      for (size_t qj = 0; qj < rule.points.size(); ++qj) {
        const double u = rule.points[qi], v = rule.points[qj];
        const double w = rule.weights[qi] * rule.weights[qj];
        bernstein3(u, bu, dbu);
        bernstein3(v, bv, dbv);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) bb[4 * i + j] = bu[i] * bv[j];
        const Factors fac = factors_from(eval(du, u, v), eval(dv, u, v), p);
        const Vec3 pos = eval(complex.patches[p], u, v);
        const double fw = f(pos, p) * w * fac.area_element;
        partial[p] += fw * (sup[p].blocks.transpose() * bb);
      }
  });

  Eigen::VectorXd out = Eigen::VectorXd::Zero(map.weights.cols());
  for (int p = 0; p < np; ++p)
    for (size_t c = 0; c < sup[p].verts.size(); ++c) out[sup[p].verts[c]] += partial[p][c];
  return out;
}

std::string matrix_text(const SparseSym& m) {
  std::string out;
  char buf[80];
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseSym::InnerIterator it(m, c); it; ++it) {
      if (it.row() < it.col()) continue;
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", int(it.row()), int(it.col()), it.value());
      out += buf;
    }
  return out;
}

}  // namespace polysurf
