#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "polysurf/assemble.hpp"
#include "polysurf/netgen.hpp"

using namespace polysurf;

namespace {

BuiltComplex build(const ControlNet& net) { return build_complex(build_halfedge(net)); }

void perturb(ControlNet& net, double amp) {
  for (size_t i = 0; i < net.vertices.size(); ++i) {
    Vec3& p = net.vertices[i];
    p.z() += amp * std::sin(3.1 * double(i) + 0.7) * std::cos(2.3 * p.x() + 1.1 * p.y());
  }
}

Eigen::MatrixXd dense(const SparseSym& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("gauss rules match frozen Legendre nodes") {
  const QuadratureRule g1 = make_gauss_rule(1);
  CHECK(g1.points.size() == 1);
  CHECK(g1.points[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  const QuadratureRule g2 = make_gauss_rule(2);
  CHECK(g2.points[0] == doctest::Approx(0.21132486540518713).epsilon(1e-14));
  CHECK(g2.points[1] == doctest::Approx(0.78867513459481287).epsilon(1e-14));
  CHECK(g2.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g2.weights[1] == doctest::Approx(0.5).epsilon(1e-14));

  const QuadratureRule g4 = make_gauss_rule(4);
  const double p4[] = {0.069431844202973714, 0.33000947820757187, 0.66999052179242813,
                       0.93056815579702623};
  const double w4[] = {0.17392742256872684, 0.3260725774312731, 0.3260725774312731,
                       0.17392742256872684};
  for (int i = 0; i < 4; ++i) {
    CHECK(g4.points[i] == doctest::Approx(p4[i]).epsilon(1e-14));
    CHECK(g4.weights[i] == doctest::Approx(w4[i]).epsilon(1e-14));
  }

  const QuadratureRule g6 = make_gauss_rule(6);
  const double p6[] = {0.033765242898423975, 0.16939530676686776, 0.38069040695840151,
                       0.61930959304159849, 0.83060469323313224, 0.96623475710157603};
  const double w6[] = {0.085662246189584873, 0.18038078652406947, 0.23395696728634569,
                       0.23395696728634569, 0.18038078652406947, 0.085662246189584873};
  for (int i = 0; i < 6; ++i) {
    CHECK(g6.points[i] == doctest::Approx(p6[i]).epsilon(1e-14));
    CHECK(g6.weights[i] == doctest::Approx(w6[i]).epsilon(1e-14));
  }

  CHECK_THROWS(make_gauss_rule(0));
  CHECK_THROWS(make_gauss_rule(17));
}

TEST_CASE("gauss rules integrate monomials exactly up to degree 2g-1") {
  for (int g = 1; g <= 16; ++g) {
    const QuadratureRule rule = make_gauss_rule(g);
    double wsum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * g - 1; ++k) {
      double s = 0.0;
      for (size_t i = 0; i < rule.points.size(); ++i)
        s += rule.weights[i] * std::pow(rule.points[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("geometry factors on the flat grid are the cell scaling") {
  const int m = 7;
  const double h = 2.0 / (m - 1);
  const BuiltComplex built = build(netgen::grid(m));
  for (int p : {0, 7, 20}) {
    for (double u : {0.2, 0.5, 0.9})
      for (double v : {0.1, 0.6}) {
        const GeometryFactors gf = geometry_factors(built.complex, p, u, v);
        CHECK(gf.area_element == doctest::Approx(h * h).epsilon(1e-12));
        const Eigen::Matrix2d mi = gf.metric_inv * (gf.jac.transpose() * gf.jac);
        CHECK((mi - Eigen::Matrix2d::Identity()).norm() < 1e-12);
        CHECK(gf.jac.col(0).norm() == doctest::Approx(h).epsilon(1e-12));
        CHECK(gf.jac.col(1).norm() == doctest::Approx(h).epsilon(1e-12));
      }
  }
}

TEST_CASE("geometry factors match finite differences on a curved net") {
  ControlNet net = netgen::grid(6);
  perturb(net, 0.4);
  const BuiltComplex built = build(net);
  const double eps = 1e-6;
  for (int p : {0, 5, 11}) {
    for (double u : {0.3, 0.7})
      for (double v : {0.25, 0.8}) {
        const GeometryFactors gf = geometry_factors(built.complex, p, u, v);
        const auto& patch = built.complex.patches[p];
        const Vec3 du = (eval(patch, u + eps, v) - eval(patch, u - eps, v)) / (2 * eps);
        const Vec3 dv = (eval(patch, u, v + eps) - eval(patch, u, v - eps)) / (2 * eps);
        CHECK((gf.jac.col(0) - du).norm() < 1e-6);
        CHECK((gf.jac.col(1) - dv).norm() < 1e-6);
        const Eigen::Matrix2d g = gf.jac.transpose() * gf.jac;
        CHECK(gf.area_element == doctest::Approx(std::sqrt(g.determinant())).epsilon(1e-12));
      }
  }

  // reflection leaves the area element unchanged
  ControlNet mirror = net;
  for (Vec3& q : mirror.vertices) q.x() = -q.x();
  const BuiltComplex mbuilt = build(mirror);
  const GeometryFactors a = geometry_factors(built.complex, 3, 0.4, 0.6);
  double best = 1e9;
  for (int p = 0; p < mbuilt.complex.patch_count(); ++p)
    for (double u : {0.4, 0.6}) {
      const GeometryFactors b = geometry_factors(mbuilt.complex, p, u, 0.6);
      best = std::min(best, std::abs(a.area_element - b.area_element));
    }
  CHECK(best < 1e-12);
}

TEST_CASE("degenerate geometry is rejected") {
  BuiltComplex built = build(netgen::grid(5));
  for (auto& c : built.complex.patches[0].coeffs()) c = Vec3(0.3, 0.1, 0.2);
  CHECK_THROWS(geometry_factors(built.complex, 0, 0.5, 0.5));
}

TEST_CASE("stiffness annihilates constants and is symmetric positive semidefinite") {
  ControlNet net = netgen::grid(7);
  SUBCASE("flat") {}
  SUBCASE("curved") { perturb(net, 0.3); }
  const BuiltComplex built = build(net);
  const SparseSym k = assemble_stiffness(built.complex, built.map, make_gauss_rule(4));
  const Eigen::MatrixXd kd = dense(k);
  CHECK((kd - kd.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((kd * Eigen::VectorXd::Ones(kd.cols())).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kd);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("stiffness commutes with the grid transpose symmetry") {
  const int m = 7;
  const BuiltComplex built = build(netgen::grid(m));
  const SparseSym k = assemble_stiffness(built.complex, built.map, make_gauss_rule(4));
  const Eigen::MatrixXd kd = dense(k);
  std::vector<int> perm((m + 1) * (m + 1));
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) perm[j * (m + 1) + i] = i * (m + 1) + j;
  for (int a = 0; a < kd.rows(); ++a)
    for (int b = 0; b < kd.cols(); ++b)
      CHECK(kd(a, b) == doctest::Approx(kd(perm[a], perm[b])).epsilon(1e-12));
}

TEST_CASE("mass recovers the surface area and is positive definite on free dofs") {
  const int m = 7;
  const ControlNet net = netgen::grid(m);
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const SparseSym mmat = assemble_mass(built.complex, built.map, make_gauss_rule(4));
  const Eigen::MatrixXd md = dense(mmat);
  CHECK((md - md.transpose()).cwiseAbs().maxCoeff() == 0.0);
  const double area = Eigen::VectorXd::Ones(md.rows()).dot(md * Eigen::VectorXd::Ones(md.cols()));
  CHECK(area == doctest::Approx(4.0).epsilon(1e-8));  // receded domain is [-1,1]^2
  for (int i = 0; i < md.rows(); ++i) CHECK(md(i, i) > 0.0);

  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, BoundarySpec{});
  Eigen::MatrixXd mff(dofs.free_count, dofs.free_count);
  for (int i = 0, a = 0; i < md.rows(); ++i) {
    if (!dofs.is_free(i)) continue;
    for (int j = 0, b = 0; j < md.cols(); ++j) {
      if (!dofs.is_free(j)) continue;
      mff(a, b++) = md(i, j);
    }
    ++a;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mff);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("load vector sums to the area for unit data and refines consistently") {
  const BuiltComplex built = build(netgen::grid(7));
  const auto zero = [](const Vec3&, int) { return 0.0; };
  const auto one = [](const Vec3&, int) { return 1.0; };
  const auto rhs = [](const Vec3& p, int) { return 2.0 * (p.x() * p.x() + p.y() * p.y() - 2.0); };

  CHECK(assemble_load(built.complex, built.map, make_gauss_rule(4), zero).norm() == 0.0);
  const Eigen::VectorXd f1 = assemble_load(built.complex, built.map, make_gauss_rule(4), one);
  CHECK(f1.sum() == doctest::Approx(4.0).epsilon(1e-8));

  const Eigen::VectorXd f4 = assemble_load(built.complex, built.map, make_gauss_rule(4), rhs);
  const Eigen::VectorXd f10 = assemble_load(built.complex, built.map, make_gauss_rule(10), rhs);
  CHECK((f4 - f10).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("raising the quadrature order barely moves smooth-geometry stiffness") {
  ControlNet net = netgen::grid(6);
  perturb(net, 0.2);
  const BuiltComplex built = build(net);
  const Eigen::MatrixXd k4 = dense(assemble_stiffness(built.complex, built.map, make_gauss_rule(4)));
  const Eigen::MatrixXd k6 = dense(assemble_stiffness(built.complex, built.map, make_gauss_rule(6)));
  const Eigen::MatrixXd k8 = dense(assemble_stiffness(built.complex, built.map, make_gauss_rule(8)));
  const double scale = k4.cwiseAbs().maxCoeff();
  const double d46 = (k4 - k6).cwiseAbs().maxCoeff();
  const double d68 = (k6 - k8).cwiseAbs().maxCoeff();
  CHECK(d46 < 1e-4 * scale);
  CHECK(d68 < d46);
}

TEST_CASE("stiffness sparsity lies inside the overlap graph") {
  const BuiltComplex built = build(netgen::star_disk(5));
  const SparseSym k = assemble_stiffness(built.complex, built.map, make_gauss_rule(4));
  const auto graph = overlap_graph(built.map);
  for (int c = 0; c < k.outerSize(); ++c)
    for (SparseSym::InnerIterator it(k, c); it; ++it)
      if (it.value() != 0.0)
        CHECK(std::count(graph[it.row()].begin(), graph[it.row()].end(), int(it.col())) == 1);
}

TEST_CASE("threaded assembly is bitwise deterministic") {
  ControlNet net = netgen::grid(9);
  perturb(net, 0.3);
  const BuiltComplex built = build(net);
  const QuadratureRule rule = make_gauss_rule(4);
  const SparseSym k1 = assemble_stiffness(built.complex, built.map, rule, 1);
  const SparseSym k4 = assemble_stiffness(built.complex, built.map, rule, 4);
  const Eigen::MatrixXd d1 = dense(k1), d4 = dense(k4);
  CHECK((d1 - d4).cwiseAbs().maxCoeff() == 0.0);
  const auto rhs = [](const Vec3& p, int) { return std::sin(p.x()) + p.y(); };
  const Eigen::VectorXd l1 = assemble_load(built.complex, built.map, rule, rhs, 1);
  const Eigen::VectorXd l4 = assemble_load(built.complex, built.map, rule, rhs, 4);
  CHECK((l1 - l4).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix text dump is the lower triangle in coordinate form") {
  SparseSym m(2, 2);
  std::vector<Eigen::Triplet<double>> ts = {{0, 0, 1.5}, {1, 0, 0.25}, {0, 1, 0.25}, {1, 1, 2.0}};
  m.setFromTriplets(ts.begin(), ts.end());
  CHECK(matrix_text(m) == "0 0 1.5\n1 0 0.25\n1 1 2\n");
}
