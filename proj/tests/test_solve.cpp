#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "polysurf/netgen.hpp"
#include "polysurf/solve.hpp"

using namespace polysurf;

namespace {

SparseSym sparse_of(const Eigen::MatrixXd& d) {
  SparseSym s(d.rows(), d.cols());
  std::vector<Eigen::Triplet<double>> ts;
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) ts.emplace_back(i, j, d(i, j));
  s.setFromTriplets(ts.begin(), ts.end());
  return s;
}

struct Problem {
  HalfEdgeMesh mesh;
  BuiltComplex built;
  DofMap dofs;
};

Problem poisson_problem(int m) {
  const ControlNet net = netgen::grid(m);
  HalfEdgeMesh mesh = build_halfedge(net);
  BuiltComplex built = build_complex(mesh);
  DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, BoundarySpec{});
  return {std::move(mesh), std::move(built), std::move(dofs)};
}

double exact_quartic(const Vec3& p) {
  return (p.x() * p.x() - 1.0) * (p.y() * p.y() - 1.0);
}

double rhs_quartic(const Vec3& p, int) {
  return 2.0 * (2.0 - p.x() * p.x() - p.y() * p.y());
}

}  // namespace

TEST_CASE("cg solves identity and a closed-form 2x2 system") {
  SparseSym eye = sparse_of(Eigen::MatrixXd::Identity(5, 5));
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, 4;
  CHECK((solve_spd(eye, b) - b).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::MatrixXd a(2, 2);
  a << 4, 1, 1, 3;
  Eigen::VectorXd b2(2);
  b2 << 1, 2;
  const Eigen::VectorXd x = solve_spd(sparse_of(a), b2);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
}

TEST_CASE("cg reaches the requested residual on random spd systems") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd b50(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) b50(i, j) = dist(rng);
  const Eigen::MatrixXd a = b50 * b50.transpose() + Eigen::MatrixXd::Identity(50, 50);
  Eigen::VectorXd rhs(50);
  for (int i = 0; i < 50; ++i) rhs[i] = dist(rng);
  const Eigen::VectorXd x = solve_spd(sparse_of(a), rhs, 1e-10);
  CHECK((a * x - rhs).norm() <= 1e-8 * rhs.norm());
}

TEST_CASE("cg rejects indefinite matrices and missed convergence") {
  Eigen::MatrixXd ind(2, 2);
  ind << 1, 0, 0, -1;
  Eigen::VectorXd b(2);
  b << 1, 1;
  CHECK_THROWS_AS(solve_spd(sparse_of(ind), b), SolveError);

  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd m(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) m(i, j) = dist(rng);
  const Eigen::MatrixXd hard = m * m.transpose() + 1e-8 * Eigen::MatrixXd::Identity(30, 30);
  Eigen::VectorXd hb = Eigen::VectorXd::Ones(30);
  CHECK_THROWS_AS(solve_spd(sparse_of(hard), hb, 1e-14, 2), SolveError);
}

TEST_CASE("poisson with zero data returns zero and scales linearly") {
  const Problem pb = poisson_problem(8);
  const QuadratureRule rule = make_gauss_rule(4);
  const auto zero = [](const Vec3&, int) { return 0.0; };
  const FieldSolution u0 = solve_poisson(pb.built.complex, pb.built.map, pb.dofs, zero, rule);
  CHECK(u0.coeffs.cwiseAbs().maxCoeff() < 1e-14);

  const auto twice = [](const Vec3& p, int patch) { return 2.0 * rhs_quartic(p, patch); };
  const FieldSolution u1 =
      solve_poisson(pb.built.complex, pb.built.map, pb.dofs, rhs_quartic, rule);
  const FieldSolution u2 = solve_poisson(pb.built.complex, pb.built.map, pb.dofs, twice, rule);
  CHECK((u2.coeffs - 2.0 * u1.coeffs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("poisson refuses unconstrained closed surfaces") {
  const ControlNet net = netgen::cube();
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, BoundarySpec{});
  const auto one = [](const Vec3&, int) { return 1.0; };
  CHECK_THROWS_AS(solve_poisson(built.complex, built.map, dofs, one, make_gauss_rule(4)),
                  SolveError);
}

TEST_CASE("manufactured poisson solution reaches paper accuracy on the flat grid") {
  const Problem pb = poisson_problem(16);
  const QuadratureRule rule = make_gauss_rule(4);
  const FieldSolution u =
      solve_poisson(pb.built.complex, pb.built.map, pb.dofs, rhs_quartic, rule);
  const ErrorReport rep = error_field(pb.built.complex, pb.built.map, u, exact_quartic, 9);
  CHECK(rep.global_max <= 0.01);
  CHECK(rep.per_patch.size() == size_t(pb.built.complex.patch_count()));
  double m = 0.0;
  for (double e : rep.per_patch) m = std::max(m, e);
  CHECK(rep.global_max == doctest::Approx(m).epsilon(0));

  // residual orthogonality on the free dofs
  const SparseSym k = assemble_stiffness(pb.built.complex, pb.built.map, rule);
  const Eigen::VectorXd f = assemble_load(pb.built.complex, pb.built.map, rule, rhs_quartic);
  const Eigen::VectorXd r = f - k * u.coeffs;
  double rfree = 0.0, ffree = 0.0;
  for (int v = 0; v < r.size(); ++v)
    if (pb.dofs.is_free(v)) {
      rfree += r[v] * r[v];
      ffree += f[v] * f[v];
    }
  CHECK(std::sqrt(rfree) <= 1e-8 * std::sqrt(ffree));
}

TEST_CASE("error field vanishes for an exactly reproduced field") {
  // affine data is reproduced by every mask, so u_h(s) equals the affine
  // function of the surface point and the sampled error is roundoff
  const Problem pb = poisson_problem(7);
  FieldSolution sol;
  sol.coeffs.resize(pb.mesh.nv());
  for (int v = 0; v < pb.mesh.nv(); ++v) {
    const Vec3 p = pb.mesh.position(v);
    sol.coeffs[v] = 0.5 + 2.0 * p.x() - 0.75 * p.y();
  }
  const ErrorReport rep = error_field(
      pb.built.complex, pb.built.map, sol,
      [](const Vec3& p) { return 0.5 + 2.0 * p.x() - 0.75 * p.y(); }, 7);
  CHECK(rep.global_max < 1e-12);
}

TEST_CASE("heat step without diffusion keeps the state") {
  const ControlNet net = netgen::cube();
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const QuadratureRule rule = make_gauss_rule(4);
  const SparseSym m = assemble_mass(built.complex, built.map, rule);
  SparseSym k0(m.rows(), m.cols());
  BoundarySpec spec;
  spec.pinned = {{6, 80.0}};
  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, spec);
  Eigen::VectorXd c = Eigen::VectorXd::Random(m.rows());
  c[6] = 80.0;
  const Eigen::VectorXd next = step_heat(m, k0, dofs, c, 0.05);
  CHECK((next - c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("uniform source temperature is stationary on the closed cube") {
  const ControlNet net = netgen::cube();
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const QuadratureRule rule = make_gauss_rule(4);
  const SparseSym m = assemble_mass(built.complex, built.map, rule);
  const SparseSym k = assemble_stiffness(built.complex, built.map, rule);
  BoundarySpec spec;
  spec.pinned = {{6, 80.0}};
  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, spec);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(m.rows(), 80.0);
  const Eigen::VectorXd next = step_heat(m, k, dofs, c, 0.1);
  CHECK((next - c).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cube heat flow is bounded, symmetric, and monotone") {
  const ControlNet net = netgen::cube();
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const QuadratureRule rule = make_gauss_rule(4);
  BoundarySpec spec;
  const int source = 6;  // (1,1,1)
  spec.pinned = {{source, 80.0}};
  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, spec);

  const int nsteps = 40;
  const SparseSym m = assemble_mass(built.complex, built.map, rule);
  const double area = Eigen::VectorXd::Ones(m.rows()).dot(m * Eigen::VectorXd::Ones(m.cols()));
  const double dt = area / (nsteps * 10.0);
  const auto series = run_heat(built.complex, built.map, dofs, dt, nsteps,
                               {0.0, 10 * dt, 20 * dt, 40 * dt}, rule);
  REQUIRE(series.size() == 4);
  CHECK(series[0].first == 0.0);

  // sampled range stays within [0, 80 + 1e-6] and grows monotonically
  std::vector<Eigen::VectorXd> samples;
  for (const auto& [t, sol] : series) {
    const auto patches = apply_map(built.map, sol.coeffs);
    std::vector<double> vals;
    for (const auto& p : patches)
      for (double uu : {0.167, 0.5, 0.833})
        for (double vv : {0.167, 0.5, 0.833}) vals.push_back(eval(p, uu, vv));
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(), vals.size());
    CHECK(v.minCoeff() > -1e-6);
    CHECK(v.maxCoeff() < 80.0 + 1e-6);
    samples.push_back(v);
  }
  for (size_t s = 1; s < samples.size(); ++s)
    CHECK((samples[s] - samples[s - 1]).minCoeff() > -1e-6);

  // 3-fold symmetry about the diagonal through the source
  std::vector<int> perm(mesh.nv(), -1);
  for (int v = 0; v < mesh.nv(); ++v) {
    const Vec3 p = mesh.position(v);
    const Vec3 q(p.z(), p.x(), p.y());
    for (int w = 0; w < mesh.nv(); ++w)
      if ((mesh.position(w) - q).norm() < 1e-12) perm[v] = w;
    REQUIRE(perm[v] >= 0);
  }
  CHECK(perm[source] == source);
  for (const auto& [t, sol] : series) {
    double asym = 0.0;
    for (int v = 0; v < mesh.nv(); ++v)
      asym = std::max(asym, std::abs(sol.coeffs[v] - sol.coeffs[perm[v]]));
    CHECK(asym < 1e-8);
  }
}

TEST_CASE("opener heat run completes with a watertight field") {
  const ControlNet net = netgen::opener();
  const HalfEdgeMesh mesh = build_halfedge(net);
  const BuiltComplex built = build_complex(mesh);
  const QuadratureRule rule = make_gauss_rule(4);
  BoundarySpec spec;
  spec.pinned = {{0, 80.0}};
  const DofMap dofs = apply_dirichlet(mesh, built.map, built.complex, spec);
  const auto series = run_heat(built.complex, built.map, dofs, 0.05, 10, {10 * 0.05}, rule);
  REQUIRE(series.size() == 1);
  const auto patches = apply_map(built.map, series[0].second.coeffs);

  double worst = 0.0;
  for (const EdgeContact& c : built.complex.contacts) {
    for (int s = 0; s <= 8; ++s) {
      const double t = s / 8.0;
      const auto [ta, tb] = contact_params(c, t);
      const Vec2 pa = edge_point(c.edge_a, ta), pb = edge_point(c.edge_b, tb);
      const double fa = eval(patches[c.patch_a], pa.x(), pa.y());
      const double fb = eval(patches[c.patch_b], pb.x(), pb.y());
      worst = std::max(worst, std::abs(fa - fb));
    }
  }
  CHECK(worst < 1e-10);
}
