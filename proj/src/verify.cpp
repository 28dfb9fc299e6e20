#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "polysurf/construct.hpp"
#include "polysurf/quadrature.hpp"

namespace polysurf {

namespace {

const char* class_name(JoinClass c) {
  switch (c) {
    case JoinClass::C1: return "C1";
    case JoinClass::G1: return "G1";
    default: return "FAIL";
  }
}

double coeff_scale(const Patch3d& p) {
  Vec3 lo = p.coeffs().front(), hi = lo;
  for (const Vec3& c : p.coeffs()) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  return (hi - lo).norm();
}

}  // namespace

std::string G1Report::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "edges %zu c0_max=%.3e g1_max=%.3e fails=%d degenerate=%d",
                edges.size(), max_c0, max_g1, fail_count, degenerate_count);
  return buf;
}

std::string G1Report::text() const {
  std::string out;
  char buf[200];
  for (const EdgeCheck& e : edges) {
    std::snprintf(buf, sizeof(buf), "edge %d %d %d %d c0=%.3e g1=%.3e class=%s\n",
                  e.contact.patch_a, e.contact.edge_a, e.contact.patch_b, e.contact.edge_b, e.c0,
                  e.g1, class_name(e.verdict));
    out += buf;
  }
  out += summary();
  out += '\n';
  return out;
}

G1Report verify_g1(const SplineComplex& cx) {
  const QuadratureRule rule = make_gauss_rule(16);
  const double class_tol = 1e-10;

  // Derivative patches, one pair per patch.
  std::vector<Patch3d> du(cx.patches.size()), dv(cx.patches.size());
  for (size_t p = 0; p < cx.patches.size(); ++p) {
    du[p] = partial_derivative(cx.patches[p], Dir::U);
    dv[p] = partial_derivative(cx.patches[p], Dir::V);
  }

  G1Report report;
  report.edges.reserve(cx.contacts.size());
  for (const EdgeContact& c : cx.contacts) {
    EdgeCheck chk;
    chk.contact = c;
    const Patch3d& pa = cx.patches[c.patch_a];
    const Patch3d& pb = cx.patches[c.patch_b];
    const double eps = 1e-9 * std::max({coeff_scale(pa), coeff_scale(pb), 1e-30});
    const bool polar_side = cx.patch_config_kind(c.patch_a) == ConfigKind::Polar ||
                            cx.patch_config_kind(c.patch_b) == ConfigKind::Polar;

    double dot_ab = 0, dot_aa = 0;
    struct Sample {
      Vec3 na, nb;
      double tn;
    };
    std::vector<Sample> kept;
    kept.reserve(rule.points.size());
    for (double s : rule.points) {
      const auto [ta, tb] = contact_params(c, s);
      const Vec2 qa = edge_point(c.edge_a, ta);
      const Vec2 qb = edge_point(c.edge_b, tb);
      chk.c0 = std::max(chk.c0, (eval(pa, qa.x(), qa.y()) - eval(pb, qb.x(), qb.y())).norm());

      const Vec3 tu = eval(du[c.patch_a], qa.x(), qa.y());
      const Vec3 tv = eval(dv[c.patch_a], qa.x(), qa.y());
      const Vec3 tangent = (c.edge_a == 0 || c.edge_a == 2) ? tu : tv;
      const Vec2 wa = edge_inward(c.edge_a);
      const Vec2 wb = edge_inward(c.edge_b);
      const Vec3 na = wa.x() * tu + wa.y() * tv;
      const Vec3 nb = wb.x() * eval(du[c.patch_b], qb.x(), qb.y()) +
                      wb.y() * eval(dv[c.patch_b], qb.x(), qb.y());

      const double tn = tangent.norm(), an = na.norm(), bn = nb.norm();
      if (tn < eps || an < eps || bn < eps) {
        if (polar_side) continue;  // collapsed cap boundary
        chk.degenerate = true;
        continue;
      }
      chk.g1 = std::max(chk.g1, std::abs(tangent.dot(na.cross(nb))) / (tn * an * bn));
      dot_ab += na.dot(nb);
      dot_aa += na.dot(na);
      kept.push_back({na, nb, tn});
    }

    if (!kept.empty() && dot_aa > 0) {
      chk.ratio = -dot_ab / dot_aa;
      for (const Sample& smp : kept) {
        const double r = (smp.nb + chk.ratio * smp.na).norm() / (smp.na.norm() + smp.nb.norm());
        chk.c1_residual = std::max(chk.c1_residual, r);
      }
    } else {
      chk.degenerate = true;
    }

    if (chk.degenerate) {
      chk.verdict = JoinClass::Fail;
      ++report.degenerate_count;
      ++report.fail_count;
    } else if (chk.ratio > 0 && chk.c1_residual <= class_tol) {
      chk.verdict = JoinClass::C1;
    } else if (chk.g1 <= class_tol) {
      chk.verdict = JoinClass::G1;
    } else {
      chk.verdict = JoinClass::Fail;
      ++report.fail_count;
    }
    report.max_c0 = std::max(report.max_c0, chk.c0);
    if (chk.verdict != JoinClass::Fail) report.max_g1 = std::max(report.max_g1, chk.g1);
    report.edges.push_back(chk);
  }
  return report;
}

}  // namespace polysurf
