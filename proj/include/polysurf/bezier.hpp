#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "polysurf/types.hpp"

namespace polysurf {

// Tensor-product patch in Bernstein-Bezier form over the unit square.
// coeff(i,j) multiplies B^{d1}_i(u) B^{d2}_j(v); i runs along u.
template <class Value>
class BezierPatch {
 public:
  BezierPatch() = default;
  BezierPatch(int d1, int d2)
      : d1_(d1), d2_(d2), c_((d1 + 1) * (d2 + 1), zero_value<Value>()) {
    if (d1 < 0 || d2 < 0) throw std::invalid_argument("negative degree");
  }

  int degree_u() const { return d1_; }
  int degree_v() const { return d2_; }
  int rows() const { return d1_ + 1; }
  int cols() const { return d2_ + 1; }

  Value& at(int i, int j) { return c_[i * (d2_ + 1) + j]; }
  const Value& at(int i, int j) const { return c_[i * (d2_ + 1) + j]; }

  std::vector<Value>& coeffs() { return c_; }
  const std::vector<Value>& coeffs() const { return c_; }

 private:
  int d1_ = 0, d2_ = 0;
  std::vector<Value> c_;
};

using PatchXd = BezierPatch<double>;
using Patch3d = BezierPatch<Vec3>;

enum class Dir { U, V };

// de Casteljau evaluation; u,v must lie in [0,1].
template <class Value>
Value eval(const BezierPatch<Value>& p, double u, double v);

// Exact derivative patch, degree reduced by one in the chosen direction.
template <class Value>
BezierPatch<Value> partial_derivative(const BezierPatch<Value>& p, Dir dir);

// Degree raised by one in both directions; same polynomial.
template <class Value>
BezierPatch<Value> degree_raise(const BezierPatch<Value>& p);

// Degree raised (repeatedly) to exactly (d1,d2); requires d1>=deg_u, d2>=deg_v.
template <class Value>
BezierPatch<Value> raise_to(const BezierPatch<Value>& p, int d1, int d2);

// Exact integral over the unit square: sum of coefficients / ((d1+1)(d2+1)).
double integrate(const PatchXd& p);

// de Casteljau subdivision at t in (0,1); both halves reparameterized to [0,1].
template <class Value>
std::pair<BezierPatch<Value>, BezierPatch<Value>> split(const BezierPatch<Value>& p,
                                                        Dir dir, double t);

// 3x3 control sub-net of a uniform bi-quadratic B-spline; c(i,j), i along u.
template <class Value>
class Bi2Net {
 public:
  Bi2Net() : c_(9, zero_value<Value>()) {}
  Value& at(int i, int j) { return c_[i * 3 + j]; }
  const Value& at(int i, int j) const { return c_[i * 3 + j]; }

 private:
  std::vector<Value> c_;
};

// BB-form of the single polynomial piece the 3x3 net defines on its central
// knot interval: per direction [ (c0+c1)/2, c1, (c1+c2)/2 ].
template <class Value>
BezierPatch<Value> bi2_to_bb(const Bi2Net<Value>& net);

}  // namespace polysurf
