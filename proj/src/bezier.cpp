#include "polysurf/bezier.hpp"

#include <cmath>

namespace polysurf {

namespace {

template <class Value>
Value lerp(const Value& a, const Value& b, double t) {
  return (1.0 - t) * a + t * b;
}

template <class Value>
Value de_casteljau_line(std::vector<Value> b, double t) {
  for (size_t n = b.size() - 1; n > 0; --n)
    for (size_t i = 0; i < n; ++i) b[i] = lerp(b[i], b[i + 1], t);
  return b[0];
}

template <class Value>
BezierPatch<Value> raise_dir(const BezierPatch<Value>& p, Dir dir) {
  int d1 = p.degree_u(), d2 = p.degree_v();
  if (dir == Dir::U) {
    BezierPatch<Value> r(d1 + 1, d2);
    for (int j = 0; j <= d2; ++j) {
      r.at(0, j) = p.at(0, j);
      r.at(d1 + 1, j) = p.at(d1, j);
      for (int i = 1; i <= d1; ++i) {
        double a = double(i) / (d1 + 1);
        r.at(i, j) = a * p.at(i - 1, j) + (1.0 - a) * p.at(i, j);
      }
    }
    return r;
  }
  BezierPatch<Value> r(d1, d2 + 1);
  for (int i = 0; i <= d1; ++i) {
    r.at(i, 0) = p.at(i, 0);
    r.at(i, d2 + 1) = p.at(i, d2);
    for (int j = 1; j <= d2; ++j) {
      double a = double(j) / (d2 + 1);
      r.at(i, j) = a * p.at(i, j - 1) + (1.0 - a) * p.at(i, j);
    }
  }
  return r;
}

template <class Value>
void split_line(const std::vector<Value>& b, double t, std::vector<Value>& left,
                std::vector<Value>& right) {
  size_t d = b.size() - 1;
  std::vector<Value> w = b;
  left.clear();
  right.clear();
  left.push_back(w[0]);
  right.push_back(w[d]);
  for (size_t step = 1; step <= d; ++step) {
    for (size_t i = 0; i + step <= d; ++i) w[i] = lerp(w[i], w[i + 1], t);
    left.push_back(w[0]);
    right.push_back(w[d - step]);
  }
  std::reverse(right.begin(), right.end());
}

}  // namespace

template <class Value>
Value eval(const BezierPatch<Value>& p, double u, double v) {
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
    throw std::domain_error("eval: parameters outside [0,1]^2");
  std::vector<Value> col(p.rows(), zero_value<Value>());
  std::vector<Value> row(p.cols(), zero_value<Value>());
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = 0; j < p.cols(); ++j) row[j] = p.at(i, j);
    col[i] = de_casteljau_line(row, v);
  }
  return de_casteljau_line(col, u);
}

template <class Value>
BezierPatch<Value> partial_derivative(const BezierPatch<Value>& p, Dir dir) {
  int d1 = p.degree_u(), d2 = p.degree_v();
  if (dir == Dir::U) {
    if (d1 < 1) throw std::invalid_argument("partial_derivative: degree 0 in u");
    BezierPatch<Value> r(d1 - 1, d2);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j <= d2; ++j) r.at(i, j) = double(d1) * (p.at(i + 1, j) - p.at(i, j));
    return r;
  }
  if (d2 < 1) throw std::invalid_argument("partial_derivative: degree 0 in v");
  BezierPatch<Value> r(d1, d2 - 1);
  for (int i = 0; i <= d1; ++i)
    for (int j = 0; j < d2; ++j) r.at(i, j) = double(d2) * (p.at(i, j + 1) - p.at(i, j));
  return r;
}

template <class Value>
BezierPatch<Value> degree_raise(const BezierPatch<Value>& p) {
  return raise_dir(raise_dir(p, Dir::U), Dir::V);
}

template <class Value>
BezierPatch<Value> raise_to(const BezierPatch<Value>& p, int d1, int d2) {
  if (d1 < p.degree_u() || d2 < p.degree_v())
    throw std::invalid_argument("raise_to: target degree below current");
  BezierPatch<Value> r = p;
  while (r.degree_u() < d1) r = raise_dir(r, Dir::U);
  while (r.degree_v() < d2) r = raise_dir(r, Dir::V);
  return r;
}

double integrate(const PatchXd& p) {
  double s = 0;
  for (double c : p.coeffs()) s += c;
  return s / (p.rows() * p.cols());
}

template <class Value>
std::pair<BezierPatch<Value>, BezierPatch<Value>> split(const BezierPatch<Value>& p, Dir dir,
                                                        double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("split: t outside (0,1)");
  int d1 = p.degree_u(), d2 = p.degree_v();
  BezierPatch<Value> a(d1, d2), b(d1, d2);
  std::vector<Value> line, l, r;
  if (dir == Dir::U) {
    line.resize(d1 + 1);
    for (int j = 0; j <= d2; ++j) {
      for (int i = 0; i <= d1; ++i) line[i] = p.at(i, j);
      split_line(line, t, l, r);
      for (int i = 0; i <= d1; ++i) {
        a.at(i, j) = l[i];
        b.at(i, j) = r[i];
      }
    }
  } else {
    line.resize(d2 + 1);
    for (int i = 0; i <= d1; ++i) {
      for (int j = 0; j <= d2; ++j) line[j] = p.at(i, j);
      split_line(line, t, l, r);
      for (int j = 0; j <= d2; ++j) {
        a.at(i, j) = l[j];
        b.at(i, j) = r[j];
      }
    }
  }
  return {a, b};
}

template <class Value>
BezierPatch<Value> bi2_to_bb(const Bi2Net<Value>& net) {
  BezierPatch<Value> mid(2, 2);
  // u-direction conversion into a temporary 3x3, then v-direction
  Value tmp[3][3];
  for (int j = 0; j < 3; ++j) {
    tmp[0][j] = 0.5 * (net.at(0, j) + net.at(1, j));
    tmp[1][j] = net.at(1, j);
    tmp[2][j] = 0.5 * (net.at(1, j) + net.at(2, j));
  }
  for (int i = 0; i < 3; ++i) {
    mid.at(i, 0) = 0.5 * (tmp[i][0] + tmp[i][1]);
    mid.at(i, 1) = tmp[i][1];
    mid.at(i, 2) = 0.5 * (tmp[i][1] + tmp[i][2]);
  }
  return mid;
}

#define POLYSURF_INSTANTIATE(V)                                                              \
  template V eval<V>(const BezierPatch<V>&, double, double);                                 \
  template BezierPatch<V> partial_derivative<V>(const BezierPatch<V>&, Dir);                 \
  template BezierPatch<V> degree_raise<V>(const BezierPatch<V>&);                            \
  template BezierPatch<V> raise_to<V>(const BezierPatch<V>&, int, int);                      \
  template std::pair<BezierPatch<V>, BezierPatch<V>> split<V>(const BezierPatch<V>&, Dir,    \
                                                              double);                       \
  template BezierPatch<V> bi2_to_bb<V>(const Bi2Net<V>&);

POLYSURF_INSTANTIATE(double)
POLYSURF_INSTANTIATE(Vec3)
#undef POLYSURF_INSTANTIATE

}  // namespace polysurf
