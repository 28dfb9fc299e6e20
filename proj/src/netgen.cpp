#include "polysurf/netgen.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace polysurf::netgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deduplicates vertices by quantized position so replacement faces can refer
// to grid vertices by coordinate.
class NetBuilder {
 public:
  int at(const Vec3& p) {
    Key k{llq(p.x()), llq(p.y()), llq(p.z())};
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    int id = int(net_.vertices.size());
    net_.vertices.push_back(p);
    index_.emplace(k, id);
    return id;
  }

  void face(std::vector<int> corners) { net_.faces.push_back(std::move(corners)); }

  void face_at(std::initializer_list<Vec3> corners) {
    std::vector<int> ids;
    for (const Vec3& p : corners) ids.push_back(at(p));
    face(std::move(ids));
  }

  ControlNet take() { return std::move(net_); }

 private:
  using Key = std::tuple<long long, long long, long long>;
  static long long llq(double v) { return llround(v * 1e8); }

  ControlNet net_;
  std::map<Key, int> index_;
};

Vec3 ring_pt(double radius, double angle, double z = 0) {
  return {radius * std::cos(angle), radius * std::sin(angle), z};
}

}  // namespace

ControlNet grid(int m) {
  if (m < 1) throw std::invalid_argument("grid: need m >= 1");
  const double h = 2.0 / (m - 1);
  const double base = -1 - h / 2;
  ControlNet net;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) net.vertices.push_back({base + i * h, base + j * h, 0});
  auto v = [m](int i, int j) { return j * (m + 1) + i; };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i)
      net.faces.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)});
  return net;
}

ControlNet cube() {
  ControlNet net;
  net.vertices = {{-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
                  {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1}};
  net.faces = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
               {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};
  return net;
}

ControlNet star_disk(int n) {
  if (n < 3) throw std::invalid_argument("star_disk: need n >= 3");
  NetBuilder b;
  const double step = 2 * kPi / n;
  auto s = [&](int i) { return ring_pt(1.0, i * step); };
  auto d = [&](int i) { return ring_pt(1.35, (i + 0.5) * step); };
  auto ring1 = [&](int k) { return (k % 2 == 0) ? s(k / 2) : d(k / 2); };
  auto r2 = [&](int k) { return ring_pt(2.0, k * step / 2); };
  auto r3 = [&](int k) { return ring_pt(3.0, k * step / 2); };
  const Vec3 center = Vec3::Zero();
  for (int i = 0; i < n; ++i) b.face_at({center, s(i), d(i), s(i + 1)});
  for (int k = 0; k < 2 * n; ++k) b.face_at({ring1(k + 1), ring1(k), r2(k), r2(k + 1)});
  for (int k = 0; k < 2 * n; ++k) b.face_at({r2(k + 1), r2(k), r3(k), r3(k + 1)});
  return b.take();
}

ControlNet ngon_disk(int n, int rings) {
  if (n < 3) throw std::invalid_argument("ngon_disk: need n >= 3");
  if (rings < 1) throw std::invalid_argument("ngon_disk: need rings >= 1");
  NetBuilder b;
  const double step = 2 * kPi / n;
  const double da = step / 8;          // corner-attachment spread on ring A
  const double db = 2 * kPi / (6 * n); // spacing on the kite-doubled ring B
  auto v = [&](int i) { return ring_pt(1.0, i * step); };
  auto sm = [&](int i) { return ring_pt(1.9, i * step - da); };
  auto d = [&](int i) { return ring_pt(1.9, i * step); };
  auto sp = [&](int i) { return ring_pt(1.9, i * step + da); };
  auto c = [&](int i, int j) { return ring_pt(2.8, i * step + (j - 2) * db); };

  std::vector<int> ngon;
  for (int i = 0; i < n; ++i) ngon.push_back(b.at(v(i)));
  b.face(ngon);
  for (int i = 0; i < n; ++i) {
    b.face_at({v(i + 1), v(i), sp(i), sm(i + 1)});
    b.face_at({v(i), sm(i), d(i), sp(i)});
  }
  if (rings >= 2) {
    for (int i = 0; i < n; ++i) {
      b.face_at({d(i), sm(i), c(i, 0), c(i, 1)});
      b.face_at({d(i), c(i, 1), c(i, 2), c(i, 3)});  // kite keeps d 4-valent
      b.face_at({sp(i), d(i), c(i, 3), c(i, 4)});
      b.face_at({sm(i + 1), sp(i), c(i, 4), c(i + 1, 0)});
    }
    for (int r = 3; r <= rings; ++r) {
      const double rad_in = 2.8 + 0.9 * (r - 3), rad_out = rad_in + 0.9;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < 5; ++j) {
          double a0 = i * step + (j - 2) * db;
          double a1 = (j == 4) ? (i + 1) * step - 2 * db : a0 + db;
          b.face_at({ring_pt(rad_in, a1), ring_pt(rad_in, a0), ring_pt(rad_out, a0),
                     ring_pt(rad_out, a1)});
        }
    }
  }
  return b.take();
}

ControlNet polar_cone(int m, double height) {
  if (m < 3) throw std::invalid_argument("polar_cone: need m >= 3");
  NetBuilder b;
  const double step = 2 * kPi / m;
  const Vec3 apex{0, 0, height};
  auto ring = [&](int r, int i) { return ring_pt(0.7 * r, i * step); };
  for (int i = 0; i < m; ++i) b.face_at({apex, ring(1, i), ring(1, i + 1)});
  for (int r = 1; r <= 2; ++r)
    for (int i = 0; i < m; ++i)
      b.face_at({ring(r, i + 1), ring(r, i), ring(r + 1, i), ring(r + 1, i + 1)});
  return b.take();
}

ControlNet grid16_with(Insert kind) {
  const int m = 16;
  const double h = 2.0 / (m - 1);
  const double base = -1 - h / 2;
  NetBuilder b;
  // half-step lattice: even coordinates are grid vertices
  auto P = [&](int cx, int cy) { return Vec3(base + cx * h / 2, base + cy * h / 2, 0); };
  auto quad = [&](int x0, int y0, int x1, int y1) {
    b.face_at({P(x0, y0), P(x1, y0), P(x1, y1), P(x0, y1)});
  };

  const bool split_col = kind == Insert::T0 || kind == Insert::T1Add || kind == Insert::T2Add;
  const bool wide_col = kind == Insert::T1Sub || kind == Insert::T2Sub;
  const bool split_row = kind == Insert::T2Add;
  const bool tall_row = kind == Insert::T2Sub;
  const bool polar = kind == Insert::Polar4 || kind == Insert::Polar8;

  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const int x0 = 2 * i, y0 = 2 * j, x1 = x0 + 2, y1 = y0 + 2;
      if (polar && (i == 7 || i == 8) && (j == 7 || j == 8)) {
        continue;  // the four cells around the pole are emitted below
      }
      if (split_col && i == 8 && j < 8) {
        quad(x0, y0, 17, y1);
        quad(17, y0, x1, y1);
      } else if (split_row && j == 8 && i < 8) {
        quad(x0, y0, x1, 17);
        quad(x0, 17, x1, y1);
      } else if (kind == Insert::T1Add && i == 8 && j == 8) {
        b.face_at({P(16, 16), P(17, 16), P(18, 16), P(18, 18), P(16, 18)});
      } else if (kind == Insert::T0 && i == 8 && j == 8) {
        b.face_at({P(16, 16), P(17, 16), P(16, 18)});
        b.face_at({P(17, 16), P(18, 16), P(18, 18), P(16, 18)});
      } else if (kind == Insert::T2Add && i == 8 && j == 8) {
        b.face_at({P(16, 16), P(17, 16), P(18, 16), P(18, 18), P(16, 18), P(16, 17)});
      } else if (wide_col && i == 7 && j < 7) {
        quad(x0, y0, 18, y1);
      } else if (wide_col && i == 8 && j < 7) {
        // merged into the previous column
      } else if (kind == Insert::T1Sub && i == 7 && j == 7) {
        b.face_at({P(14, 14), P(18, 14), P(18, 16), P(16, 16), P(14, 16)});
      } else if (kind == Insert::T1Sub && i == 8 && j == 7) {
        // merged into the pentagon
      } else if (tall_row && j == 7 && i < 7) {
        quad(x0, y0, x1, 18);
      } else if (tall_row && j == 8 && i < 7) {
        // merged into the previous row
      } else if (kind == Insert::T2Sub && (i == 7 || i == 8) && (j == 7 || j == 8)) {
        if (i == 7 && j == 7)
          b.face_at({P(14, 14), P(18, 14), P(18, 16), P(18, 18), P(16, 18), P(14, 18)});
      } else {
        quad(x0, y0, x1, y1);
      }
    }
  }

  if (kind == Insert::Polar4) {
    const Vec3 pole = P(16, 16);
    auto R = [&](int i) { return ring_pt(0.3 * h * std::sqrt(2.0), kPi / 4 + i * kPi / 2); };
    auto t = [&](int i) { return ring_pt(0.6 * h * std::sqrt(2.0), kPi / 4 + i * kPi / 2); };
    auto g = [&](int k) {  // surrounding grid ring, CCW from the (+,+) corner
      static const int dx[] = {2, 0, -2, -2, -2, 0, 2, 2};
      static const int dy[] = {2, 2, 2, 0, -2, -2, -2, 0};
      return P(16 + dx[k % 8], 16 + dy[k % 8]);
    };
    for (int i = 0; i < 4; ++i) b.face_at({pole, R(i), R(i + 1)});
    for (int i = 0; i < 4; ++i) b.face_at({R(i + 1), R(i), t(i), t(i + 1)});
    b.face_at({t(0), g(7), g(0), g(1)});
    b.face_at({t(0), g(1), g(2), t(1)});
    b.face_at({t(1), g(2), g(3), t(2)});
    b.face_at({t(2), g(3), g(4), g(5)});
    b.face_at({t(2), g(5), g(6), t(3)});
    b.face_at({t(3), g(6), g(7), t(0)});
  } else if (kind == Insert::Polar8) {
    const Vec3 pole = P(16, 16);
    auto r = [&](int i) { return ring_pt(0.45 * h, i * kPi / 4); };
    auto g = [&](int k) {
      static const int dx[] = {2, 2, 0, -2, -2, -2, 0, 2};
      static const int dy[] = {0, 2, 2, 2, 0, -2, -2, -2};
      return P(16 + dx[k % 8], 16 + dy[k % 8]);
    };
    for (int i = 0; i < 8; ++i) b.face_at({pole, r(i), r(i + 1)});
    for (int i = 0; i < 8; ++i) b.face_at({r(i + 1), r(i), g(i), g(i + 1)});
  }

  return b.take();
}

ControlNet opener() {
  NetBuilder b;
  // octagonal tube sections, then a kite transition to a 10-gon, capped by a
  // polar fan at one end and a 2x3 quad patch at the other
  const double z8[] = {-1.0, -0.45, 0.15, 0.75, 1.35};
  const double r8[] = {0.6, 0.95, 1.0, 1.0, 1.0};
  const double zT = 0.45;  // partial ring splitting tube band 2->3
  const double z10[] = {1.95, 2.55, 3.1};
  const double r10[] = {1.0, 1.0, 0.8};
  const Vec3 apex{0, 0, -1.6};
  const double capz = 3.5, phi0 = 213.0 / 180.0 * kPi;

  auto v8 = [&](int j, int c) { return ring_pt(r8[c], j * kPi / 4, z8[c]); };
  auto vT = [&](int j) { return ring_pt(1.0, j * kPi / 4, zT); };
  auto v10 = [&](int k, int c) { return ring_pt(r10[c], phi0 + k * kPi / 5, z10[c]); };
  auto cap = [&](int r, int c) { return Vec3(-0.66 + 0.44 * c, -0.44 + 0.44 * r, capz); };

  for (int j = 0; j < 8; ++j) b.face_at({apex, v8(j + 1, 0), v8(j, 0)});
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < 8; ++j)
      b.face_at({v8(j, c), v8(j + 1, c), v8(j + 1, c + 1), v8(j, c + 1)});
  // band 2 -> 3 carries a five-vertex partial ring ending in two pentagons
  for (int j = 0; j < 4; ++j) {
    b.face_at({v8(j, 2), v8(j + 1, 2), vT(j + 1), vT(j)});
    b.face_at({vT(j), vT(j + 1), v8(j + 1, 3), v8(j, 3)});
  }
  b.face_at({v8(4, 2), v8(5, 2), v8(5, 3), v8(4, 3), vT(4)});
  for (int j = 5; j < 7; ++j)
    b.face_at({v8(j, 2), v8(j + 1, 2), v8(j + 1, 3), v8(j, 3)});
  b.face_at({v8(7, 2), v8(8, 2), vT(0), v8(8, 3), v8(7, 3)});
  for (int j = 0; j < 8; ++j)
    b.face_at({v8(j, 3), v8(j + 1, 3), v8(j + 1, 4), v8(j, 4)});
  // kite widens the cross-section from 8 to 10
  b.face_at({v8(0, 4), v10(1, 0), v10(0, 0), v10(9, 0)});
  for (int j = 0; j < 8; ++j)
    b.face_at({v8(j, 4), v8(j + 1, 4), v10(j + 2, 0), v10(j + 1, 0)});
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < 10; ++k)
      b.face_at({v10(k, c), v10(k + 1, c), v10(k + 1, c + 1), v10(k, c + 1)});

  const std::pair<int, int> pb[] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 3},
                                    {2, 3}, {2, 2}, {2, 1}, {2, 0}, {1, 0}};
  for (int k = 0; k < 10; ++k)
    b.face_at({v10(k, 2), v10(k + 1, 2), cap(pb[(k + 1) % 10].first, pb[(k + 1) % 10].second),
               cap(pb[k].first, pb[k].second)});
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c)
      b.face_at({cap(r, c), cap(r, c + 1), cap(r + 1, c + 1), cap(r + 1, c)});
  return b.take();
}

}  // namespace polysurf::netgen
