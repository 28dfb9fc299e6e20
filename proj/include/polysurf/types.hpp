#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace polysurf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Symmetric by construction (assembled once per unordered pair, mirrored).
using SparseSymmetricMatrix = Eigen::SparseMatrix<double>;

namespace detail {
template <class V>
struct ZeroOf {
  static V value() { return V{}; }
};
template <>
struct ZeroOf<Vec3> {
  static Vec3 value() { return Vec3::Zero(); }
};
}  // namespace detail

template <class V>
V zero_value() {
  return detail::ZeroOf<V>::value();
}

}  // namespace polysurf
