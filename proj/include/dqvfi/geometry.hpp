/*
 * Copyright 2026 The dqvfi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * \file geometry.hpp
 * \brief Points, Pluecker lines and planes, and the static distances between them.
 *
 * Points are pure quaternions. A line is the pure unit dual quaternion
 * l + eps m with m = p x l; a plane is a unit normal plus the signed offset
 * of the plane from the origin along that normal.
 */

#pragma once

#include <cmath>
#include <stdexcept>

#include "dqvfi/dual_quaternion.hpp"

namespace dqvfi {

template <typename Scalar> using Point = Quaternion<Scalar>;

inline constexpr double kUnitTolerance = 1e-10;

/// Below this |sin(phi)| two lines are handled as parallel.
inline constexpr double kParallelThreshold = 1e-6;

template <typename Scalar>
class PluckerLine {
 public:
  PluckerLine() : direction_(Quaternion<Scalar>::k()) {}

  /// Validates the Pluecker constraints.
  PluckerLine(const Quaternion<Scalar>& direction, const Quaternion<Scalar>& moment)
      : direction_(direction), moment_(moment) {
    using std::abs;
    if (!direction.is_pure() || !moment.is_pure()) throw NotPureError("PluckerLine: direction and moment must be pure");
    if (abs(direction.norm() - Scalar(1)) > Scalar(kUnitTolerance))
      throw std::invalid_argument("PluckerLine: direction must have unit norm");
    if (abs(direction.coeffs().dot(moment.coeffs())) > Scalar(kUnitTolerance) * (Scalar(1) + moment.norm()))
      throw std::invalid_argument("PluckerLine: moment must be orthogonal to direction");
  }

  explicit PluckerLine(const DualQuaternion<Scalar>& l) : PluckerLine(l.primary(), l.dual()) {}

  const Quaternion<Scalar>& direction() const { return direction_; }
  const Quaternion<Scalar>& moment() const { return moment_; }
  DualQuaternion<Scalar> dq() const { return DualQuaternion<Scalar>(direction_, moment_); }

  /// Point of the line closest to the origin, l x m.
  Point<Scalar> closest_point_to_origin() const { return cross(direction_, moment_); }

 private:
  Quaternion<Scalar> direction_;
  Quaternion<Scalar> moment_;
};

template <typename Scalar>
class Plane {
 public:
  Plane() : normal_(Quaternion<Scalar>::k()) {}
  Plane(const Quaternion<Scalar>& normal, Scalar offset) : normal_(normal), offset_(offset) {
    using std::abs;
    if (!normal.is_pure()) throw NotPureError("Plane: normal must be pure");
    if (abs(normal.norm() - Scalar(1)) > Scalar(kUnitTolerance))
      throw std::invalid_argument("Plane: normal must have unit norm");
  }

  const Quaternion<Scalar>& normal() const { return normal_; }
  Scalar offset() const { return offset_; }
  DualQuaternion<Scalar> dq() const { return DualQuaternion<Scalar>(normal_, Quaternion<Scalar>(offset_)); }

 private:
  Quaternion<Scalar> normal_;
  Scalar offset_{0};
};

template <typename Scalar>
PluckerLine<Scalar> line_from(const Point<Scalar>& point, const Quaternion<Scalar>& direction) {
  using std::abs;
  if (!point.is_pure()) throw NotPureError("line_from: point must be pure");
  if (!direction.is_pure()) throw NotPureError("line_from: direction must be pure");
  if (abs(direction.norm() - Scalar(1)) > Scalar(kUnitTolerance))
    throw std::invalid_argument("line_from: direction must have unit norm");
  return PluckerLine<Scalar>(direction, cross(point, direction));
}

template <typename Scalar>
Plane<Scalar> plane_from(const Point<Scalar>& point, const Quaternion<Scalar>& normal) {
  using std::abs;
  if (!normal.is_pure()) throw NotPureError("plane_from: normal must be pure");
  if (abs(normal.norm() - Scalar(1)) > Scalar(kUnitTolerance))
    throw std::invalid_argument("plane_from: normal must have unit norm");
  return Plane<Scalar>(normal, inner(point, normal));
}

/// Applies a rigid motion to a line, x l x*.
template <typename Scalar>
PluckerLine<Scalar> transform_line(const DualQuaternion<Scalar>& x, const PluckerLine<Scalar>& l) {
  const DualQuaternion<Scalar> out = x * l.dq() * x.conjugate();
  // strip round-off from the real parts
  return PluckerLine<Scalar>(out.primary().im(), out.dual().im());
}

/// Signed; positive on the side the normal points to.
template <typename Scalar>
Scalar point_plane_distance(const Point<Scalar>& t, const Plane<Scalar>& plane) {
  return inner(t, plane.normal()) - plane.offset();
}

/// ||t x l - m||
template <typename Scalar>
Scalar point_line_distance(const Point<Scalar>& t, const PluckerLine<Scalar>& l) {
  return (cross(t, l.direction()) - l.moment()).norm();
}

/// Dual cosine <lz, l> = cos(phi) - eps d sin(phi).
template <typename Scalar>
DualScalar<Scalar> line_inner(const PluckerLine<Scalar>& lz, const PluckerLine<Scalar>& l) {
  const DualQuaternion<Scalar> ip = inner(lz.dq(), l.dq());
  return {ip.primary().re(), ip.dual().re()};
}

/// lz x l = s sin(phi) + eps (m_s sin(phi) + s d cos(phi)), s the common perpendicular.
template <typename Scalar>
DualQuaternion<Scalar> line_cross(const PluckerLine<Scalar>& lz, const PluckerLine<Scalar>& l) {
  return cross(lz.dq(), l.dq());
}

/// Angle between the line directions, arccos P(<l, lz>), in [0, pi].
template <typename Scalar>
Scalar line_angle(const PluckerLine<Scalar>& lz, const PluckerLine<Scalar>& l) {
  using std::atan2;
  const Scalar c = line_inner(lz, l).primary;
  const Scalar s = line_cross(lz, l).primary().norm();
  return atan2(s, c);
}

template <typename Scalar>
bool lines_parallel(const PluckerLine<Scalar>& lz, const PluckerLine<Scalar>& l) {
  return line_cross(lz, l).primary().norm() < Scalar(kParallelThreshold);
}

/// Unsigned distance between two lines. The non-parallel branch divides the dual part of
/// the dual cosine by |sin(phi)|; the parallel branch reads the dual part of the cross product.
template <typename Scalar>
Scalar line_line_distance(const PluckerLine<Scalar>& lz, const PluckerLine<Scalar>& l) {
  using std::abs;
  const DualQuaternion<Scalar> c = line_cross(lz, l);
  const Scalar sin_phi = c.primary().norm();
  if (sin_phi < Scalar(kParallelThreshold)) return c.dual().norm();
  return abs(line_inner(lz, l).dual) / sin_phi;
}

}  // namespace dqvfi
