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
 * \file distance_jacobians.hpp
 * \brief Distances between one robot-driven primitive and one static primitive,
 *        each paired with the 1 x n row J_d such that d-dot = J_d q-dot.
 *
 * Every Jacobian except the point-plane one divides by a distance. Those
 * configurations raise SingularDistanceError instead of returning infinities.
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dqvfi/dual_quaternion.hpp"
#include "dqvfi/geometry.hpp"
#include "dqvfi/kinematics.hpp"

namespace dqvfi {

enum class PairKind { point_plane, line_point, point_line, line_line };

inline const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::point_plane: return "point-plane";
    case PairKind::line_point: return "line-point";
    case PairKind::point_line: return "point-line";
    case PairKind::line_line: return "line-line";
  }
  return "unknown";
}

/// Which formula produced a line-line distance.
enum class LineBranch { none, non_parallel, parallel };

template <typename Scalar>
struct DistancePair {
  Scalar d{0};
  RowVectorX<Scalar> J;
  PairKind kind{PairKind::point_plane};
  LineBranch branch{LineBranch::none};
  /// Non-parallel line Jacobian evaluated close to the parallel threshold.
  bool low_confidence{false};
  /// d and J refer to the squared distance (fallback at zero distance).
  bool squared{false};
};

class SingularDistanceError : public std::domain_error {
 public:
  SingularDistanceError(PairKind kind, LineBranch branch, const std::string& what)
      : std::domain_error(what), kind_(kind), branch_(branch) {}
  PairKind kind() const { return kind_; }
  LineBranch branch() const { return branch_; }

 private:
  PairKind kind_;
  LineBranch branch_;
};

/// Distances below this are singular for the Jacobians that divide by them.
inline constexpr double kSingularDistance = 1e-12;

/// Inside [kParallelThreshold, kLowConfidenceSine) the non-parallel line Jacobian is flagged.
inline constexpr double kLowConfidenceSine = 1e-4;

struct DistanceOptions {
  /// Report d^2 and its Jacobian instead of raising at zero line-point/point-line distance.
  bool squared_distance_fallback{false};
};

template <typename Scalar, typename Derived>
DistancePair<Scalar> point_plane(const Eigen::MatrixBase<Derived>& J_t, const Point<Scalar>& t,
                                 const Plane<Scalar>& plane) {
  DistancePair<Scalar> out;
  out.kind = PairKind::point_plane;
  out.d = point_plane_distance(t, plane);
  out.J = vec4(plane.normal()).transpose() * J_t;
  return out;
}

template <typename Scalar>
DistancePair<Scalar> line_point(const LineJacobian<Scalar>& lz, const Point<Scalar>& p,
                                const DistanceOptions& options = {}) {
  const Quaternion<Scalar> v = cross(p, lz.line.direction()) - lz.line.moment();
  const Matrix4X<Scalar> dv = crossmatrix(p) * lz.direction_jacobian() - lz.moment_jacobian();
  DistancePair<Scalar> out;
  out.kind = PairKind::line_point;
  out.d = v.norm();
  if (out.d < Scalar(kSingularDistance)) {
    if (!options.squared_distance_fallback)
      throw SingularDistanceError(PairKind::line_point, LineBranch::none, "line-point distance is zero");
    out.d = v.squared_norm();
    out.J = Scalar(2) * vec4(v).transpose() * dv;
    out.squared = true;
    return out;
  }
  out.J = vec4(v).transpose() * dv / out.d;
  return out;
}

template <typename Scalar, typename Derived>
DistancePair<Scalar> point_line(const Eigen::MatrixBase<Derived>& J_t, const Point<Scalar>& t,
                                const PluckerLine<Scalar>& l, const DistanceOptions& options = {}) {
  const Quaternion<Scalar> v = cross(t, l.direction()) - l.moment();
  const Matrix4X<Scalar> dv = crossmatrix(l.direction()).transpose() * J_t;
  DistancePair<Scalar> out;
  out.kind = PairKind::point_line;
  out.d = v.norm();
  if (out.d < Scalar(kSingularDistance)) {
    if (!options.squared_distance_fallback)
      throw SingularDistanceError(PairKind::point_line, LineBranch::none, "point-line distance is zero");
    out.d = v.squared_norm();
    out.J = Scalar(2) * vec4(v).transpose() * dv;
    out.squared = true;
    return out;
  }
  out.J = vec4(v).transpose() * dv / out.d;
  return out;
}

/// Jacobian of <lz, l> for a static l: -(H8+(l) + H8-(l)) J_lz / 2.
template <typename Scalar, typename Derived>
Matrix8X<Scalar> inner_product_jacobian(const Eigen::MatrixBase<Derived>& J_lz, const PluckerLine<Scalar>& l) {
  const DualQuaternion<Scalar> ldq = l.dq();
  return Scalar(-0.5) * (hamilton_plus(ldq) + hamilton_minus(ldq)) * J_lz;
}

/// Jacobian of lz x l for a static l: (H8-(l) - H8+(l)) J_lz / 2.
template <typename Scalar, typename Derived>
Matrix8X<Scalar> cross_product_jacobian(const Eigen::MatrixBase<Derived>& J_lz, const PluckerLine<Scalar>& l) {
  const DualQuaternion<Scalar> ldq = l.dq();
  return Scalar(0.5) * (hamilton_minus(ldq) - hamilton_plus(ldq)) * J_lz;
}

/// Line-line distance and Jacobian, dispatched on |sin(phi)| like line_line_distance.
template <typename Scalar>
DistancePair<Scalar> line_line(const LineJacobian<Scalar>& lz, const PluckerLine<Scalar>& l) {
  DistancePair<Scalar> out;
  out.kind = PairKind::line_line;

  const DualQuaternion<Scalar> cr = line_cross(lz.line, l);
  const Matrix8X<Scalar> J_cross = cross_product_jacobian(lz.jacobian, l);
  const Scalar sin_phi = cr.primary().norm();

  if (sin_phi < Scalar(kParallelThreshold)) {
    out.branch = LineBranch::parallel;
    out.d = cr.dual().norm();
    if (out.d < Scalar(kSingularDistance))
      throw SingularDistanceError(PairKind::line_line, LineBranch::parallel, "line-line distance: coincident lines");
    out.J = norm_derivative_row(cr.dual(), J_cross.bottomRows(4));
    return out;
  }

  out.branch = LineBranch::non_parallel;
  out.low_confidence = sin_phi < Scalar(kLowConfidenceSine);
  const DualQuaternion<Scalar> ip = inner(lz.line.dq(), l.dq());
  const Scalar dual_norm = ip.dual().norm();
  if (dual_norm < Scalar(kSingularDistance))
    throw SingularDistanceError(PairKind::line_line, LineBranch::non_parallel,
                                "line-line distance: intersecting lines");
  const Matrix8X<Scalar> J_inner = inner_product_jacobian(lz.jacobian, l);
  const RowVectorX<Scalar> J_dual_norm = norm_derivative_row(ip.dual(), J_inner.bottomRows(4));
  const RowVectorX<Scalar> J_sin = norm_derivative_row(cr.primary(), J_cross.topRows(4));
  const Scalar a = Scalar(1) / sin_phi;
  const Scalar b = -dual_norm / (sin_phi * sin_phi);
  out.d = dual_norm / sin_phi;
  out.J = a * J_dual_norm + b * J_sin;
  return out;
}

}  // namespace dqvfi
