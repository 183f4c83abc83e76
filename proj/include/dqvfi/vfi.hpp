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
 * \file vfi.hpp
 * \brief Vector field inequality rows.
 *
 * With the distance error dt (positive in the allowed region) every row encodes
 * d/dt(dt) >= -eta_d dt. In the split-velocity form used by the linear program,
 * q-dot = q-dot_P - q-dot_N, a row reads w (q-dot_P - q-dot_N) + z = eta_d dt with
 * the slack z >= 0, i.e. w q-dot <= eta_d dt:
 *
 *   keep-out: dt = d - d_safe, w = -J_d
 *   keep-in:  dt = d_safe - d, w = +J_d
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dqvfi/distance_jacobians.hpp"
#include "dqvfi/kinematics.hpp"

namespace dqvfi {

enum class ZoneDirection { keep_out, keep_in };

inline const char* to_string(ZoneDirection d) { return d == ZoneDirection::keep_out ? "keep_out" : "keep_in"; }

template <typename Scalar>
struct ZoneSpec {
  ZoneDirection direction{ZoneDirection::keep_out};
  Scalar d_safe{0};
  Scalar eta_d{0.5};

  void validate() const {
    if (!(eta_d > Scalar(0))) throw std::invalid_argument("ZoneSpec: eta_d must be positive");
    if (!(d_safe >= Scalar(0))) throw std::invalid_argument("ZoneSpec: d_safe must be non-negative");
  }

  /// Signed margin, positive in the allowed region.
  Scalar distance_error(Scalar d) const { return direction == ZoneDirection::keep_out ? d - d_safe : d_safe - d; }
};

/// One inequality w (q-dot_P - q-dot_N) + z = rhs over the 2n split velocities.
template <typename Scalar>
struct ConstraintRow {
  RowVectorX<Scalar> w_row;  ///< 1 x 2n, (w, -w)
  Scalar rhs{0};

  Eigen::Index dof() const { return w_row.size() / 2; }
  /// The w acting on q-dot itself.
  RowVectorX<Scalar> velocity_row() const { return w_row.head(dof()); }
  /// Whether q-dot satisfies w q-dot <= rhs + tol.
  bool satisfied_by(const VectorX<Scalar>& qdot, Scalar tol = Scalar(0)) const {
    return velocity_row().dot(qdot) <= rhs + tol;
  }
};

namespace detail {

template <typename Scalar>
ConstraintRow<Scalar> split_row(const RowVectorX<Scalar>& w, Scalar rhs) {
  ConstraintRow<Scalar> row;
  row.w_row.resize(2 * w.size());
  row.w_row << w, -w;
  row.rhs = rhs;
  return row;
}

}  // namespace detail

template <typename Scalar>
ConstraintRow<Scalar> keep_out_row(const DistancePair<Scalar>& pair, const ZoneSpec<Scalar>& spec) {
  if (spec.direction != ZoneDirection::keep_out) throw std::invalid_argument("keep_out_row: zone is not keep-out");
  spec.validate();
  return detail::split_row<Scalar>(-pair.J, spec.eta_d * (pair.d - spec.d_safe));
}

template <typename Scalar>
ConstraintRow<Scalar> keep_in_row(const DistancePair<Scalar>& pair, const ZoneSpec<Scalar>& spec) {
  if (spec.direction != ZoneDirection::keep_in) throw std::invalid_argument("keep_in_row: zone is not keep-in");
  spec.validate();
  return detail::split_row<Scalar>(pair.J, spec.eta_d * (spec.d_safe - pair.d));
}

template <typename Scalar>
ConstraintRow<Scalar> zone_row(const DistancePair<Scalar>& pair, const ZoneSpec<Scalar>& spec) {
  return spec.direction == ZoneDirection::keep_out ? keep_out_row(pair, spec) : keep_in_row(pair, spec);
}

inline constexpr double kDefaultJointLimitGain = 2.0;

/// Velocity dampers q-dot_i >= -eta (q_i - q_min) and q-dot_i <= eta (q_max - q_i).
/// Joints with an infinite limit get no row on that side.
template <typename Scalar, typename Derived>
std::vector<ConstraintRow<Scalar>> joint_limit_rows(const Eigen::MatrixBase<Derived>& q,
                                                    const KinematicChain<Scalar>& chain,
                                                    Scalar eta_joint = Scalar(kDefaultJointLimitGain)) {
  using std::isfinite;
  if (!(eta_joint > Scalar(0))) throw std::invalid_argument("joint_limit_rows: gain must be positive");
  if (static_cast<std::size_t>(q.size()) != chain.dof())
    throw std::invalid_argument("joint_limit_rows: configuration length does not match the chain");
  const Eigen::Index n = q.size();
  std::vector<ConstraintRow<Scalar>> rows;
  rows.reserve(2 * static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& joint = chain.joints()[static_cast<std::size_t>(i)];
    RowVectorX<Scalar> e = RowVectorX<Scalar>::Zero(n);
    e[i] = Scalar(1);
    if (isfinite(joint.q_min)) rows.push_back(detail::split_row<Scalar>(-e, eta_joint * (q[i] - joint.q_min)));
    if (isfinite(joint.q_max)) rows.push_back(detail::split_row<Scalar>(e, eta_joint * (joint.q_max - q[i])));
  }
  return rows;
}

/// Explicit Euler may overshoot the boundary when eta_d T > 1.
template <typename Scalar>
bool discrete_overshoot_possible(Scalar eta_d, Scalar period) {
  return eta_d * period > Scalar(1);
}

}  // namespace dqvfi
