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
 * \file kinematics.hpp
 * \brief Serial chains with standard Denavit-Hartenberg joints, forward kinematics
 *        and the analytical pose, translation, rotation and line Jacobians.
 *
 * Joint i contributes Rz(theta) Tz(d) Tx(a) Rx(alpha); the joint variable adds to
 * theta (revolute) or d (prismatic). Since Rz and Tz commute, the derivative of a
 * joint transform with respect to its variable is omega A with omega = k/2 or
 * eps k/2, which gives the prefix-product column formula used below.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dqvfi/dual_quaternion.hpp"
#include "dqvfi/geometry.hpp"

namespace dqvfi {

enum class JointKind { revolute, prismatic };

template <typename Scalar>
struct JointDescriptor {
  JointKind kind{JointKind::revolute};
  Scalar theta{0};
  Scalar d{0};
  Scalar a{0};
  Scalar alpha{0};
  Scalar q_min{-std::numeric_limits<Scalar>::infinity()};
  Scalar q_max{std::numeric_limits<Scalar>::infinity()};
};

/// A point rigidly attached to the distal frame of a joint.
template <typename Scalar>
struct AttachmentPoint {
  std::string name;
  std::size_t joint_index{0};  ///< frame after this many joints (0 is the base)
  Eigen::Matrix<Scalar, 3, 1> local_offset{Eigen::Matrix<Scalar, 3, 1>::Zero()};
};

/// Selects the frame after the effector transform.
inline constexpr std::size_t kEndEffector = std::numeric_limits<std::size_t>::max();

/// Denavit-Hartenberg transform of one joint at joint value q.
template <typename Scalar>
DualQuaternion<Scalar> dh_transform(const JointDescriptor<Scalar>& joint, Scalar q) {
  const Scalar theta = joint.kind == JointKind::revolute ? joint.theta + q : joint.theta;
  const Scalar d = joint.kind == JointKind::prismatic ? joint.d + q : joint.d;
  using Q = Quaternion<Scalar>;
  using DQ = DualQuaternion<Scalar>;
  const Eigen::Matrix<Scalar, 3, 1> ez(Scalar(0), Scalar(0), Scalar(1));
  const Eigen::Matrix<Scalar, 3, 1> ex(Scalar(1), Scalar(0), Scalar(0));
  const DQ rz(Q::rotation(ez, theta));
  const DQ tz = DQ::from_translation(Q::pure(Scalar(0), Scalar(0), d));
  const DQ tx = DQ::from_translation(Q::pure(joint.a, Scalar(0), Scalar(0)));
  const DQ rx(Q::rotation(ex, joint.alpha));
  return rz * tz * tx * rx;
}

template <typename Scalar>
class KinematicChain {
 public:
  KinematicChain(DualQuaternion<Scalar> base, std::vector<JointDescriptor<Scalar>> joints,
                 DualQuaternion<Scalar> effector = DualQuaternion<Scalar>::identity(),
                 std::vector<AttachmentPoint<Scalar>> attachments = {})
      : base_(std::move(base)), joints_(std::move(joints)), effector_(std::move(effector)),
        attachments_(std::move(attachments)) {
    if (joints_.empty()) throw std::invalid_argument("KinematicChain: at least one joint is required");
    if (!is_unit(base_, Scalar(1e-10))) throw std::invalid_argument("KinematicChain: base pose must be unit");
    if (!is_unit(effector_, Scalar(1e-10))) throw std::invalid_argument("KinematicChain: effector pose must be unit");
    for (const auto& j : joints_) {
      if (!(j.q_min < j.q_max)) throw std::invalid_argument("KinematicChain: joint limits must satisfy q_min < q_max");
    }
    for (const auto& p : attachments_) {
      if (p.joint_index > joints_.size())
        throw std::invalid_argument("KinematicChain: attachment point '" + p.name + "' refers to a missing joint");
    }
  }

  std::size_t dof() const { return joints_.size(); }
  const DualQuaternion<Scalar>& base() const { return base_; }
  const DualQuaternion<Scalar>& effector() const { return effector_; }
  const std::vector<JointDescriptor<Scalar>>& joints() const { return joints_; }
  const std::vector<AttachmentPoint<Scalar>>& attachments() const { return attachments_; }

  const AttachmentPoint<Scalar>& attachment(const std::string& name) const {
    for (const auto& p : attachments_)
      if (p.name == name) return p;
    throw std::out_of_range("KinematicChain: no attachment point named '" + name + "'");
  }

  VectorX<Scalar> lower_limits() const {
    VectorX<Scalar> v(dof());
    for (std::size_t i = 0; i < dof(); ++i) v[i] = joints_[i].q_min;
    return v;
  }
  VectorX<Scalar> upper_limits() const {
    VectorX<Scalar> v(dof());
    for (std::size_t i = 0; i < dof(); ++i) v[i] = joints_[i].q_max;
    return v;
  }

 private:
  DualQuaternion<Scalar> base_;
  std::vector<JointDescriptor<Scalar>> joints_;
  DualQuaternion<Scalar> effector_;
  std::vector<AttachmentPoint<Scalar>> attachments_;
};

using KinematicChaind = KinematicChain<double>;

namespace detail {

template <typename Scalar, typename Derived>
void check_configuration(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q, std::size_t upto) {
  if (static_cast<std::size_t>(q.size()) != chain.dof())
    throw std::invalid_argument("configuration length does not match the chain");
  if (upto != kEndEffector && upto > chain.dof()) throw std::out_of_range("frame index beyond the last joint");
}

}  // namespace detail

/// Pose of the frame after `upto` joints; kEndEffector also applies the effector transform.
template <typename Scalar, typename Derived>
DualQuaternion<Scalar> fkm(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q,
                           std::size_t upto = kEndEffector) {
  detail::check_configuration(chain, q, upto);
  const std::size_t last = upto == kEndEffector ? chain.dof() : upto;
  DualQuaternion<Scalar> x = chain.base();
  for (std::size_t i = 0; i < last; ++i) x = x * dh_transform(chain.joints()[i], Scalar(q[i]));
  if (upto == kEndEffector) x = x * chain.effector();
  return normalize(x);
}

/// Pose of fkm(upto) followed by a fixed local transform.
template <typename Scalar, typename Derived>
DualQuaternion<Scalar> fkm(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q, std::size_t upto,
                           const DualQuaternion<Scalar>& local) {
  return normalize(fkm(chain, q, upto) * local);
}

/// J_x with vec8(x-dot) = J_x q-dot for x = fkm(upto) local. Columns past `upto` are zero.
template <typename Scalar, typename Derived>
Matrix8X<Scalar> pose_jacobian(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q,
                               std::size_t upto = kEndEffector,
                               const DualQuaternion<Scalar>& local = DualQuaternion<Scalar>::identity()) {
  detail::check_configuration(chain, q, upto);
  const std::size_t n = chain.dof();
  const std::size_t last = upto == kEndEffector ? n : upto;
  const DualQuaternion<Scalar> x = fkm(chain, q, upto, local);
  const Matrix8<Scalar> right = hamilton_minus(x);

  Matrix8X<Scalar> J = Matrix8X<Scalar>::Zero(8, static_cast<Eigen::Index>(n));
  DualQuaternion<Scalar> prefix = chain.base();
  const Quaternion<Scalar> half_k(Scalar(0), Scalar(0), Scalar(0), Scalar(0.5));
  for (std::size_t i = 0; i < last; ++i) {
    const auto& joint = chain.joints()[i];
    const DualQuaternion<Scalar> omega = joint.kind == JointKind::revolute
                                             ? DualQuaternion<Scalar>(half_k)
                                             : DualQuaternion<Scalar>(Quaternion<Scalar>(), half_k);
    const DualQuaternion<Scalar> w = prefix * omega * prefix.conjugate();
    J.col(static_cast<Eigen::Index>(i)) = right * vec8(w);
    prefix = prefix * dh_transform(joint, Scalar(q[i]));
  }
  return J;
}

/// J_r: the primary block of J_x.
template <typename Scalar>
Matrix4X<Scalar> rotation_jacobian(const Matrix8X<Scalar>& J_x) {
  return J_x.template topRows<4>();
}

/// J_t from t = 2 D(x) P(x)*.
template <typename Scalar>
Matrix4X<Scalar> translation_jacobian(const Matrix8X<Scalar>& J_x, const DualQuaternion<Scalar>& x) {
  if (!is_unit(x, Scalar(1e-8))) throw std::invalid_argument("translation_jacobian: pose must be unit");
  const Matrix4X<Scalar> J_r = J_x.template topRows<4>();
  const Matrix4X<Scalar> J_d = J_x.template bottomRows<4>();
  return Scalar(2) * (hamilton_minus(x.primary().conjugate()) * J_d +
                      hamilton_plus(x.dual()) * conjugation_matrix4<Scalar>() * J_r);
}

/// A line fixed to a moving frame and its Jacobian, vec8(l-dot) = J q-dot.
template <typename Scalar>
struct LineJacobian {
  PluckerLine<Scalar> line;
  Matrix8X<Scalar> jacobian;
  Matrix4X<Scalar> direction_jacobian() const { return jacobian.template topRows<4>(); }
  Matrix4X<Scalar> moment_jacobian() const { return jacobian.template bottomRows<4>(); }
};

/// Line through the origin of frame x along the local `axis`, with its Jacobian.
template <typename Scalar>
LineJacobian<Scalar> line_jacobian(const DualQuaternion<Scalar>& x, const Matrix8X<Scalar>& J_x,
                                   const Quaternion<Scalar>& axis = Quaternion<Scalar>::k()) {
  using std::abs;
  if (!axis.is_pure() || abs(axis.norm() - Scalar(1)) > Scalar(kUnitTolerance))
    throw std::invalid_argument("line_jacobian: axis must be a pure unit quaternion");
  const Quaternion<Scalar> r = x.primary();
  const Quaternion<Scalar> t = x.translation().im();
  const Matrix4X<Scalar> J_r = rotation_jacobian(J_x);
  const Matrix4X<Scalar> J_t = translation_jacobian(J_x, x);

  const Quaternion<Scalar> lz = (r * axis * r.conjugate()).im();
  const Quaternion<Scalar> mz = cross(t, lz);

  const Matrix4X<Scalar> J_rz =
      (hamilton_minus(axis * r.conjugate()) + hamilton_plus(r * axis) * conjugation_matrix4<Scalar>()) * J_r;
  const Matrix4X<Scalar> J_mz =
      Scalar(0.5) * ((hamilton_minus(lz) - hamilton_plus(lz)) * J_t + (hamilton_plus(t) - hamilton_minus(t)) * J_rz);

  Matrix8X<Scalar> J(8, J_x.cols());
  J << J_rz, J_mz;
  return {PluckerLine<Scalar>(lz / lz.norm(), mz), J};
}

template <typename Scalar, typename Derived>
LineJacobian<Scalar> line_jacobian(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q,
                                   std::size_t upto, const Quaternion<Scalar>& axis = Quaternion<Scalar>::k()) {
  return line_jacobian(fkm(chain, q, upto), pose_jacobian(chain, q, upto), axis);
}

/// Position of a named attachment point and its translation Jacobian.
template <typename Scalar>
struct PointJacobian {
  Point<Scalar> point;
  Matrix4X<Scalar> jacobian;
};

template <typename Scalar, typename Derived>
PointJacobian<Scalar> attachment_jacobian(const KinematicChain<Scalar>& chain, const Eigen::MatrixBase<Derived>& q,
                                          const std::string& name) {
  const AttachmentPoint<Scalar>& p = chain.attachment(name);
  const auto local = DualQuaternion<Scalar>::from_translation(Quaternion<Scalar>::pure(p.local_offset));
  const DualQuaternion<Scalar> x = fkm(chain, q, p.joint_index, local);
  const Matrix8X<Scalar> J_x = pose_jacobian(chain, q, p.joint_index, local);
  return {x.translation().im(), translation_jacobian(J_x, x)};
}

/// Translation of the effector and J_t.
template <typename Scalar, typename Derived>
PointJacobian<Scalar> effector_point_jacobian(const KinematicChain<Scalar>& chain,
                                              const Eigen::MatrixBase<Derived>& q) {
  const DualQuaternion<Scalar> x = fkm(chain, q);
  return {x.translation().im(), translation_jacobian(pose_jacobian(chain, q), x)};
}

}  // namespace dqvfi
