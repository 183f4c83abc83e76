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

#include "doctest.h"

#include <cmath>

#include "dqvfi/kinematics.hpp"
#include "support/oracles.hpp"

using namespace dqvfi;
using namespace dqvfi::testing;

namespace {

constexpr int kSamples = 150;

Eigen::Matrix<double, 8, 1> pose_vec(const KinematicChaind& chain, const Eigen::VectorXd& q, std::size_t upto) {
  return vec8(fkm(chain, q, upto));
}

Eigen::Vector4d translation_vec(const KinematicChaind& chain, const Eigen::VectorXd& q, std::size_t upto) {
  const Eigen::Matrix4d T = matrix_fk(chain, q, upto);
  return Eigen::Vector4d(0.0, T(0, 3), T(1, 3), T(2, 3));
}

}  // namespace

TEST_CASE("forward kinematics matches homogeneous matrices") {
  Random rng(201);
  for (int i = 0; i < 300; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    for (std::size_t upto : {std::size_t{0}, chain.dof() / 2, chain.dof(), kEndEffector}) {
      const DQ x = fkm(chain, q, upto);
      CHECK(is_unit(x, 1e-12));
      CHECK((homogeneous(x) - matrix_fk(chain, q, upto)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("DH transform of a single joint") {
  JointDescriptor<double> j;
  j.theta = 0.3;
  j.d = 0.1;
  j.a = -0.2;
  j.alpha = 1.1;
  CHECK((homogeneous(dh_transform(j, 0.4)) - dh_matrix(0.7, 0.1, -0.2, 1.1)).cwiseAbs().maxCoeff() < 1e-14);
  j.kind = JointKind::prismatic;
  CHECK((homogeneous(dh_transform(j, 0.4)) - dh_matrix(0.3, 0.5, -0.2, 1.1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("pose Jacobian matches central differences") {
  Random rng(202);
  for (int i = 0; i < kSamples; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    const std::size_t upto = i % 3 == 0 ? static_cast<std::size_t>(rng.integer(0, static_cast<int>(chain.dof())))
                                        : kEndEffector;
    const auto f = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(pose_vec(chain, v, upto)); };
    const Eigen::MatrixXd J = pose_jacobian(chain, q, upto);
    CHECK(relative_error(J, numeric_jacobian(f, q)) < 1e-5);
  }
}

TEST_CASE("pose Jacobian with a local transform") {
  Random rng(203);
  for (int i = 0; i < 50; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    const DQ local = rng.pose(0.2);
    const std::size_t upto = chain.dof();
    const auto f = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(vec8(fkm(chain, v, upto, local))); };
    CHECK(relative_error(pose_jacobian(chain, q, upto, local), numeric_jacobian(f, q)) < 1e-5);
  }
}

TEST_CASE("rotation and translation Jacobians match central differences") {
  Random rng(204);
  for (int i = 0; i < kSamples; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    const DQ x = fkm(chain, q);
    const Matrix8X<double> J = pose_jacobian(chain, q);

    const auto fr = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(vec4(fkm(chain, v).primary())); };
    CHECK(relative_error(rotation_jacobian(J), numeric_jacobian(fr, q)) < 1e-5);

    // translation read off the homogeneous matrix, not the dual quaternion
    const auto ft = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(translation_vec(chain, v, kEndEffector)); };
    CHECK(relative_error(translation_jacobian(J, x), numeric_jacobian(ft, q)) < 1e-5);
  }
}

TEST_CASE("line Jacobian matches central differences") {
  Random rng(205);
  for (int i = 0; i < kSamples; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    const std::size_t upto = static_cast<std::size_t>(rng.integer(1, static_cast<int>(chain.dof())));
    const Quat axis = i % 2 ? Quat::k() : rng.unit_pure();
    const LineJacobian<double> lj = line_jacobian(chain, q, upto, axis);

    // oracle: axis and origin of the frame from the homogeneous matrix, moment p x u
    const auto f = [&](const Eigen::VectorXd& v) {
      const Eigen::Matrix4d T = matrix_fk(chain, v, upto);
      const Vec3 u = T.topLeftCorner<3, 3>() * axis.vec3();
      const Vec3 m = T.topRightCorner<3, 1>().cross(u);
      Eigen::VectorXd out(8);
      out << 0, u, 0, m;
      return out;
    };
    const Eigen::VectorXd l0 = f(q);
    CHECK((vec8(lj.line.dq()) - l0).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(relative_error(lj.jacobian, numeric_jacobian(f, q)) < 1e-5);
    CHECK(relative_error(lj.direction_jacobian(), lj.jacobian.topRows(4)) == 0.0);
    CHECK(relative_error(lj.moment_jacobian(), lj.jacobian.bottomRows(4)) == 0.0);
  }
}

TEST_CASE("attachment point Jacobian") {
  Random rng(206);
  for (int i = 0; i < kSamples; ++i) {
    const KinematicChaind chain = random_chain(rng);
    const Eigen::VectorXd q = random_configuration(rng, chain);
    const auto& ap = chain.attachment("mid");
    const auto f = [&](const Eigen::VectorXd& v) {
      const Eigen::Matrix4d T = matrix_fk(chain, v, ap.joint_index);
      const Eigen::Vector4d p = T * Eigen::Vector4d(ap.local_offset.x(), ap.local_offset.y(), ap.local_offset.z(), 1.0);
      return Eigen::VectorXd(Eigen::Vector4d(0.0, p.x(), p.y(), p.z()));
    };
    const PointJacobian<double> pj = attachment_jacobian(chain, q, "mid");
    CHECK((vec4(pj.point) - f(q)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(relative_error(pj.jacobian, numeric_jacobian(f, q)) < 1e-5);

    const PointJacobian<double> pe = effector_point_jacobian(chain, q);
    const auto fe = [&](const Eigen::VectorXd& v) { return Eigen::VectorXd(translation_vec(chain, v, kEndEffector)); };
    CHECK(relative_error(pe.jacobian, numeric_jacobian(fe, q)) < 1e-5);
  }
}

TEST_CASE("prismatic column carries no rotation") {
  std::vector<JointDescriptor<double>> joints(2);
  joints[0].kind = JointKind::prismatic;
  joints[1].alpha = 0.5;
  const KinematicChaind chain(DQ::identity(), joints);
  const Eigen::Vector2d q(0.2, 0.3);
  const Matrix8X<double> J = pose_jacobian(chain, q);
  CHECK(J.col(0).head<4>().norm() == doctest::Approx(0.0));
  const Matrix4X<double> Jt = translation_jacobian(J, fkm(chain, q));
  CHECK((Jt.col(0) - Eigen::Vector4d(0, 0, 0, 1)).norm() < 1e-14);
}

TEST_CASE("chain validation") {
  std::vector<JointDescriptor<double>> joints(1);
  CHECK_THROWS_AS(KinematicChaind(DQ::identity(), {}), std::invalid_argument);
  CHECK_THROWS_AS(KinematicChaind(DQ(Quat(2.0)), joints), std::invalid_argument);
  CHECK_THROWS_AS(KinematicChaind(DQ::identity(), joints, DQ(Quat(0.5))), std::invalid_argument);
  auto bad = joints;
  bad[0].q_min = 1.0;
  bad[0].q_max = 0.0;
  CHECK_THROWS_AS(KinematicChaind(DQ::identity(), bad), std::invalid_argument);
  CHECK_THROWS_AS(KinematicChaind(DQ::identity(), joints, DQ::identity(), {{"p", 2, Vec3::Zero()}}),
                  std::invalid_argument);

  const KinematicChaind chain(DQ::identity(), joints);
  CHECK_THROWS_AS(fkm(chain, Eigen::Vector2d(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(fkm(chain, Eigen::Matrix<double, 1, 1>(0.0), 2), std::out_of_range);
  CHECK_THROWS_AS(chain.attachment("missing"), std::out_of_range);
  CHECK(std::isinf(chain.lower_limits()[0]));
  CHECK_THROWS_AS(translation_jacobian(Matrix8X<double>(Matrix8X<double>::Zero(8, 1)), DQ(Quat(3.0))), std::invalid_argument);
  CHECK_THROWS_AS(line_jacobian(DQ::identity(), Matrix8X<double>(Matrix8X<double>::Zero(8, 1)), Quat::pure(0, 0, 2)),
                  std::invalid_argument);
}
