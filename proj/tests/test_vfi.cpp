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
#include <limits>

#include "dqvfi/vfi.hpp"
#include "support/oracles.hpp"

using namespace dqvfi;
using namespace dqvfi::testing;

namespace {

DistancePair<double> random_pair(Random& rng, int n) {
  DistancePair<double> p;
  p.d = rng.uniform(0.0, 0.2);
  p.J = Eigen::RowVectorXd::Random(n);
  return p;
}

}  // namespace

TEST_CASE("keep-out row encodes J qdot >= -eta_d (d - d_safe)") {
  Random rng(401);
  for (int i = 0; i < 500; ++i) {
    const int n = rng.integer(1, 8);
    const DistancePair<double> pair = random_pair(rng, n);
    ZoneSpec<double> spec{ZoneDirection::keep_out, rng.uniform(0.0, 0.1), rng.uniform(0.1, 2.0)};
    const ConstraintRow<double> row = keep_out_row(pair, spec);
    CHECK(row.dof() == n);
    CHECK((row.w_row.head(n) + row.w_row.tail(n)).norm() == 0.0);
    const Eigen::VectorXd qdot = Eigen::VectorXd::Random(n);
    const bool expected = pair.J.dot(qdot) >= -spec.eta_d * (pair.d - spec.d_safe);
    CHECK(row.satisfied_by(qdot, 1e-14) == expected);
    CHECK(spec.distance_error(pair.d) == doctest::Approx(pair.d - spec.d_safe));
  }
}

TEST_CASE("keep-in row encodes J qdot <= eta_d (d_safe - d)") {
  Random rng(402);
  for (int i = 0; i < 500; ++i) {
    const int n = rng.integer(1, 8);
    const DistancePair<double> pair = random_pair(rng, n);
    ZoneSpec<double> spec{ZoneDirection::keep_in, rng.uniform(0.0, 0.3), rng.uniform(0.1, 2.0)};
    const ConstraintRow<double> row = zone_row(pair, spec);
    const Eigen::VectorXd qdot = Eigen::VectorXd::Random(n);
    const bool expected = pair.J.dot(qdot) <= spec.eta_d * (spec.d_safe - pair.d);
    CHECK(row.satisfied_by(qdot, 1e-14) == expected);
    CHECK(spec.distance_error(pair.d) == doctest::Approx(spec.d_safe - pair.d));
  }
}

TEST_CASE("zero velocity is admissible exactly when the margin is non-negative") {
  DistancePair<double> pair;
  pair.J = Eigen::RowVectorXd::Ones(3);
  const ZoneSpec<double> out{ZoneDirection::keep_out, 0.05, 0.5};
  pair.d = 0.06;
  CHECK(keep_out_row(pair, out).satisfied_by(Eigen::VectorXd::Zero(3)));
  pair.d = 0.04;
  CHECK(!keep_out_row(pair, out).satisfied_by(Eigen::VectorXd::Zero(3)));
  // inside the zone, the row demands a recovery velocity
  CHECK(keep_out_row(pair, out).satisfied_by(Eigen::VectorXd::Constant(3, 0.01)));
}

TEST_CASE("direction mismatch and invalid specs are rejected") {
  DistancePair<double> pair;
  pair.J = Eigen::RowVectorXd::Ones(2);
  CHECK_THROWS_AS(keep_out_row(pair, ZoneSpec<double>{ZoneDirection::keep_in, 0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(keep_in_row(pair, ZoneSpec<double>{ZoneDirection::keep_out, 0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(zone_row(pair, ZoneSpec<double>{ZoneDirection::keep_out, 0.1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(zone_row(pair, ZoneSpec<double>{ZoneDirection::keep_out, -0.1, 0.5}), std::invalid_argument);
  CHECK(std::string(to_string(ZoneDirection::keep_in)) == "keep_in");
}

// Scalar ODE: d-tilde' = -eta_d d-tilde is the boundary of the admissible set. The continuous
// solution is d0 exp(-eta_d t); explicit Euler at the boundary gives d0 (1 - eta_d T)^k.
TEST_CASE("boundary velocity reproduces exponential approach") {
  const double eta = 0.5, T = 0.004, d0 = 0.03;
  double dt = d0;
  const int steps = 5000;
  for (int k = 0; k < steps; ++k) {
    DistancePair<double> pair;
    pair.d = dt;
    pair.J = Eigen::RowVectorXd::Ones(1);
    const ConstraintRow<double> row = keep_out_row(pair, ZoneSpec<double>{ZoneDirection::keep_out, 0.0, eta});
    // most aggressive approach the row allows: qdot = -rhs / (-J)
    const double qdot = row.rhs / row.velocity_row()[0];
    CHECK(row.satisfied_by(Eigen::VectorXd::Constant(1, qdot), 1e-15));
    dt += qdot * T;
    CHECK(dt >= 0.0);
  }
  CHECK(dt == doctest::Approx(d0 * std::pow(1.0 - eta * T, steps)).epsilon(1e-9));
  CHECK(std::abs(dt - d0 * std::exp(-eta * T * steps)) < 1e-4);
}

TEST_CASE("joint-limit dampers") {
  std::vector<JointDescriptor<double>> joints(3);
  joints[0].q_min = -1.0;
  joints[0].q_max = 2.0;
  joints[1].q_min = 0.0;  // upper side unbounded
  const KinematicChaind chain(DQ::identity(), joints);
  const Eigen::Vector3d q(0.5, 0.25, 7.0);
  const auto rows = joint_limit_rows(q, chain);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rhs == doctest::Approx(2.0 * 1.5));
  CHECK(rows[1].rhs == doctest::Approx(2.0 * 1.5));
  CHECK(rows[2].rhs == doctest::Approx(2.0 * 0.25));
  CHECK(rows[0].velocity_row()[0] == -1.0);
  CHECK(rows[1].velocity_row()[0] == 1.0);
  // qdot_0 >= -eta (q - q_min)
  CHECK(rows[0].satisfied_by(Eigen::Vector3d(-3.0, 0, 0)));
  CHECK(!rows[0].satisfied_by(Eigen::Vector3d(-3.1, 0, 0)));
  CHECK_THROWS_AS(joint_limit_rows(q, chain, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(joint_limit_rows(Eigen::Vector2d(0, 0), chain), std::invalid_argument);
  CHECK(joint_limit_rows(q, chain, 4.0)[2].rhs == doctest::Approx(1.0));
}

TEST_CASE("discrete overshoot warning") {
  CHECK(!discrete_overshoot_possible(0.5, 0.004));
  CHECK(!discrete_overshoot_possible(250.0, 0.004));
  CHECK(discrete_overshoot_possible(300.0, 0.004));
}
