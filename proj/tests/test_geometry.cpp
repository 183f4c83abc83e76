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

#include "dqvfi/geometry.hpp"
#include "support/oracles.hpp"

using namespace dqvfi;
using namespace dqvfi::testing;

TEST_CASE("Pluecker constraint holds for constructed and transformed lines") {
  Random rng(101);
  for (int i = 0; i < 1000; ++i) {
    const PluckerLine<double> l = rng.line();
    CHECK(std::abs(l.direction().norm() - 1.0) < 1e-12);
    CHECK(std::abs(inner(l.direction(), l.moment())) < 1e-12);
    // the dual norm of a line is 1 + eps 0
    const DualScalar<double> n = norm(l.dq());
    CHECK(std::abs(n.primary - 1.0) < 1e-12);
    CHECK(std::abs(n.dual) < 1e-12);

    const PluckerLine<double> moved = transform_line(rng.pose(), l);
    CHECK(std::abs(moved.direction().norm() - 1.0) < 1e-12);
    CHECK(std::abs(inner(moved.direction(), moved.moment())) < 1e-12);
  }
}

TEST_CASE("transform_line moves points of the line onto the new line") {
  Random rng(102);
  for (int i = 0; i < 500; ++i) {
    const Quat p = rng.pure(), u = rng.unit_pure();
    const DQ x = rng.pose();
    const PluckerLine<double> moved = transform_line(x, line_from(p, u));
    for (double s : {-1.0, 0.0, 2.5}) {
      const Quat on = transform_point(x, Quat(p + u * s));
      CHECK(point_line_distance(on, moved) < 1e-12);
    }
  }
}

TEST_CASE("invalid lines and planes are rejected") {
  CHECK_THROWS_AS(PluckerLine<double>(Quat::pure(2, 0, 0), Quat()), std::invalid_argument);
  CHECK_THROWS_AS(PluckerLine<double>(Quat::i(), Quat::pure(1, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(PluckerLine<double>(Quat(1, 0, 0, 0), Quat()), NotPureError);
  CHECK_THROWS_AS(line_from(Quat(1.0), Quat::i()), NotPureError);
  CHECK_THROWS_AS(line_from(Quat::j(), Quat::pure(0, 3, 0)), std::invalid_argument);
  CHECK_THROWS_AS(Plane<double>(Quat::pure(0, 0, 2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(plane_from(Quat::j(), Quat(1.0)), NotPureError);
}

TEST_CASE("closest point to origin") {
  const PluckerLine<double> l = line_from(Quat::pure(3, 1, 2), Quat::k());
  CHECK((l.closest_point_to_origin().vec3() - Eigen::Vector3d(3, 1, 0)).norm() < 1e-15);
}

TEST_CASE("point-plane distance matches the R3 formula") {
  Random rng(103);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 n = rng.unit_vec3();
    const Vec3 on = rng.vec3(2.0);
    const Vec3 p = rng.vec3(2.0);
    const Plane<double> plane = plane_from(Quat::pure(on), Quat::pure(n));
    CHECK(std::abs(point_plane_distance(Quat::pure(p), plane) - r3_point_plane(p, n, n.dot(on))) < 1e-9);
  }
}

TEST_CASE("point-line distance matches projection") {
  Random rng(104);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a = rng.vec3(2.0), u = rng.unit_vec3(), p = rng.vec3(2.0);
    const PluckerLine<double> l = line_from(Quat::pure(a), Quat::pure(u));
    CHECK(std::abs(point_line_distance(Quat::pure(p), l) - r3_point_line(p, a, u)) < 1e-9);
  }
}

TEST_CASE("line-line distance matches the skew-line formula") {
  Random rng(105);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p1 = rng.vec3(2.0), u1 = rng.unit_vec3(), p2 = rng.vec3(2.0), u2 = rng.unit_vec3();
    const auto l1 = line_from(Quat::pure(p1), Quat::pure(u1));
    const auto l2 = line_from(Quat::pure(p2), Quat::pure(u2));
    CHECK(std::abs(line_line_distance(l1, l2) - r3_line_line(p1, u1, p2, u2)) < 1e-9);
  }
}

TEST_CASE("parallel and antiparallel lines use the parallel branch") {
  Random rng(106);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p1 = rng.vec3(2.0), u = rng.unit_vec3(), p2 = rng.vec3(2.0);
    const double s = i % 2 ? 1.0 : -1.0;
    const auto l1 = line_from(Quat::pure(p1), Quat::pure(u));
    const auto l2 = line_from(Quat::pure(p2), Quat::pure(Vec3(s * u)));
    CHECK(lines_parallel(l1, l2));
    CHECK(std::abs(line_line_distance(l1, l2) - r3_point_line(p2, p1, u)) < 1e-9);
  }
}

TEST_CASE("dual cosine and angle") {
  Random rng(107);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p1 = rng.vec3(), u1 = rng.unit_vec3(), p2 = rng.vec3(), u2 = rng.unit_vec3();
    const auto l1 = line_from(Quat::pure(p1), Quat::pure(u1));
    const auto l2 = line_from(Quat::pure(p2), Quat::pure(u2));
    const double phi = std::acos(std::clamp(u1.dot(u2), -1.0, 1.0));
    CHECK(std::abs(line_angle(l1, l2) - phi) < 1e-7);
    const DualScalar<double> c = line_inner(l1, l2);
    CHECK(std::abs(c.primary - std::cos(phi)) < 1e-12);
    // |dual part| = d sin(phi)
    CHECK(std::abs(std::abs(c.dual) - r3_line_line(p1, u1, p2, u2) * std::sin(phi)) < 1e-9);
  }
}
