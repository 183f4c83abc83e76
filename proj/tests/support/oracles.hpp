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

// Test-only reference computations. None of these go through the library's
// Hamilton operators, Jacobian formulas or simplex code.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dqvfi/dual_quaternion.hpp"
#include "dqvfi/geometry.hpp"
#include "dqvfi/kinematics.hpp"
#include "dqvfi/lp.hpp"

namespace dqvfi::testing {

using Vec3 = Eigen::Vector3d;
using Quat = Quaterniond;
using DQ = DualQuaterniond;

class Random {
 public:
  explicit Random(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  Vec3 vec3(double scale = 1.0) { return Vec3(uniform(), uniform(), uniform()) * scale; }
  Vec3 unit_vec3() {
    Vec3 v(normal(), normal(), normal());
    while (v.norm() < 1e-3) v = Vec3(normal(), normal(), normal());
    return v.normalized();
  }
  Quat quaternion() { return Quat(uniform(), uniform(), uniform(), uniform()); }
  Quat pure(double scale = 1.0) { return Quat::pure(vec3(scale)); }
  Quat unit_pure() { return Quat::pure(unit_vec3()); }
  Quat unit_quaternion() {
    Eigen::Vector4d v(normal(), normal(), normal(), normal());
    return Quat(Eigen::Vector4d(v.normalized()));
  }
  DQ dual_quaternion() { return DQ(quaternion(), quaternion()); }
  DQ pure_dual_quaternion() { return DQ(pure(), pure()); }
  DQ pose(double translation_scale = 1.0) {
    return DQ::from_rotation_translation(unit_quaternion(), pure(translation_scale));
  }
  PluckerLine<double> line(double point_scale = 1.0) { return line_from(pure(point_scale), unit_pure()); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Quaternion product in scalar-vector form: (s1 s2 - v1.v2, s1 v2 + s2 v1 + v1 x v2).
inline Quat scalar_vector_product(const Quat& a, const Quat& b) {
  const Vec3 va = a.vec3(), vb = b.vec3();
  const Vec3 v = a.w() * vb + b.w() * va + va.cross(vb);
  return Quat(a.w() * b.w() - va.dot(vb), v.x(), v.y(), v.z());
}

inline DQ dual_product(const DQ& a, const DQ& b) {
  return DQ(scalar_vector_product(a.primary(), b.primary()),
            scalar_vector_product(a.primary(), b.dual()) + scalar_vector_product(a.dual(), b.primary()));
}

/// 4x4 homogeneous transform of a unit dual quaternion.
inline Eigen::Matrix4d homogeneous(const DQ& x) {
  Eigen::Matrix4d T = Eigen::Matrix4d::Identity();
  const Quat& r = x.primary();
  T.topLeftCorner<3, 3>() = Eigen::Quaterniond(r.w(), r.x(), r.y(), r.z()).toRotationMatrix();
  const Quat t = Quat(2.0) * scalar_vector_product(x.dual(), x.primary().conjugate());
  T.topRightCorner<3, 1>() = t.vec3();
  return T;
}

inline Eigen::Matrix4d dh_matrix(double theta, double d, double a, double alpha) {
  const double ct = std::cos(theta), st = std::sin(theta), ca = std::cos(alpha), sa = std::sin(alpha);
  Eigen::Matrix4d T;
  T << ct, -st * ca, st * sa, a * ct,
       st, ct * ca, -ct * sa, a * st,
       0, sa, ca, d,
       0, 0, 0, 1;
  return T;
}

/// Homogeneous-matrix forward kinematics.
inline Eigen::Matrix4d matrix_fk(const KinematicChaind& chain, const Eigen::VectorXd& q, std::size_t upto) {
  Eigen::Matrix4d T = homogeneous(chain.base());
  const std::size_t last = upto == kEndEffector ? chain.dof() : upto;
  for (std::size_t i = 0; i < last; ++i) {
    const auto& j = chain.joints()[i];
    const double qi = q[static_cast<Eigen::Index>(i)];
    T = T * (j.kind == JointKind::revolute ? dh_matrix(j.theta + qi, j.d, j.a, j.alpha)
                                           : dh_matrix(j.theta, j.d + qi, j.a, j.alpha));
  }
  if (upto == kEndEffector) T = T * homogeneous(chain.effector());
  return T;
}

inline KinematicChaind random_chain(Random& rng, int min_dof = 1, int max_dof = 8) {
  const int n = rng.integer(min_dof, max_dof);
  std::vector<JointDescriptor<double>> joints;
  for (int i = 0; i < n; ++i) {
    JointDescriptor<double> j;
    j.kind = rng.uniform(0.0, 1.0) < 0.3 ? JointKind::prismatic : JointKind::revolute;
    j.theta = rng.uniform(-M_PI, M_PI);
    j.d = rng.uniform(-0.3, 0.3);
    j.a = rng.uniform(-0.3, 0.3);
    j.alpha = rng.uniform(-M_PI, M_PI);
    j.q_min = -3.0;
    j.q_max = 3.0;
    joints.push_back(j);
  }
  std::vector<AttachmentPoint<double>> points;
  points.push_back({"mid", static_cast<std::size_t>(rng.integer(0, n)), rng.vec3(0.1)});
  return KinematicChaind(rng.pose(0.5), joints, rng.pose(0.1), points);
}

inline Eigen::VectorXd random_configuration(Random& rng, const KinematicChaind& chain, double scale = 1.5) {
  Eigen::VectorXd q(static_cast<Eigen::Index>(chain.dof()));
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = rng.uniform(-scale, scale);
  return q;
}

/// Central difference of f along q: (f(q + h v) - f(q - h v)) / 2h.
template <typename F>
Eigen::VectorXd directional_difference(const F& f, const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                                       double h = 1e-6) {
  const Eigen::VectorXd fp = f(Eigen::VectorXd(q + h * v));
  const Eigen::VectorXd fm = f(Eigen::VectorXd(q - h * v));
  return (fp - fm) / (2.0 * h);
}

/// Column-by-column central differences of a vector-valued f.
template <typename F>
Eigen::MatrixXd numeric_jacobian(const F& f, const Eigen::VectorXd& q, double h = 1e-6) {
  const Eigen::VectorXd f0 = f(q);
  Eigen::MatrixXd J(f0.size(), q.size());
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(q.size());
    e[j] = 1.0;
    J.col(j) = directional_difference(f, q, e, h);
  }
  return J;
}

/// ||A - B|| / max(1, ||B||), Frobenius.
inline double relative_error(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return (A - B).norm() / std::max(1.0, B.norm());
}

// R^3 closed forms ----------------------------------------------------------

inline double r3_point_plane(const Vec3& p, const Vec3& n, double offset) { return n.dot(p) - offset; }

/// Distance from p to the line through a with unit direction u, by projection.
inline double r3_point_line(const Vec3& p, const Vec3& a, const Vec3& u) {
  const Vec3 w = a - p;
  return (w - w.dot(u) * u).norm();
}

/// Skew-line distance |(p2 - p1).(u1 x u2)| / ||u1 x u2||, or the parallel distance.
inline double r3_line_line(const Vec3& p1, const Vec3& u1, const Vec3& p2, const Vec3& u2) {
  const Vec3 c = u1.cross(u2);
  if (c.norm() < 1e-9) return r3_point_line(p2, p1, u1);
  return std::abs((p2 - p1).dot(c)) / c.norm();
}

// LP vertex enumeration ------------------------------------------------------

struct EnumerationResult {
  bool feasible{false};
  double objective{std::numeric_limits<double>::infinity()};
};

/// Minimum of c^T g over every basic feasible solution, trying each K-subset of columns.
inline EnumerationResult enumerate_vertices(const lp::CanonicalLP& lp) {
  const Eigen::Index K = lp.rows(), M = lp.cols();
  EnumerationResult best;
  std::vector<int> pick(static_cast<std::size_t>(M), 0);
  std::fill(pick.begin(), pick.begin() + K, 1);
  std::vector<Eigen::Index> idx;
  do {
    idx.clear();
    for (Eigen::Index j = 0; j < M; ++j)
      if (pick[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd B(K, K);
    for (Eigen::Index c = 0; c < K; ++c) B.col(c) = lp.A.col(idx[static_cast<std::size_t>(c)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() < K) continue;
    const Eigen::VectorXd xb = lu.solve(lp.b);
    if (xb.minCoeff() < -1e-9) continue;
    if ((B * xb - lp.b).norm() > 1e-8) continue;
    double obj = 0.0;
    for (Eigen::Index c = 0; c < K; ++c) obj += lp.c[idx[static_cast<std::size_t>(c)]] * xb[c];
    best.feasible = true;
    best.objective = std::min(best.objective, obj);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Random bounded feasible LP: (K-1) rows U[-1,1], one all-ones row, b from a random g >= 0.
inline lp::CanonicalLP random_feasible_lp(Random& rng, int K, int M) {
  lp::CanonicalLP lp;
  lp.A.resize(K, M);
  for (int i = 0; i < K - 1; ++i)
    for (int j = 0; j < M; ++j) lp.A(i, j) = rng.uniform();
  lp.A.row(K - 1).setOnes();
  Eigen::VectorXd g(M);
  for (int j = 0; j < M; ++j) g[j] = rng.uniform(0.0, 1.0);
  lp.b = lp.A * g;
  lp.c.resize(M);
  for (int j = 0; j < M; ++j) lp.c[j] = rng.uniform();
  return lp;
}

/// Draws (K, M) with K <= 15, M <= 30 and at most `max_bases` column subsets.
inline std::pair<int, int> random_lp_shape(Random& rng, double max_bases = 2e5) {
  for (;;) {
    const int K = rng.integer(1, 15);
    const int M = rng.integer(K + 1, 30);
    if (binomial(M, K) <= max_bases) return {K, M};
  }
}

// Crafted degenerate instances --------------------------------------------

inline lp::CanonicalLP make_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  lp::CanonicalLP p;
  p.c = c;
  p.A = A;
  p.b = b;
  return p;
}

// Beale's classic cycling example with slacks x1..x3 in front.
inline lp::CanonicalLP beale() {
  Eigen::MatrixXd A(3, 7);
  A << 1, 0, 0, 0.25, -60, -1.0 / 25, 9,
       0, 1, 0, 0.5, -90, -1.0 / 50, 3,
       0, 0, 1, 0, 0, 1, 0;
  Eigen::VectorXd c(7);
  c << 0, 0, 0, -0.75, 150, -1.0 / 50, 6;
  return make_lp(c, A, Eigen::Vector3d(0, 0, 1));
}

// Kuhn's cycling example.
inline lp::CanonicalLP kuhn() {
  Eigen::MatrixXd A(3, 7);
  A << -2, -9, 1, 9, 1, 0, 0,
       1.0 / 3, 1, -1.0 / 3, -2, 0, 1, 0,
       2, 3, -1, -12, 0, 0, 1;
  Eigen::VectorXd c(7);
  c << -2, -3, 1, 12, 0, 0, 0;
  return make_lp(c, A, Eigen::Vector3d(0, 0, 2));
}

}  // namespace dqvfi::testing
