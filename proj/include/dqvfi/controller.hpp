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
 * \file controller.hpp
 * \brief One control tick: task error, constraint rows, the canonical-form linear
 *        program, and the joint velocities extracted from its solution.
 *
 * Decision vector layout, for n joints, an m-dimensional task, L joint-limit rows
 * and k zone rows:
 *
 *   g = [ q-dot_P (n) | q-dot_N (n) | y (m) | z_A (m) | z_B (1) | z_l (L) | z_C (k) ]
 *
 * Rows: J (q_P - q_N) - y + z_A = -eta x~; 1^T (q_P + q_N) + z_B = beta ||x~||_1;
 * then one row per joint-limit damper and one per zone, each with its own slack.
 * The cost [-1^T J, 1^T J, 2 1^T, 0, ...] g - eta 1^T x~ equals ||J q-dot + eta x~||_1
 * at the optimum.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dqvfi/distance_jacobians.hpp"
#include "dqvfi/dual_quaternion.hpp"
#include "dqvfi/geometry.hpp"
#include "dqvfi/kinematics.hpp"
#include "dqvfi/lp.hpp"
#include "dqvfi/vfi.hpp"

namespace dqvfi {

/// vec8(x - s x_d) with s = +1 or -1, whichever gives the smaller error.
Eigen::Matrix<double, 8, 1> task_error(const DualQuaterniond& x, const DualQuaterniond& x_d);

struct ControlProblem {
  Eigen::MatrixXd J_x;        ///< m x n task Jacobian
  Eigen::VectorXd task_error; ///< m
  double eta{50.0};
  double beta{40.0};
  std::vector<ConstraintRow<double>> joint_limit_rows;
  std::vector<ConstraintRow<double>> zone_rows;

  void validate() const;
};

/// Column offsets of each block of g.
struct ProgramLayout {
  Eigen::Index n{0}, m{0}, limits{0}, zones{0};
  Eigen::Index qdot_p() const { return 0; }
  Eigen::Index qdot_n() const { return n; }
  Eigen::Index y() const { return 2 * n; }
  Eigen::Index z_a() const { return 2 * n + m; }
  Eigen::Index z_b() const { return 2 * n + 2 * m; }
  Eigen::Index z_l() const { return 2 * n + 2 * m + 1; }
  Eigen::Index z_c() const { return z_l() + limits; }
  Eigen::Index cols() const { return z_c() + zones; }
  Eigen::Index rows() const { return m + 1 + limits + zones; }
};

ProgramLayout layout_of(const ControlProblem& p);

lp::CanonicalLP build_program(const ControlProblem& p);

/// The constant -eta 1^T x~ dropped from the LP cost.
double objective_offset(const ControlProblem& p);

using PairEvaluator = std::function<DistancePair<double>(const Eigen::VectorXd& q)>;

/// A restricted (keep-out) or safe (keep-in) zone and how to measure the robot against it.
struct Zone {
  std::string name;
  ZoneSpec<double> spec;
  PairEvaluator evaluate;
};

/// A point on the robot: the effector position, or a named attachment point.
struct PointSource {
  std::string attachment;  ///< empty selects the effector
};

/// A line fixed to a robot frame: through the frame origin along `axis` in frame coordinates.
struct LineSource {
  std::size_t frame{kEndEffector};
  Quaterniond axis{Quaterniond::k()};
};

Zone point_plane_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, PointSource point,
                      Plane<double> plane);
Zone line_point_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, LineSource line,
                     Point<double> point, DistanceOptions options = {});
Zone point_line_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, PointSource point,
                     PluckerLine<double> line, DistanceOptions options = {});
Zone line_line_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, LineSource line,
                    PluckerLine<double> static_line);

/// Robot point and its translation Jacobian.
PointJacobian<double> evaluate_point(const KinematicChaind& chain, const Eigen::VectorXd& q, const PointSource& src);
LineJacobian<double> evaluate_line(const KinematicChaind& chain, const Eigen::VectorXd& q, const LineSource& src);

struct Gains {
  double eta{50.0};
  double beta{40.0};
  double eta_joint{kDefaultJointLimitGain};
  double period{0.004};
};

struct StepOptions {
  /// Abort with SingularDistanceError instead of omitting the row.
  bool strict_singular{false};
};

enum class StepStatus { ok, infeasible, unbounded, numerical_failure };

const char* to_string(StepStatus s);

/// Per-zone result of one tick.
struct ZoneReport {
  std::string name;
  double distance{0.0};
  double distance_error{0.0};
  bool omitted{false};
  bool low_confidence{false};
};

struct ControlOutput {
  Eigen::VectorXd qdot;
  Eigen::VectorXd qdot_p, qdot_n;
  Eigen::VectorXd y, z_a;
  double z_b{0.0};
  Eigen::VectorXd z_l, z_c;
  StepStatus status{StepStatus::ok};
  /// ||J q-dot + eta x~||_1 including the constant term; NaN when no solution.
  double objective{0.0};
  double task_error_l1{0.0};
  std::vector<ZoneReport> zones;
  std::size_t omitted_rows{0};
  std::vector<std::string> warnings;
};

ControlOutput step(const KinematicChaind& chain, const Eigen::VectorXd& q, const DualQuaterniond& x_d,
                   const std::vector<Zone>& zones, const Gains& gains, const StepOptions& options = {});

}  // namespace dqvfi
