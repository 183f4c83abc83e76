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

#include "dqvfi/controller.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dqvfi {

Eigen::Matrix<double, 8, 1> task_error(const DualQuaterniond& x, const DualQuaterniond& x_d) {
  const Eigen::Matrix<double, 8, 1> minus = vec8(x) - vec8(x_d);
  const Eigen::Matrix<double, 8, 1> plus = vec8(x) + vec8(x_d);
  return plus.norm() < minus.norm() ? plus : minus;
}

void ControlProblem::validate() const {
  const Eigen::Index n = J_x.cols();
  if (task_error.size() != J_x.rows()) throw std::invalid_argument("ControlProblem: task error length mismatch");
  if (!(eta > 0.0) || !(beta > 0.0)) throw std::invalid_argument("ControlProblem: eta and beta must be positive");
  for (const auto* rows : {&joint_limit_rows, &zone_rows}) {
    for (const auto& r : *rows) {
      if (r.w_row.size() != 2 * n) throw std::invalid_argument("ControlProblem: constraint row width mismatch");
    }
  }
}

ProgramLayout layout_of(const ControlProblem& p) {
  ProgramLayout l;
  l.n = p.J_x.cols();
  l.m = p.J_x.rows();
  l.limits = static_cast<Eigen::Index>(p.joint_limit_rows.size());
  l.zones = static_cast<Eigen::Index>(p.zone_rows.size());
  return l;
}

lp::CanonicalLP build_program(const ControlProblem& p) {
  p.validate();
  const ProgramLayout l = layout_of(p);
  const Eigen::Index n = l.n, m = l.m;

  lp::CanonicalLP prog;
  prog.A = Eigen::MatrixXd::Zero(l.rows(), l.cols());
  prog.b = Eigen::VectorXd::Zero(l.rows());
  prog.c = Eigen::VectorXd::Zero(l.cols());

  const Eigen::RowVectorXd ones_J = Eigen::RowVectorXd::Ones(m) * p.J_x;
  prog.c.segment(l.qdot_p(), n) = -ones_J.transpose();
  prog.c.segment(l.qdot_n(), n) = ones_J.transpose();
  prog.c.segment(l.y(), m).setConstant(2.0);

  // error convergence
  prog.A.block(0, l.qdot_p(), m, n) = p.J_x;
  prog.A.block(0, l.qdot_n(), m, n) = -p.J_x;
  prog.A.block(0, l.y(), m, m) = -Eigen::MatrixXd::Identity(m, m);
  prog.A.block(0, l.z_a(), m, m) = Eigen::MatrixXd::Identity(m, m);
  prog.b.head(m) = -p.eta * p.task_error;

  // stop at goal
  prog.A.block(m, l.qdot_p(), 1, 2 * n).setOnes();
  prog.A(m, l.z_b()) = 1.0;
  prog.b[m] = p.beta * p.task_error.lpNorm<1>();

  Eigen::Index row = m + 1;
  for (std::size_t i = 0; i < p.joint_limit_rows.size(); ++i, ++row) {
    prog.A.block(row, 0, 1, 2 * n) = p.joint_limit_rows[i].w_row;
    prog.A(row, l.z_l() + static_cast<Eigen::Index>(i)) = 1.0;
    prog.b[row] = p.joint_limit_rows[i].rhs;
  }
  for (std::size_t i = 0; i < p.zone_rows.size(); ++i, ++row) {
    prog.A.block(row, 0, 1, 2 * n) = p.zone_rows[i].w_row;
    prog.A(row, l.z_c() + static_cast<Eigen::Index>(i)) = 1.0;
    prog.b[row] = p.zone_rows[i].rhs;
  }

  prog.names.reserve(static_cast<std::size_t>(l.cols()));
  const auto name_block = [&prog](const char* tag, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) prog.names.push_back(std::string(tag) + "[" + std::to_string(i) + "]");
  };
  name_block("qdot_p", n);
  name_block("qdot_n", n);
  name_block("y", m);
  name_block("z_a", m);
  name_block("z_b", 1);
  name_block("z_l", l.limits);
  name_block("z_c", l.zones);
  return prog;
}

double objective_offset(const ControlProblem& p) { return -p.eta * p.task_error.sum(); }

PointJacobian<double> evaluate_point(const KinematicChaind& chain, const Eigen::VectorXd& q, const PointSource& src) {
  return src.attachment.empty() ? effector_point_jacobian(chain, q) : attachment_jacobian(chain, q, src.attachment);
}

LineJacobian<double> evaluate_line(const KinematicChaind& chain, const Eigen::VectorXd& q, const LineSource& src) {
  return line_jacobian(fkm(chain, q, src.frame), pose_jacobian(chain, q, src.frame), src.axis);
}

Zone point_plane_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, PointSource point,
                      Plane<double> plane) {
  spec.validate();
  return {std::move(name), spec,
          [chain = std::move(chain), point = std::move(point), plane](const Eigen::VectorXd& q) {
            const auto p = evaluate_point(chain, q, point);
            return dqvfi::point_plane(p.jacobian, p.point, plane);
          }};
}

Zone line_point_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, LineSource line,
                     Point<double> point, DistanceOptions options) {
  spec.validate();
  return {std::move(name), spec,
          [chain = std::move(chain), line, point, options](const Eigen::VectorXd& q) {
            return dqvfi::line_point(evaluate_line(chain, q, line), point, options);
          }};
}

Zone point_line_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, PointSource point,
                     PluckerLine<double> line, DistanceOptions options) {
  spec.validate();
  return {std::move(name), spec,
          [chain = std::move(chain), point = std::move(point), line, options](const Eigen::VectorXd& q) {
            const auto p = evaluate_point(chain, q, point);
            return dqvfi::point_line(p.jacobian, p.point, line, options);
          }};
}

Zone line_line_zone(std::string name, ZoneSpec<double> spec, KinematicChaind chain, LineSource line,
                    PluckerLine<double> static_line) {
  spec.validate();
  return {std::move(name), spec,
          [chain = std::move(chain), line, static_line](const Eigen::VectorXd& q) {
            return dqvfi::line_line(evaluate_line(chain, q, line), static_line);
          }};
}

const char* to_string(StepStatus s) {
  switch (s) {
    case StepStatus::ok: return "ok";
    case StepStatus::infeasible: return "infeasible";
    case StepStatus::unbounded: return "unbounded";
    case StepStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

void stop(ControlOutput& out, Eigen::Index n) {
  out.qdot = Eigen::VectorXd::Zero(n);
  out.qdot_p = Eigen::VectorXd::Zero(n);
  out.qdot_n = Eigen::VectorXd::Zero(n);
  out.objective = std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ControlOutput step(const KinematicChaind& chain, const Eigen::VectorXd& q, const DualQuaterniond& x_d,
                   const std::vector<Zone>& zones, const Gains& gains, const StepOptions& options) {
  const auto n = static_cast<Eigen::Index>(chain.dof());
  if (q.size() != n) throw std::invalid_argument("step: configuration length does not match the chain");

  ControlOutput out;
  const DualQuaterniond x = fkm(chain, q);

  ControlProblem problem;
  problem.J_x = pose_jacobian(chain, q);
  problem.task_error = task_error(x, x_d);
  problem.eta = gains.eta;
  problem.beta = gains.beta;
  problem.joint_limit_rows = joint_limit_rows(q, chain, gains.eta_joint);
  out.task_error_l1 = problem.task_error.lpNorm<1>();

  for (const Zone& zone : zones) {
    ZoneReport report;
    report.name = zone.name;
    if (discrete_overshoot_possible(zone.spec.eta_d, gains.period))
      out.warnings.push_back(zone.name + ": eta_d * T > 1, discrete-time overshoot possible");
    try {
      const DistancePair<double> pair = zone.evaluate(q);
      report.distance = pair.d;
      report.distance_error = zone.spec.distance_error(pair.d);
      report.low_confidence = pair.low_confidence;
      if (pair.low_confidence) out.warnings.push_back(zone.name + ": near-parallel line Jacobian (low confidence)");
      problem.zone_rows.push_back(zone_row(pair, zone.spec));
    } catch (const SingularDistanceError& e) {
      if (options.strict_singular) throw;
      report.omitted = true;
      report.distance = 0.0;
      report.distance_error = zone.spec.distance_error(0.0);
      ++out.omitted_rows;
      out.warnings.push_back(zone.name + ": row omitted, " + e.what());
    }
    out.zones.push_back(report);
  }

  const lp::CanonicalLP program = build_program(problem);
  lp::LPSolution sol;
  try {
    sol = lp::solve(program);
  } catch (const lp::NumericalError& e) {
    std::ostringstream msg;
    msg << "LP numerical failure: " << e.what() << " (condition ~" << e.condition_estimate() << ")";
    out.warnings.push_back(msg.str());
    out.status = StepStatus::numerical_failure;
    stop(out, n);
    return out;
  }
  if (sol.status != lp::Status::optimal) {
    out.status = sol.status == lp::Status::infeasible ? StepStatus::infeasible : StepStatus::unbounded;
    out.warnings.push_back(std::string("LP ") + lp::to_string(sol.status) + ", commanding zero velocity");
    stop(out, n);
    return out;
  }
  if (sol.attempts > 1)
    out.warnings.push_back("LP solved after " + std::to_string(sol.attempts) + " attempts (accuracy retry)");

  const ProgramLayout l = layout_of(problem);
  out.qdot_p = sol.g.segment(l.qdot_p(), n);
  out.qdot_n = sol.g.segment(l.qdot_n(), n);
  out.qdot = out.qdot_p - out.qdot_n;
  out.y = sol.g.segment(l.y(), l.m);
  out.z_a = sol.g.segment(l.z_a(), l.m);
  out.z_b = sol.g[l.z_b()];
  out.z_l = sol.g.segment(l.z_l(), l.limits);
  out.z_c = sol.g.segment(l.z_c(), l.zones);
  out.objective = sol.objective + objective_offset(problem);
  return out;
}

}  // namespace dqvfi
