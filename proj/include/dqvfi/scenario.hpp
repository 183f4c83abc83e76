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
 * \file scenario.hpp
 * \brief Two-arm workspace scenarios: configuration, closed-loop runs, logs and summaries.
 *
 * Four constraints are defined on the moving arm:
 *   C1  shaft line vs. the static arm's shaft line (line-line)
 *   C2  shaft line vs. the entry point p_rcm          (line-point)
 *   C3  wrist point vs. the workspace cylinder axis    (point-line)
 *   C4  tool tip vs. the cylinder floor plane          (point-plane)
 * Every scenario enables a subset; all four distances are logged regardless.
 */

#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dqvfi/controller.hpp"
#include "dqvfi/trajectory.hpp"

namespace dqvfi::sim {

inline constexpr std::size_t kConstraintCount = 4;
inline const std::array<std::string, kConstraintCount> kConstraintNames{"C1", "C2", "C3", "C4"};

/// Margin below which a logged d-tilde counts as a violation, in meters.
inline constexpr double kViolationMargin = 1e-4;

struct Workspace {
  Eigen::Vector3d axis_point{Eigen::Vector3d::Zero()};  ///< top center of the cylinder
  Eigen::Vector3d axis_direction{Eigen::Vector3d::UnitZ()};  ///< points out of the workspace
  double radius{0.028};
  double depth{0.08};
  Eigen::Vector3d p_rcm{Eigen::Vector3d::Zero()};
  double tool_diameter{0.0035};

  PluckerLine<double> axis_line() const;
  /// Floor plane at `depth`, normal pointing down (away from the workspace interior).
  Plane<double> floor() const;
};

struct MovingArm {
  KinematicChaind chain;
  Eigen::VectorXd q0;
  std::size_t shaft_frame{0};
  std::string wrist_point;  ///< attachment used by C3
  std::string tip_point;    ///< attachment used by C4; empty for the effector
};

struct StaticArm {
  KinematicChaind chain;
  Eigen::VectorXd q;
  std::size_t shaft_frame{0};
  PluckerLine<double> shaft_line() const;
};

struct ScenarioSpec {
  std::string name;
  std::set<std::string> enabled;
  std::set<std::string> expected_violations;
};

struct ScenarioConfig {
  MovingArm moving;
  StaticArm fixed;
  std::vector<DualQuaterniond> poses;  ///< resolved; the first is usually the initial pose
  std::vector<double> durations;
  Gains gains;
  std::map<std::string, ZoneSpec<double>> constraints;  ///< keyed by C1..C4
  Workspace workspace;
  double duration{20.0};
  std::vector<ScenarioSpec> scenarios;

  /// Throws io::ConfigError on any inconsistency.
  void validate() const;
  const ScenarioSpec& scenario(const std::string& name) const;
};

/// Parses a config file; arm paths are resolved against the config's directory.
ScenarioConfig load_config(const std::string& path);

/// The four zones of a configuration, in C1..C4 order.
std::vector<Zone> build_zones(const ScenarioConfig& cfg);

struct LogRecord {
  double t{0.0};
  Eigen::VectorXd q;
  double error_l1{0.0};
  double qdot_norm{0.0};
  std::array<double, kConstraintCount> distance{};
  std::array<double, kConstraintCount> distance_error{};
  std::string lp_status{"ok"};
  double objective{0.0};
};

struct ConstraintSummary {
  double worst_distance{0.0};  ///< d at the tick with the smallest margin
  double min_distance_error{0.0};
  std::size_t violating_ticks{0};
  bool enabled{false};
  bool violated() const { return min_distance_error < -kViolationMargin; }
};

struct ScenarioSummary {
  std::string name;
  std::array<ConstraintSummary, kConstraintCount> constraints{};
  double max_error_l1{0.0};
  double final_error_l1{0.0};
  std::size_t ticks{0};
  std::size_t failsafe_events{0};
  std::size_t omitted_rows{0};
  std::size_t low_confidence_ticks{0};
  /// RMS of the tick-to-tick change of ||q-dot||_2, rad/s or m/s.
  double vibration{0.0};
  std::set<std::string> violated;
  std::set<std::string> expected;
  bool matches() const { return violated == expected; }
};

struct RunOptions {
  std::optional<double> period;  ///< overrides gains.period
  bool strict_singular{false};
};

struct ScenarioResult {
  std::vector<LogRecord> records;
  ScenarioSummary summary;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const ScenarioSpec& spec, const RunOptions& options = {});

ScenarioSummary summarize(const std::string& name, const std::vector<LogRecord>& records,
                          const std::set<std::string>& enabled, const std::set<std::string>& expected);

/// CSV with header: t, q1..qn, err_l1, qdot_norm, d_C1..d_C4, dtilde_C1..dtilde_C4, lp_status, objective.
void write_log(std::ostream& os, const std::vector<LogRecord>& records, std::size_t dof);
void write_log(const std::string& path, const std::vector<LogRecord>& records, std::size_t dof);
std::vector<LogRecord> read_log(std::istream& is);

/// Fixed-width text table of several scenario summaries.
void write_summary(std::ostream& os, const std::vector<ScenarioSummary>& summaries);

}  // namespace dqvfi::sim
