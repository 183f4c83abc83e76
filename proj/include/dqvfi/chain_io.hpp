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
 * \file chain_io.hpp
 * \brief JSON descriptions of serial chains and poses.
 *
 * Chain file:
 *   { "name": "...",
 *     "base": <pose>, "effector": <pose>,
 *     "joints": [ { "type": "revolute"|"prismatic", "theta": r, "d": r, "a": r, "alpha": r,
 *                   "q_min": r|null, "q_max": r|null }, ... ],
 *     "attachment_points": [ { "name": s, "joint_index": k, "offset": [x, y, z] }, ... ] }
 *
 * Pose: an array of 8 reals (w x y z | w' x' y' z'), or
 *   { "translation": [x, y, z], "rotation": [w, x, y, z] } or
 *   { "translation": [x, y, z], "axis": [x, y, z], "angle": r }.
 * Lengths in meters, angles in radians. Missing limits mean unbounded.
 */

#pragma once

#include <stdexcept>
#include <string>

#include "dqvfi/dual_quaternion.hpp"
#include "dqvfi/kinematics.hpp"
#include "json.hpp"

namespace dqvfi::io {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DualQuaterniond parse_pose(const nlohmann::json& j);
nlohmann::json pose_to_json(const DualQuaterniond& x);

Eigen::Vector3d parse_vec3(const nlohmann::json& j, const std::string& what);
Eigen::VectorXd parse_vector(const nlohmann::json& j, const std::string& what);

KinematicChaind parse_chain(const nlohmann::json& j);
KinematicChaind load_chain(const std::string& path);

/// Reads and parses a JSON file; errors carry the path.
nlohmann::json read_json(const std::string& path);

}  // namespace dqvfi::io
