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

#include "dqvfi/chain_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace dqvfi::io {

using nlohmann::json;

namespace {

double number(const json& j, const char* key, const std::string& where, double fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Eigen::Vector3d parse_vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + ": expected an array of 3 numbers");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError(what + ": expected numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

Eigen::VectorXd parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + ": expected numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

DualQuaterniond parse_pose(const json& j) {
  if (j.is_array()) {
    const Eigen::VectorXd v = parse_vector(j, "pose");
    if (v.size() != 8) throw ConfigError("pose: expected 8 coefficients");
    const DualQuaterniond x{Eigen::Matrix<double, 8, 1>(v)};
    if (!is_unit(x, 1e-9)) throw ConfigError("pose: not a unit dual quaternion");
    return normalize(x);
  }
  if (!j.is_object()) throw ConfigError("pose: expected an array or an object");
  const Eigen::Vector3d t = j.contains("translation") ? parse_vec3(j.at("translation"), "pose.translation")
                                                      : Eigen::Vector3d::Zero();
  Quaterniond r = Quaterniond::identity();
  if (j.contains("rotation")) {
    const Eigen::VectorXd q = parse_vector(j.at("rotation"), "pose.rotation");
    if (q.size() != 4) throw ConfigError("pose.rotation: expected [w, x, y, z]");
    if (std::abs(q.norm() - 1.0) > 1e-9) throw ConfigError("pose.rotation: quaternion must have unit norm");
    r = Quaterniond(Eigen::Vector4d(q / q.norm()));
  } else if (j.contains("axis")) {
    const Eigen::Vector3d axis = parse_vec3(j.at("axis"), "pose.axis");
    if (axis.norm() == 0.0) throw ConfigError("pose.axis: zero vector");
    r = Quaterniond::rotation(axis, number(j, "angle", "pose", 0.0));
  }
  return DualQuaterniond::from_rotation_translation(r, Quaterniond::pure(t));
}

json pose_to_json(const DualQuaterniond& x) {
  const Quaterniond t = x.translation();
  const Quaterniond& r = x.primary();
  return json{{"translation", {t.x(), t.y(), t.z()}}, {"rotation", {r.w(), r.x(), r.y(), r.z()}}};
}

KinematicChaind parse_chain(const json& j) {
  if (!j.is_object()) throw ConfigError("chain: expected an object");
  if (!j.contains("joints") || !j.at("joints").is_array()) throw ConfigError("chain: 'joints' array is required");

  std::vector<JointDescriptor<double>> joints;
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < j.at("joints").size(); ++i) {
    const json& jj = j.at("joints")[i];
    const std::string where = "joint " + std::to_string(i + 1);
    if (!jj.is_object()) throw ConfigError(where + ": expected an object");
    JointDescriptor<double> d;
    const std::string type = jj.value("type", "revolute");
    if (type == "revolute") d.kind = JointKind::revolute;
    else if (type == "prismatic") d.kind = JointKind::prismatic;
    else throw ConfigError(where + ": unknown joint type '" + type + "'");
    d.theta = number(jj, "theta", where, 0.0);
    d.d = number(jj, "d", where, 0.0);
    d.a = number(jj, "a", where, 0.0);
    d.alpha = number(jj, "alpha", where, 0.0);
    d.q_min = number(jj, "q_min", where, -inf);
    d.q_max = number(jj, "q_max", where, inf);
    joints.push_back(d);
  }

  std::vector<AttachmentPoint<double>> points;
  if (j.contains("attachment_points")) {
    for (const json& p : j.at("attachment_points")) {
      AttachmentPoint<double> ap;
      ap.name = p.at("name").get<std::string>();
      const auto idx = p.at("joint_index").get<long long>();
      if (idx < 0) throw ConfigError("attachment point '" + ap.name + "': negative joint_index");
      ap.joint_index = static_cast<std::size_t>(idx);
      if (p.contains("offset")) ap.local_offset = parse_vec3(p.at("offset"), "attachment point offset");
      points.push_back(ap);
    }
  }

  const DualQuaterniond base = j.contains("base") ? parse_pose(j.at("base")) : DualQuaterniond::identity();
  const DualQuaterniond eff = j.contains("effector") ? parse_pose(j.at("effector")) : DualQuaterniond::identity();
  try {
    return KinematicChaind(base, joints, eff, points);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("chain: ") + e.what());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

KinematicChaind load_chain(const std::string& path) {
  try {
    return parse_chain(read_json(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace dqvfi::io
