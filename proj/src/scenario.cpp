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

#include "dqvfi/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dqvfi/chain_io.hpp"

namespace dqvfi::sim {

using io::ConfigError;
using nlohmann::json;

PluckerLine<double> Workspace::axis_line() const {
  return line_from(Quaterniond::pure(axis_point), Quaterniond::pure(Eigen::Vector3d(axis_direction.normalized())));
}

Plane<double> Workspace::floor() const {
  const Eigen::Vector3d n = -axis_direction.normalized();
  return plane_from(Quaterniond::pure(Eigen::Vector3d(axis_point + depth * n)), Quaterniond::pure(n));
}

PluckerLine<double> StaticArm::shaft_line() const {
  const DualQuaterniond x = fkm(chain, q, shaft_frame);
  return transform_line(x, PluckerLine<double>(Quaterniond::k(), Quaterniond()));
}

namespace {

const std::map<std::string, ZoneSpec<double>>& default_constraints() {
  static const std::map<std::string, ZoneSpec<double>> d{
      {"C1", {ZoneDirection::keep_out, 0.005, 0.5}},
      {"C2", {ZoneDirection::keep_in, 0.014, 0.5}},
      {"C3", {ZoneDirection::keep_in, 0.014, 0.5}},
      {"C4", {ZoneDirection::keep_in, 0.0, 0.5}},
  };
  return d;
}

std::vector<ScenarioSpec> default_scenarios() {
  return {
      {"S1", {}, {"C1", "C2", "C3", "C4"}},
      {"S2", {"C1"}, {"C2", "C3", "C4"}},
      {"S3", {"C1", "C2"}, {"C3", "C4"}},
      {"S4", {"C1", "C2", "C3"}, {"C4"}},
      {"S5", {"C1", "C2", "C3", "C4"}, {}},
  };
}

std::size_t constraint_index(const std::string& name) {
  for (std::size_t i = 0; i < kConstraintCount; ++i)
    if (kConstraintNames[i] == name) return i;
  throw ConfigError("unknown constraint '" + name + "'");
}

std::set<std::string> name_set(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + ": expected an array of constraint names");
  std::set<std::string> out;
  for (const json& e : j) {
    const std::string s = e.get<std::string>();
    constraint_index(s);
    out.insert(s);
  }
  return out;
}

ZoneDirection parse_direction(const std::string& s) {
  if (s == "keep_out") return ZoneDirection::keep_out;
  if (s == "keep_in") return ZoneDirection::keep_in;
  throw ConfigError("constraint direction must be keep_out or keep_in, got '" + s + "'");
}

std::size_t frame_index(const json& j, const std::string& what) {
  const auto v = j.get<long long>();
  if (v < 0) throw ConfigError(what + ": negative frame index");
  return static_cast<std::size_t>(v);
}

std::string resolve(const std::filesystem::path& dir, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? file : (dir / p).string();
}

}  // namespace

void ScenarioConfig::validate() const {
  const auto n = static_cast<Eigen::Index>(moving.chain.dof());
  if (moving.q0.size() != n) throw ConfigError("moving arm: q0 has " + std::to_string(moving.q0.size()) +
                                               " entries, the chain has " + std::to_string(n) + " joints");
  if (moving.shaft_frame < 1 || moving.shaft_frame > moving.chain.dof())
    throw ConfigError("moving arm: shaft_frame out of range");
  try {
    moving.chain.attachment(moving.wrist_point);
    if (!moving.tip_point.empty()) moving.chain.attachment(moving.tip_point);
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("moving arm: ") + e.what());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& j = moving.chain.joints()[static_cast<std::size_t>(i)];
    if (moving.q0[i] < j.q_min || moving.q0[i] > j.q_max)
      throw ConfigError("moving arm: q0[" + std::to_string(i) + "] outside the joint limits");
  }
  if (fixed.q.size() != static_cast<Eigen::Index>(fixed.chain.dof()))
    throw ConfigError("static arm: q does not match the chain");
  if (fixed.shaft_frame < 1 || fixed.shaft_frame > fixed.chain.dof())
    throw ConfigError("static arm: shaft_frame out of range");

  if (poses.size() < 2) throw ConfigError("trajectory: at least two poses are required");
  if (durations.size() + 1 != poses.size()) throw ConfigError("trajectory: need one duration per pose pair");
  for (double d : durations)
    if (!(d > 0.0)) throw ConfigError("trajectory: durations must be positive");
  for (const auto& p : poses)
    if (!is_unit(p, 1e-8)) throw ConfigError("trajectory: poses must be unit dual quaternions");

  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (!(gains.period > 0.0)) throw ConfigError("period must be positive");
  if (!(gains.eta > 0.0) || !(gains.beta > 0.0) || !(gains.eta_joint > 0.0))
    throw ConfigError("gains must be positive");

  if (!(workspace.radius > 0.0) || !(workspace.depth > 0.0)) throw ConfigError("workspace: radius and depth must be positive");
  if (!(workspace.axis_direction.norm() > 0.0)) throw ConfigError("workspace: zero axis direction");
  if (!(workspace.tool_diameter >= 0.0)) throw ConfigError("workspace: negative tool diameter");

  for (const auto& name : kConstraintNames) {
    const auto it = constraints.find(name);
    if (it == constraints.end()) throw ConfigError("constraint " + name + " is not configured");
    try {
      it->second.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(name + ": " + e.what());
    }
  }
  if (constraints.at("C1").d_safe < workspace.tool_diameter)
    throw ConfigError("C1: d_safe is smaller than the tool diameter");
  if (constraints.at("C3").d_safe > workspace.radius) throw ConfigError("C3: d_safe exceeds the cylinder radius");

  if (scenarios.empty()) throw ConfigError("no scenarios configured");
  for (const auto& s : scenarios) {
    for (const auto& c : s.enabled) constraint_index(c);
    for (const auto& c : s.expected_violations) constraint_index(c);
  }
}

const ScenarioSpec& ScenarioConfig::scenario(const std::string& name) const {
  for (const auto& s : scenarios)
    if (s.name == name) return s;
  throw ConfigError("no scenario named '" + name + "'");
}

ScenarioConfig load_config(const std::string& path) {
  const json j = io::read_json(path);
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  try {
    // KinematicChain has no default state; both arms are replaced below.
    const KinematicChaind placeholder(DualQuaterniond::identity(), std::vector<JointDescriptor<double>>(1));
    ScenarioConfig cfg{{placeholder, {}, 0, "", ""}, {placeholder, {}, 0}, {}, {}, {}, {}, {}, 20.0, {}};

    const json& m = j.at("moving_arm");
    cfg.moving.chain = io::load_chain(resolve(dir, m.at("file").get<std::string>()));
    cfg.moving.q0 = io::parse_vector(m.at("q0"), "moving_arm.q0");
    cfg.moving.shaft_frame = frame_index(m.at("shaft_frame"), "moving_arm.shaft_frame");
    cfg.moving.wrist_point = m.at("wrist_point").get<std::string>();
    cfg.moving.tip_point = m.value("tip_point", std::string());

    const json& s = j.at("static_arm");
    cfg.fixed.chain = io::load_chain(resolve(dir, s.at("file").get<std::string>()));
    cfg.fixed.q = io::parse_vector(s.at("q"), "static_arm.q");
    cfg.fixed.shaft_frame = frame_index(s.at("shaft_frame"), "static_arm.shaft_frame");

    const json& tr = j.at("trajectory");
    if (cfg.moving.q0.size() != static_cast<Eigen::Index>(cfg.moving.chain.dof()))
      throw ConfigError("moving_arm.q0 does not match the chain");
    for (const json& p : tr.at("poses")) {
      if (p.is_string()) {
        if (p.get<std::string>() != "initial") throw ConfigError("trajectory: unknown pose keyword");
        cfg.poses.push_back(fkm(cfg.moving.chain, cfg.moving.q0));
      } else {
        cfg.poses.push_back(io::parse_pose(p));
      }
    }
    for (const json& d : tr.at("durations")) cfg.durations.push_back(d.get<double>());

    cfg.duration = j.value("duration", 20.0);
    cfg.gains.period = j.value("period", 0.004);
    if (j.contains("gains")) {
      const json& g = j.at("gains");
      cfg.gains.eta = g.value("eta", cfg.gains.eta);
      cfg.gains.beta = g.value("beta", cfg.gains.beta);
      cfg.gains.eta_joint = g.value("eta_joint", cfg.gains.eta_joint);
    }

    cfg.constraints = default_constraints();
    if (j.contains("constraints")) {
      for (const auto& [name, c] : j.at("constraints").items()) {
        constraint_index(name);
        ZoneSpec<double>& spec = cfg.constraints[name];
        if (c.contains("direction")) spec.direction = parse_direction(c.at("direction").get<std::string>());
        spec.d_safe = c.value("d_safe", spec.d_safe);
        spec.eta_d = c.value("eta_d", spec.eta_d);
      }
    }

    if (j.contains("workspace")) {
      const json& w = j.at("workspace");
      Workspace& ws = cfg.workspace;
      if (w.contains("axis_point")) ws.axis_point = io::parse_vec3(w.at("axis_point"), "workspace.axis_point");
      if (w.contains("axis_direction"))
        ws.axis_direction = io::parse_vec3(w.at("axis_direction"), "workspace.axis_direction");
      ws.radius = w.value("radius", ws.radius);
      ws.depth = w.value("depth", ws.depth);
      ws.p_rcm = w.contains("p_rcm") ? io::parse_vec3(w.at("p_rcm"), "workspace.p_rcm") : ws.axis_point;
      ws.tool_diameter = w.value("tool_diameter", ws.tool_diameter);
    }

    if (j.contains("scenarios")) {
      for (const auto& [name, sc] : j.at("scenarios").items()) {
        ScenarioSpec spec;
        spec.name = name;
        spec.enabled = name_set(sc.at("enabled"), name + ".enabled");
        spec.expected_violations = name_set(sc.at("expected_violations"), name + ".expected_violations");
        cfg.scenarios.push_back(spec);
      }
    } else {
      cfg.scenarios = default_scenarios();
    }

    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<Zone> build_zones(const ScenarioConfig& cfg) {
  const KinematicChaind& chain = cfg.moving.chain;
  const LineSource shaft{cfg.moving.shaft_frame, Quaterniond::k()};
  std::vector<Zone> zones;
  zones.push_back(line_line_zone("C1", cfg.constraints.at("C1"), chain, shaft, cfg.fixed.shaft_line()));
  zones.push_back(line_point_zone("C2", cfg.constraints.at("C2"), chain, shaft, Quaterniond::pure(cfg.workspace.p_rcm)));
  zones.push_back(point_line_zone("C3", cfg.constraints.at("C3"), chain, PointSource{cfg.moving.wrist_point},
                                  cfg.workspace.axis_line()));
  zones.push_back(point_plane_zone("C4", cfg.constraints.at("C4"), chain, PointSource{cfg.moving.tip_point},
                                   cfg.workspace.floor()));
  return zones;
}

namespace {

Quaterniond point_of(const KinematicChaind& chain, const Eigen::VectorXd& q, const std::string& attachment) {
  return evaluate_point(chain, q, PointSource{attachment}).point;
}

// Raw distances from the geometry alone, so disabled and singular pairs are logged too.
std::array<double, kConstraintCount> measure(const ScenarioConfig& cfg, const PluckerLine<double>& static_line,
                                             const Eigen::VectorXd& q) {
  const KinematicChaind& chain = cfg.moving.chain;
  const PluckerLine<double> shaft =
      transform_line(fkm(chain, q, cfg.moving.shaft_frame), PluckerLine<double>(Quaterniond::k(), Quaterniond()));
  return {
      line_line_distance(shaft, static_line),
      point_line_distance(Quaterniond::pure(cfg.workspace.p_rcm), shaft),
      point_line_distance(point_of(chain, q, cfg.moving.wrist_point), cfg.workspace.axis_line()),
      point_plane_distance(point_of(chain, q, cfg.moving.tip_point), cfg.workspace.floor()),
  };
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const ScenarioSpec& spec, const RunOptions& options) {
  Gains gains = cfg.gains;
  if (options.period) gains.period = *options.period;
  if (!(gains.period > 0.0)) throw ConfigError("period must be positive");

  const PiecewiseSclerp trajectory(cfg.poses, cfg.durations);
  const std::vector<Zone> all = build_zones(cfg);
  std::vector<Zone> active;
  for (const Zone& z : all)
    if (spec.enabled.count(z.name)) active.push_back(z);
  const PluckerLine<double> static_line = cfg.fixed.shaft_line();

  const auto ticks = static_cast<std::size_t>(std::llround(cfg.duration / gains.period));
  ScenarioResult result;
  result.records.reserve(ticks + 1);
  Eigen::VectorXd q = cfg.moving.q0;
  std::size_t failsafe = 0, omitted = 0, low_conf = 0;

  for (std::size_t k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) * gains.period;
    const ControlOutput out = step(cfg.moving.chain, q, trajectory.clamped(t), active, gains,
                                   StepOptions{options.strict_singular});
    LogRecord rec;
    rec.t = t;
    rec.q = q;
    rec.error_l1 = out.task_error_l1;
    rec.qdot_norm = out.qdot.norm();
    rec.distance = measure(cfg, static_line, q);
    for (std::size_t c = 0; c < kConstraintCount; ++c)
      rec.distance_error[c] = cfg.constraints.at(kConstraintNames[c]).distance_error(rec.distance[c]);
    rec.lp_status = to_string(out.status);
    rec.objective = out.objective;
    result.records.push_back(std::move(rec));

    if (out.status != StepStatus::ok) ++failsafe;
    omitted += out.omitted_rows;
    for (const auto& z : out.zones)
      if (z.low_confidence) {
        ++low_conf;
        break;
      }
    if (k < ticks) q += out.qdot * gains.period;
  }

  result.summary = summarize(spec.name, result.records, spec.enabled, spec.expected_violations);
  result.summary.failsafe_events = failsafe;
  result.summary.omitted_rows = omitted;
  result.summary.low_confidence_ticks = low_conf;
  return result;
}

ScenarioSummary summarize(const std::string& name, const std::vector<LogRecord>& records,
                          const std::set<std::string>& enabled, const std::set<std::string>& expected) {
  ScenarioSummary s;
  s.name = name;
  s.expected = expected;
  s.ticks = records.size();
  for (std::size_t c = 0; c < kConstraintCount; ++c) {
    s.constraints[c].enabled = enabled.count(kConstraintNames[c]) > 0;
    s.constraints[c].min_distance_error = std::numeric_limits<double>::infinity();
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const LogRecord& r = records[k];
    s.max_error_l1 = std::max(s.max_error_l1, r.error_l1);
    for (std::size_t c = 0; c < kConstraintCount; ++c) {
      ConstraintSummary& cs = s.constraints[c];
      if (r.distance_error[c] < cs.min_distance_error) {
        cs.min_distance_error = r.distance_error[c];
        cs.worst_distance = r.distance[c];
      }
      if (r.distance_error[c] < -kViolationMargin) ++cs.violating_ticks;
    }
    if (k > 0) {
      const double dv = r.qdot_norm - records[k - 1].qdot_norm;
      sq += dv * dv;
    }
  }
  if (!records.empty()) s.final_error_l1 = records.back().error_l1;
  if (records.size() > 1) s.vibration = std::sqrt(sq / static_cast<double>(records.size() - 1));
  for (std::size_t c = 0; c < kConstraintCount; ++c)
    if (s.constraints[c].violated()) s.violated.insert(kConstraintNames[c]);
  return s;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_log(std::ostream& os, const std::vector<LogRecord>& records, std::size_t dof) {
  os << "t";
  for (std::size_t i = 1; i <= dof; ++i) os << ",q" << i;
  os << ",err_l1,qdot_norm";
  for (const auto& c : kConstraintNames) os << ",d_" << c;
  for (const auto& c : kConstraintNames) os << ",dtilde_" << c;
  os << ",lp_status,objective\n";
  for (const LogRecord& r : records) {
    if (static_cast<std::size_t>(r.q.size()) != dof) throw std::invalid_argument("write_log: record width mismatch");
    os << fmt(r.t);
    for (Eigen::Index i = 0; i < r.q.size(); ++i) os << ',' << fmt(r.q[i]);
    os << ',' << fmt(r.error_l1) << ',' << fmt(r.qdot_norm);
    for (double d : r.distance) os << ',' << fmt(d);
    for (double d : r.distance_error) os << ',' << fmt(d);
    os << ',' << r.lp_status << ',' << fmt(r.objective) << '\n';
  }
}

void write_log(const std::string& path, const std::vector<LogRecord>& records, std::size_t dof) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_log: cannot open " + path);
  write_log(out, records, dof);
  out.flush();
  if (!out) throw std::runtime_error("write_log: write failed for " + path);
}

std::vector<LogRecord> read_log(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_log: missing header");
  std::size_t columns = 1;
  for (char ch : line) columns += ch == ',';
  const std::size_t fixed_cols = 1 + 2 + 2 * kConstraintCount + 2;
  if (columns < fixed_cols) throw std::runtime_error("read_log: header too short");
  const std::size_t dof = columns - fixed_cols;

  std::vector<LogRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != columns) throw std::runtime_error("read_log: row has the wrong number of columns");
    std::size_t c = 0;
    LogRecord r;
    r.t = std::stod(cells[c++]);
    r.q.resize(static_cast<Eigen::Index>(dof));
    for (std::size_t i = 0; i < dof; ++i) r.q[static_cast<Eigen::Index>(i)] = std::stod(cells[c++]);
    r.error_l1 = std::stod(cells[c++]);
    r.qdot_norm = std::stod(cells[c++]);
    for (double& d : r.distance) d = std::stod(cells[c++]);
    for (double& d : r.distance_error) d = std::stod(cells[c++]);
    r.lp_status = cells[c++];
    r.objective = std::stod(cells[c++]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary(std::ostream& os, const std::vector<ScenarioSummary>& summaries) {
  const auto set_text = [](const std::set<std::string>& s) {
    if (s.empty()) return std::string("-");
    std::string out;
    for (const auto& e : s) out += (out.empty() ? "" : ",") + e;
    return out;
  };
  os << std::left;
  for (const ScenarioSummary& s : summaries) {
    os << "scenario " << s.name << "  ticks=" << s.ticks << "  max_err_l1=" << fmt(s.max_error_l1)
       << "  final_err_l1=" << fmt(s.final_error_l1) << "  failsafe=" << s.failsafe_events
       << "  omitted_rows=" << s.omitted_rows << "  low_confidence_ticks=" << s.low_confidence_ticks
       << "  vibration=" << fmt(s.vibration) << "\n";
    os << "  " << std::setw(6) << "zone" << std::setw(9) << "enabled" << std::setw(16) << "worst_d[m]" << std::setw(16)
       << "min_dtilde[m]" << std::setw(12) << "viol_ticks" << "violated\n";
    for (std::size_t c = 0; c < kConstraintCount; ++c) {
      const ConstraintSummary& cs = s.constraints[c];
      os << "  " << std::setw(6) << kConstraintNames[c] << std::setw(9) << (cs.enabled ? "yes" : "no")
         << std::setw(16) << fmt(cs.worst_distance) << std::setw(16) << fmt(cs.min_distance_error) << std::setw(12)
         << cs.violating_ticks << (cs.violated() ? "yes" : "no") << "\n";
    }
    os << "  violated: " << set_text(s.violated) << "  expected: " << set_text(s.expected)
       << "  pattern: " << (s.matches() ? "MATCH" : "MISMATCH") << "\n\n";
  }
}

}  // namespace dqvfi::sim
