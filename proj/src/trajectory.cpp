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

#include "dqvfi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dqvfi/sclerp.hpp"

namespace dqvfi {

PiecewiseSclerp::PiecewiseSclerp(std::vector<DualQuaterniond> poses, std::vector<double> durations)
    : poses_(std::move(poses)), durations_(std::move(durations)) {
  if (poses_.size() < 2) throw std::invalid_argument("trajectory: at least two poses are required");
  if (durations_.size() + 1 != poses_.size())
    throw std::invalid_argument("trajectory: need one duration per consecutive pose pair");
  for (double d : durations_)
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("trajectory: durations must be positive");
  for (std::size_t i = 0; i < poses_.size(); ++i) {
    if (!is_unit(poses_[i], 1e-8))
      throw std::invalid_argument("trajectory: pose " + std::to_string(i) + " is not a unit dual quaternion");
    poses_[i] = normalize(poses_[i]);
    if (i > 0 && poses_[i - 1].primary().coeffs().dot(poses_[i].primary().coeffs()) < 0.0) poses_[i] = -poses_[i];
  }
  knots_.push_back(0.0);
  for (double d : durations_) knots_.push_back(knots_.back() + d);
  total_ = knots_.back();
}

DualQuaterniond PiecewiseSclerp::operator()(double t) const {
  if (!(t >= 0.0 && t <= total_))
    throw std::out_of_range("trajectory: t = " + std::to_string(t) + " outside [0, " + std::to_string(total_) + "]");
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const std::size_t seg = std::min<std::size_t>(static_cast<std::size_t>(it - knots_.begin()) - 1, durations_.size() - 1);
  const double tau = std::clamp((t - knots_[seg]) / durations_[seg], 0.0, 1.0);
  if (tau == 0.0) return poses_[seg];
  if (tau == 1.0) return poses_[seg + 1];
  return normalize(sclerp(poses_[seg], poses_[seg + 1], tau, SclerpBranch::as_given));
}

DualQuaterniond PiecewiseSclerp::clamped(double t) const { return (*this)(std::clamp(t, 0.0, total_)); }

DualQuaterniond generate_trajectory(const std::vector<DualQuaterniond>& poses, const std::vector<double>& durations,
                                    double t) {
  return PiecewiseSclerp(poses, durations)(t);
}

}  // namespace dqvfi
