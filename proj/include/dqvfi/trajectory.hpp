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
 * \file trajectory.hpp
 * \brief Piecewise screw-linear interpolation through a list of poses.
 */

#pragma once

#include <vector>

#include "dqvfi/dual_quaternion.hpp"

namespace dqvfi {

class PiecewiseSclerp {
 public:
  /// `durations[i]` is the time spent going from poses[i] to poses[i+1]; all must be positive.
  /// Poses are sign-aligned in sequence so consecutive segments meet with the same coefficients.
  PiecewiseSclerp(std::vector<DualQuaterniond> poses, std::vector<double> durations);

  /// Throws std::out_of_range outside [0, total_duration()].
  DualQuaterniond operator()(double t) const;

  /// Same as operator() but holds the end poses outside the time range.
  DualQuaterniond clamped(double t) const;

  double total_duration() const { return total_; }
  const std::vector<DualQuaterniond>& poses() const { return poses_; }
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::vector<DualQuaterniond> poses_;
  std::vector<double> durations_;
  std::vector<double> knots_;  ///< start time of each segment, plus the end time
  double total_{0.0};
};

/// Free-function form of PiecewiseSclerp(poses, durations)(t).
DualQuaterniond generate_trajectory(const std::vector<DualQuaterniond>& poses, const std::vector<double>& durations,
                                    double t);

}  // namespace dqvfi
