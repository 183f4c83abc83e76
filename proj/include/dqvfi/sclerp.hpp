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

#pragma once

#include <cmath>
#include <stdexcept>

#include "dqvfi/dual_quaternion.hpp"

namespace dqvfi {

/// The relative rotation between the two poses is pi, so the shortest screw is not unique.
class AntipodalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class SclerpBranch {
  shortest,  ///< flip the relative transform so the rotation angle is in [0, pi]
  as_given,  ///< use the relative transform with the sign it has
};

/// Screw parameters of a unit dual quaternion x = cos(dual_angle/2) + axis sin(dual_angle/2),
/// dual_angle = angle + eps pitch_distance, axis = direction + eps moment.
template <typename Scalar>
struct ScrewParameters {
  Scalar angle{0};
  Scalar distance{0};
  Quaternion<Scalar> direction;
  Quaternion<Scalar> moment;
  bool pure_translation{false};
  Quaternion<Scalar> translation;  ///< only meaningful when pure_translation
};

/// Below this |sin(angle/2)| the screw is treated as a pure translation.
inline constexpr double kScrewTranslationThreshold = 1e-8;

template <typename Scalar>
ScrewParameters<Scalar> screw_decompose(const DualQuaternion<Scalar>& x) {
  using std::atan2;
  using std::cos;
  ScrewParameters<Scalar> s;
  const Quaternion<Scalar> r = x.primary();
  const Quaternion<Scalar> v = r.im();
  const Scalar sn = v.norm();
  s.angle = Scalar(2) * atan2(sn, r.re());
  if (sn < Scalar(kScrewTranslationThreshold)) {
    s.pure_translation = true;
    s.translation = x.translation();
    const Scalar tn = s.translation.norm();
    s.distance = tn;
    if (tn > Scalar(0)) s.direction = s.translation / tn;
    return s;
  }
  s.direction = v / sn;
  s.distance = Scalar(-2) * x.dual().re() / sn;
  const Scalar c = r.re();
  s.moment = (x.dual().im() - s.direction * (s.distance / Scalar(2) * c)) / sn;
  return s;
}

/// x^tau along the screw of x.
template <typename Scalar>
DualQuaternion<Scalar> screw_power(const DualQuaternion<Scalar>& x, Scalar tau) {
  using std::cos;
  using std::sin;
  const ScrewParameters<Scalar> s = screw_decompose(x);
  if (s.pure_translation) {
    // The residual rotation is below threshold; keep it scaled so tau = 1 returns x.
    const Quaternion<Scalar> r = x.primary();
    const Quaternion<Scalar> v = r.im();
    const Scalar sn = v.norm();
    const Scalar half = tau * s.angle / Scalar(2);
    const Scalar k = sn > Scalar(0) ? sin(half) / sn : tau;
    Quaternion<Scalar> rp = Quaternion<Scalar>(cos(half)) + v * k;
    rp = rp / rp.norm();
    return DualQuaternion<Scalar>::from_rotation_translation(rp, s.translation * tau);
  }
  const Scalar a = tau * s.angle / Scalar(2);
  const Scalar b = tau * s.distance / Scalar(2);
  const Scalar ca = cos(a), sa = sin(a);
  const Quaternion<Scalar> primary = Quaternion<Scalar>(ca) + s.direction * sa;
  const Quaternion<Scalar> dual = Quaternion<Scalar>(-b * sa) + s.moment * sa + s.direction * (b * ca);
  return DualQuaternion<Scalar>(primary, dual);
}

/// Screw linear interpolation x1 (x1* x2)^tau.
template <typename Scalar>
DualQuaternion<Scalar> sclerp(const DualQuaternion<Scalar>& x1, const DualQuaternion<Scalar>& x2, Scalar tau,
                              SclerpBranch branch = SclerpBranch::shortest) {
  using std::abs;
  if (!is_unit(x1, Scalar(1e-8)) || !is_unit(x2, Scalar(1e-8)))
    throw std::invalid_argument("sclerp: poses must be unit dual quaternions");
  DualQuaternion<Scalar> rel = x1.conjugate() * x2;
  if (branch == SclerpBranch::shortest) {
    if (abs(rel.primary().re()) <= Scalar(1e-10) && rel.primary().im().norm() > Scalar(0.5))
      throw AntipodalError("sclerp: relative rotation is pi; choose a branch explicitly");
    if (rel.primary().re() < Scalar(0)) rel = -rel;
  }
  return x1 * screw_power(rel, tau);
}

}  // namespace dqvfi
