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
 * \file dual_quaternion.hpp
 * \brief Quaternion and dual quaternion algebra on top of Eigen.
 *
 * Coefficients are laid out as (w, x, y, z | w', x', y', z'). That layout is
 * what vec4/vec8 return, and the Hamilton operators are written for it.
 */

#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dqvfi {

template <typename Scalar> using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar> using Vector8 = Eigen::Matrix<Scalar, 8, 1>;
template <typename Scalar> using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar> using Matrix8 = Eigen::Matrix<Scalar, 8, 8>;
template <typename Scalar> using Matrix4X = Eigen::Matrix<Scalar, 4, Eigen::Dynamic>;
template <typename Scalar> using Matrix8X = Eigen::Matrix<Scalar, 8, Eigen::Dynamic>;
template <typename Scalar> using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <typename Scalar> using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Raised when an operation needs a pure (zero real part) argument.
class NotPureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised on a division by a vanishing norm.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Default absolute tolerance for purity/unit checks on inputs.
inline constexpr double kPurityTolerance = 1e-10;

template <typename Scalar>
class Quaternion {
 public:
  Quaternion() : coeffs_(Vector4<Scalar>::Zero()) {}
  explicit Quaternion(Scalar w, Scalar x = Scalar(0), Scalar y = Scalar(0), Scalar z = Scalar(0))
      : coeffs_(w, x, y, z) {}
  explicit Quaternion(const Vector4<Scalar>& v) : coeffs_(v) {}

  /// Pure quaternion from an R^3 vector.
  static Quaternion pure(const Eigen::Matrix<Scalar, 3, 1>& v) { return Quaternion(Scalar(0), v.x(), v.y(), v.z()); }
  static Quaternion pure(Scalar x, Scalar y, Scalar z) { return Quaternion(Scalar(0), x, y, z); }
  static Quaternion identity() { return Quaternion(Scalar(1)); }
  static Quaternion i() { return Quaternion(Scalar(0), Scalar(1)); }
  static Quaternion j() { return Quaternion(Scalar(0), Scalar(0), Scalar(1)); }
  static Quaternion k() { return Quaternion(Scalar(0), Scalar(0), Scalar(0), Scalar(1)); }

  /// cos(angle/2) + axis sin(angle/2); axis need not be normalized.
  static Quaternion rotation(const Eigen::Matrix<Scalar, 3, 1>& axis, Scalar angle) {
    using std::cos;
    using std::sin;
    const Scalar n = axis.norm();
    if (n == Scalar(0)) throw DegenerateError("rotation axis has zero norm");
    const Eigen::Matrix<Scalar, 3, 1> u = axis / n;
    const Scalar s = sin(angle / Scalar(2));
    return Quaternion(cos(angle / Scalar(2)), u.x() * s, u.y() * s, u.z() * s);
  }

  Scalar w() const { return coeffs_[0]; }
  Scalar x() const { return coeffs_[1]; }
  Scalar y() const { return coeffs_[2]; }
  Scalar z() const { return coeffs_[3]; }

  const Vector4<Scalar>& coeffs() const { return coeffs_; }
  Eigen::Matrix<Scalar, 3, 1> vec3() const { return coeffs_.template tail<3>(); }

  Scalar re() const { return coeffs_[0]; }
  Quaternion im() const { return Quaternion(Scalar(0), coeffs_[1], coeffs_[2], coeffs_[3]); }
  Quaternion conjugate() const { return Quaternion(coeffs_[0], -coeffs_[1], -coeffs_[2], -coeffs_[3]); }
  Scalar norm() const { return coeffs_.norm(); }
  Scalar squared_norm() const { return coeffs_.squaredNorm(); }

  bool is_pure(Scalar tol = Scalar(kPurityTolerance)) const {
    using std::abs;
    return abs(coeffs_[0]) <= tol;
  }

  Quaternion operator-() const { return Quaternion(Vector4<Scalar>(-coeffs_)); }
  Quaternion operator+(const Quaternion& o) const { return Quaternion(Vector4<Scalar>(coeffs_ + o.coeffs_)); }
  Quaternion operator-(const Quaternion& o) const { return Quaternion(Vector4<Scalar>(coeffs_ - o.coeffs_)); }
  Quaternion operator*(Scalar s) const { return Quaternion(Vector4<Scalar>(coeffs_ * s)); }
  Quaternion operator/(Scalar s) const { return Quaternion(Vector4<Scalar>(coeffs_ / s)); }

  Quaternion operator*(const Quaternion& o) const {
    const Scalar a1 = w(), b1 = x(), c1 = y(), d1 = z();
    const Scalar a2 = o.w(), b2 = o.x(), c2 = o.y(), d2 = o.z();
    return Quaternion(a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                      a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                      a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                      a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2);
  }

  Quaternion& operator+=(const Quaternion& o) { coeffs_ += o.coeffs_; return *this; }
  Quaternion& operator-=(const Quaternion& o) { coeffs_ -= o.coeffs_; return *this; }

  bool operator==(const Quaternion& o) const { return coeffs_ == o.coeffs_; }

 private:
  Vector4<Scalar> coeffs_;
};

template <typename Scalar>
Quaternion<Scalar> operator*(Scalar s, const Quaternion<Scalar>& q) { return q * s; }

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const Quaternion<Scalar>& q) {
  return os << "(" << q.w() << " + " << q.x() << "i + " << q.y() << "j + " << q.z() << "k)";
}

/// a + eps b with eps^2 = 0; what the norm and inner product of dual quaternions reduce to.
template <typename Scalar>
struct DualScalar {
  Scalar primary{0};
  Scalar dual{0};
};

template <typename Scalar>
class DualQuaternion {
 public:
  DualQuaternion() = default;
  explicit DualQuaternion(const Quaternion<Scalar>& primary, const Quaternion<Scalar>& dual = Quaternion<Scalar>())
      : primary_(primary), dual_(dual) {}
  explicit DualQuaternion(const Vector8<Scalar>& v)
      : primary_(Vector4<Scalar>(v.template head<4>())), dual_(Vector4<Scalar>(v.template tail<4>())) {}
  explicit DualQuaternion(Scalar real) : primary_(real) {}

  static DualQuaternion identity() { return DualQuaternion(Quaternion<Scalar>::identity()); }
  /// The dual unit eps itself.
  static DualQuaternion epsilon() { return DualQuaternion(Quaternion<Scalar>(), Quaternion<Scalar>::identity()); }

  /// Rigid pose r + eps (1/2) t r.
  static DualQuaternion from_rotation_translation(const Quaternion<Scalar>& r, const Quaternion<Scalar>& t) {
    return DualQuaternion(r, Scalar(0.5) * (t * r));
  }
  static DualQuaternion from_translation(const Quaternion<Scalar>& t) {
    return from_rotation_translation(Quaternion<Scalar>::identity(), t);
  }

  const Quaternion<Scalar>& primary() const { return primary_; }
  const Quaternion<Scalar>& dual() const { return dual_; }

  DualScalar<Scalar> re() const { return {primary_.re(), dual_.re()}; }
  DualQuaternion im() const { return DualQuaternion(primary_.im(), dual_.im()); }
  DualQuaternion conjugate() const { return DualQuaternion(primary_.conjugate(), dual_.conjugate()); }

  bool is_pure(Scalar tol = Scalar(kPurityTolerance)) const { return primary_.is_pure(tol) && dual_.is_pure(tol); }

  /// Translation of a unit dual quaternion, 2 D(x) P(x)*.
  Quaternion<Scalar> translation() const { return Scalar(2) * (dual_ * primary_.conjugate()); }
  Quaternion<Scalar> rotation() const { return primary_; }

  DualQuaternion operator-() const { return DualQuaternion(-primary_, -dual_); }
  DualQuaternion operator+(const DualQuaternion& o) const { return DualQuaternion(primary_ + o.primary_, dual_ + o.dual_); }
  DualQuaternion operator-(const DualQuaternion& o) const { return DualQuaternion(primary_ - o.primary_, dual_ - o.dual_); }
  DualQuaternion operator*(Scalar s) const { return DualQuaternion(primary_ * s, dual_ * s); }

  /// eps^2 = 0: P(ab) = P(a)P(b), D(ab) = P(a)D(b) + D(a)P(b).
  DualQuaternion operator*(const DualQuaternion& o) const {
    return DualQuaternion(primary_ * o.primary_, primary_ * o.dual_ + dual_ * o.primary_);
  }

  bool operator==(const DualQuaternion& o) const { return primary_ == o.primary_ && dual_ == o.dual_; }

 private:
  Quaternion<Scalar> primary_;
  Quaternion<Scalar> dual_;
};

template <typename Scalar>
DualQuaternion<Scalar> operator*(Scalar s, const DualQuaternion<Scalar>& h) { return h * s; }

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const DualQuaternion<Scalar>& h) {
  return os << h.primary() << " + eps" << h.dual();
}

using Quaterniond = Quaternion<double>;
using DualQuaterniond = DualQuaternion<double>;

// ---------------------------------------------------------------------------
// Free functions

template <typename Scalar> Vector4<Scalar> vec4(const Quaternion<Scalar>& q) { return q.coeffs(); }

template <typename Scalar> Vector8<Scalar> vec8(const DualQuaternion<Scalar>& h) {
  Vector8<Scalar> v;
  v << h.primary().coeffs(), h.dual().coeffs();
  return v;
}

template <typename Scalar> Quaternion<Scalar> P(const DualQuaternion<Scalar>& h) { return h.primary(); }
template <typename Scalar> Quaternion<Scalar> D(const DualQuaternion<Scalar>& h) { return h.dual(); }
template <typename Scalar> DualQuaternion<Scalar> conj(const DualQuaternion<Scalar>& h) { return h.conjugate(); }
template <typename Scalar> Quaternion<Scalar> conj(const Quaternion<Scalar>& q) { return q.conjugate(); }

/// The four part operators of a dual quaternion.
template <typename Scalar>
struct Parts {
  Quaternion<Scalar> primary;
  Quaternion<Scalar> dual;
  DualScalar<Scalar> re;
  DualQuaternion<Scalar> im;
};

template <typename Scalar>
Parts<Scalar> parts(const DualQuaternion<Scalar>& h) {
  return {h.primary(), h.dual(), h.re(), h.im()};
}

/// ||h|| = sqrt(h h*). For h h* = a + eps b the square root is sqrt(a) + eps b / (2 sqrt(a)).
template <typename Scalar>
DualScalar<Scalar> norm(const DualQuaternion<Scalar>& h) {
  using std::sqrt;
  const Scalar a = h.primary().squared_norm();
  const Scalar b = Scalar(2) * h.primary().coeffs().dot(h.dual().coeffs());
  const Scalar pn = sqrt(a);
  if (pn == Scalar(0)) throw DegenerateError("dual quaternion norm: primary part is zero");
  return {pn, b / (Scalar(2) * pn)};
}

template <typename Scalar> Scalar norm(const Quaternion<Scalar>& q) { return q.norm(); }

/// vec4(a b) = H4+(a) vec4(b)
template <typename Scalar>
Matrix4<Scalar> hamilton_plus(const Quaternion<Scalar>& a) {
  const Scalar w = a.w(), x = a.x(), y = a.y(), z = a.z();
  Matrix4<Scalar> H;
  H << w, -x, -y, -z,
       x,  w, -z,  y,
       y,  z,  w, -x,
       z, -y,  x,  w;
  return H;
}

/// vec4(a b) = H4-(b) vec4(a)
template <typename Scalar>
Matrix4<Scalar> hamilton_minus(const Quaternion<Scalar>& b) {
  const Scalar w = b.w(), x = b.x(), y = b.y(), z = b.z();
  Matrix4<Scalar> H;
  H << w, -x, -y, -z,
       x,  w,  z, -y,
       y, -z,  w,  x,
       z,  y, -x,  w;
  return H;
}

template <typename Scalar>
Matrix8<Scalar> hamilton_plus(const DualQuaternion<Scalar>& a) {
  Matrix8<Scalar> H = Matrix8<Scalar>::Zero();
  const Matrix4<Scalar> hp = hamilton_plus(a.primary());
  H.template topLeftCorner<4, 4>() = hp;
  H.template bottomRightCorner<4, 4>() = hp;
  H.template bottomLeftCorner<4, 4>() = hamilton_plus(a.dual());
  return H;
}

template <typename Scalar>
Matrix8<Scalar> hamilton_minus(const DualQuaternion<Scalar>& b) {
  Matrix8<Scalar> H = Matrix8<Scalar>::Zero();
  const Matrix4<Scalar> hm = hamilton_minus(b.primary());
  H.template topLeftCorner<4, 4>() = hm;
  H.template bottomRightCorner<4, 4>() = hm;
  H.template bottomLeftCorner<4, 4>() = hamilton_minus(b.dual());
  return H;
}

enum class HamiltonSide { plus, minus };

template <typename Scalar>
Matrix4<Scalar> hamilton4(const Quaternion<Scalar>& a, HamiltonSide side) {
  return side == HamiltonSide::plus ? hamilton_plus(a) : hamilton_minus(a);
}

template <typename Scalar>
Matrix8<Scalar> hamilton8(const DualQuaternion<Scalar>& a, HamiltonSide side) {
  return side == HamiltonSide::plus ? hamilton_plus(a) : hamilton_minus(a);
}

/// diag(1, -1, -1, -1): vec4(q*) = C4 vec4(q).
template <typename Scalar>
Matrix4<Scalar> conjugation_matrix4() {
  return Vector4<Scalar>(Scalar(1), Scalar(-1), Scalar(-1), Scalar(-1)).asDiagonal();
}

template <typename Scalar>
Matrix8<Scalar> conjugation_matrix8() {
  Vector8<Scalar> d;
  d << Scalar(1), Scalar(-1), Scalar(-1), Scalar(-1), Scalar(1), Scalar(-1), Scalar(-1), Scalar(-1);
  return d.asDiagonal();
}

/// S(a): vec4(a x b) = S(a) vec4(b) = S(b)^T vec4(a). Requires a pure.
template <typename Scalar>
Matrix4<Scalar> crossmatrix(const Quaternion<Scalar>& a) {
  if (!a.is_pure()) throw NotPureError("crossmatrix: argument must be a pure quaternion");
  Matrix4<Scalar> S = Matrix4<Scalar>::Zero();
  S(1, 2) = -a.z(); S(1, 3) =  a.y();
  S(2, 1) =  a.z(); S(2, 3) = -a.x();
  S(3, 1) = -a.y(); S(3, 2) =  a.x();
  return S;
}

/// <a, b> = -(ab + ba)/2 for pure quaternions. Reduces to the R^3 dot product.
template <typename Scalar>
Scalar inner(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
  if (!a.is_pure() || !b.is_pure()) throw NotPureError("inner: arguments must be pure quaternions");
  return a.coeffs().dot(b.coeffs());
}

/// (ab - ba)/2 for pure quaternions.
template <typename Scalar>
Quaternion<Scalar> cross(const Quaternion<Scalar>& a, const Quaternion<Scalar>& b) {
  if (!a.is_pure() || !b.is_pure()) throw NotPureError("cross: arguments must be pure quaternions");
  return Quaternion<Scalar>::pure(a.vec3().cross(b.vec3()));
}

template <typename Scalar>
DualQuaternion<Scalar> inner(const DualQuaternion<Scalar>& a, const DualQuaternion<Scalar>& b) {
  if (!a.is_pure() || !b.is_pure()) throw NotPureError("inner: arguments must be pure dual quaternions");
  return Scalar(-0.5) * (a * b + b * a);
}

template <typename Scalar>
DualQuaternion<Scalar> cross(const DualQuaternion<Scalar>& a, const DualQuaternion<Scalar>& b) {
  if (!a.is_pure() || !b.is_pure()) throw NotPureError("cross: arguments must be pure dual quaternions");
  return Scalar(0.5) * (a * b - b * a);
}

/// Row mapping q-dot to d||a||/dt given vec4(a-dot) = J_a q-dot. Stated for pure a, but the
/// gradient of the Euclidean norm is the same for any quaternion, so real parts are accepted.
template <typename Scalar, typename Derived>
RowVectorX<Scalar> norm_derivative_row(const Quaternion<Scalar>& a, const Eigen::MatrixBase<Derived>& J_a) {
  static_assert(Derived::RowsAtCompileTime == 4 || Derived::RowsAtCompileTime == Eigen::Dynamic);
  if (J_a.rows() != 4) throw std::invalid_argument("norm_derivative_row: Jacobian must have 4 rows");
  const Scalar n = a.norm();
  if (n == Scalar(0)) throw DegenerateError("norm_derivative_row: zero-norm quaternion");
  return (vec4(a).transpose() * J_a) / n;
}

/// True when ||x|| = 1 + eps 0 within tol.
template <typename Scalar>
bool is_unit(const DualQuaternion<Scalar>& x, Scalar tol = Scalar(1e-10)) {
  using std::abs;
  const Scalar pn = x.primary().squared_norm();
  const Scalar dn = x.primary().coeffs().dot(x.dual().coeffs());
  return abs(pn - Scalar(1)) <= tol && abs(dn) <= tol;
}

/// Rescales a nearly unit dual quaternion back onto the unit set.
template <typename Scalar>
DualQuaternion<Scalar> normalize(const DualQuaternion<Scalar>& x) {
  const Scalar pn = x.primary().norm();
  if (pn == Scalar(0)) throw DegenerateError("normalize: primary part is zero");
  const Quaternion<Scalar> r = x.primary() / pn;
  Quaternion<Scalar> d = x.dual() / pn;
  // remove the component of d along r so that P . D = 0
  d = d - r * r.coeffs().dot(d.coeffs());
  return DualQuaternion<Scalar>(r, d);
}

/// Returns x or -x, whichever is closer to the reference in vec8.
template <typename Scalar>
DualQuaternion<Scalar> align_sign(const DualQuaternion<Scalar>& x, const DualQuaternion<Scalar>& reference) {
  return vec8(x).dot(vec8(reference)) < Scalar(0) ? -x : x;
}

/// Applies the pose x to a point: x (1 + eps p) x* = 1 + eps (r p r* + t).
template <typename Scalar>
Quaternion<Scalar> transform_point(const DualQuaternion<Scalar>& x, const Quaternion<Scalar>& p) {
  return x.primary() * p * x.primary().conjugate() + x.translation();
}

/// Rotation matrix of a unit quaternion.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> rotation_matrix(const Quaternion<Scalar>& r) {
  return Eigen::Quaternion<Scalar>(r.w(), r.x(), r.y(), r.z()).toRotationMatrix();
}

}  // namespace dqvfi
