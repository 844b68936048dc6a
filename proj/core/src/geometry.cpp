#include "magcal/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace magcal {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSmallAngle = 1e-7;   // below this, Taylor branches
constexpr double kGimbalMargin = 1e-6; // rad from +-pi/2
}  // namespace

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Vec3 unskew(const Mat3& s) { return Vec3(s(2, 1), s(0, 2), s(1, 0)); }

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

bool is_rotation(const Mat3& c, double tol) {
  const Mat3 gram = c.transpose() * c - Mat3::Identity();
  return gram.cwiseAbs().maxCoeff() <= tol &&
         std::abs(c.determinant() - 1.0) <= tol;
}

Dcm dcm_from_euler(const EulerRpy& e) {
  const double cr = std::cos(e.roll), sr = std::sin(e.roll);
  const double cp = std::cos(e.pitch), sp = std::sin(e.pitch);
  const double cy = std::cos(e.yaw), sy = std::sin(e.yaw);
  // Rx(roll) * Ry(pitch) * Rz(yaw), expanded.
  Dcm c;
  c << cp * cy, cp * sy, -sp,
      -cr * sy + sr * sp * cy, cr * cy + sr * sp * sy, sr * cp,
      sr * sy + cr * sp * cy, -sr * cy + cr * sp * sy, cr * cp;
  return c;
}

EulerRpy euler_from_dcm(const Dcm& c) {
  const double sp = std::clamp(-c(0, 2), -1.0, 1.0);
  const double pitch = std::asin(sp);
  if (kPi / 2.0 - std::abs(pitch) < kGimbalMargin) {
    throw GimbalLockError("pitch within 1e-6 rad of +-pi/2");
  }
  EulerRpy e;
  e.pitch = pitch;
  e.roll = std::atan2(c(1, 2), c(2, 2));
  e.yaw = std::atan2(c(0, 1), c(0, 0));
  return e;
}

Dcm dcm_from_rotvec(const RotVec& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b;  // R = I + a*[v]x + b*[v]x^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = skew(v);
  return Mat3::Identity() + a * k + b * k * k;
}

RotVec rotvec_from_dcm(const Dcm& c) {
  const double cos_theta = std::clamp((c.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  const Vec3 w = 0.5 * unskew(c - c.transpose());  // = sin(theta) * axis

  if (theta < kSmallAngle) {
    return w * (1.0 + theta * theta / 6.0);
  }
  if (theta < kPi - kSmallAngle) {
    return w * (theta / std::sin(theta));
  }

  // Near pi the skew part degenerates; recover the axis from the symmetric
  // part: (R + R^T)/2 = I + (1 - cos t)(aa^T - I).
  const Mat3 sym = 0.5 * (c + c.transpose());
  const Mat3 outer =
      Mat3::Identity() + (sym - Mat3::Identity()) / (1.0 - cos_theta);
  int j = 0;
  outer.diagonal().maxCoeff(&j);
  Vec3 axis = outer.col(j);
  axis /= std::sqrt(std::max(outer(j, j), 1e-300));
  axis.normalize();

  if (w.norm() > 1e-12) {
    // sin(theta) still carries the sign of the axis
    if (axis.dot(w) < 0.0) axis = -axis;
  } else {
    // exactly pi: first nonzero component positive
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > 1e-12) {
        if (axis[i] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return theta * axis;
}

RotVec relative_rotvec(const Dcm& c_prev, const Dcm& c_curr) {
  return rotvec_from_dcm(c_curr * c_prev.transpose());
}

Mat3 so3_right_jacobian_inverse(const RotVec& phi) {
  const double theta2 = phi.squaredNorm();
  const double theta = std::sqrt(theta2);
  double coeff;
  if (theta < 1e-5) {
    coeff = 1.0 / 12.0 + theta2 / 720.0;
  } else {
    coeff = 1.0 / theta2 -
            (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  const Mat3 k = skew(phi);
  return Mat3::Identity() + 0.5 * k + coeff * k * k;
}

}  // namespace magcal
